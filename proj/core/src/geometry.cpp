#include "hs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "hs/errors.hpp"

namespace hs {

double norm(const Point& a, int dimension) {
  double s = 0.0;
  for (int d = 0; d < dimension; ++d) s += a[d] * a[d];
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b, int dimension) {
  double s = 0.0;
  for (int d = 0; d < dimension; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

namespace {

void check_dimension(int dimension) {
  if (dimension != 2 && dimension != 3) {
    throw ConfigError("dimension must be 2 or 3, got " + std::to_string(dimension));
  }
}

double cross2(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

// Distance from p to segment [a, b] in the plane.
double segment_distance(const Point& p, const Point& a, const Point& b) {
  const double ex = b[0] - a[0];
  const double ey = b[1] - a[1];
  const double len2 = ex * ex + ey * ey;
  double s = len2 > 0.0 ? ((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  const double dx = p[0] - (a[0] + s * ex);
  const double dy = p[1] - (a[1] + s * ey);
  return std::hypot(dx, dy);
}

// Fibonacci lattice on the unit sphere.
std::vector<Point> sphere_directions(std::size_t count) {
  std::vector<Point> dirs;
  dirs.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return dirs;
}

}  // namespace

SlotGeometry SlotGeometry::ball(int dimension, const Point& center, double radius) {
  return balls(dimension, {center}, {radius});
}

SlotGeometry SlotGeometry::balls(int dimension, std::vector<Point> centers,
                                 std::vector<double> radii) {
  check_dimension(dimension);
  if (centers.empty() || centers.size() != radii.size()) {
    throw ConfigError("slot needs matching, non-empty centers and radii");
  }
  for (double r : radii) {
    if (!(r > 0.0)) throw ConfigError("slot radii must be positive");
  }
  for (std::size_t a = 0; a < centers.size(); ++a) {
    if (dimension == 2) centers[a][2] = 0.0;
    for (std::size_t b = 0; b < a; ++b) {
      if (distance(centers[a], centers[b], dimension) <= radii[a] + radii[b]) {
        throw ConfigError("slot balls " + std::to_string(b) + " and " + std::to_string(a) +
                          " are not disjoint");
      }
    }
  }
  SlotGeometry g;
  g.dimension_ = dimension;
  g.kind_ = centers.size() == 1 ? SlotKind::Ball : SlotKind::UnionOfBalls;
  g.centers_ = std::move(centers);
  g.radii_ = std::move(radii);
  return g;
}

SlotGeometry SlotGeometry::rounded_polygon(std::vector<Point> vertices, double corner_radius) {
  if (vertices.size() < 3) throw ConfigError("rounded polygon needs at least 3 vertices");
  if (corner_radius < 0.0) throw ConfigError("corner radius must be nonnegative");
  double area = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    vertices[i][2] = 0.0;
    area += cross2(vertices[i], vertices[(i + 1) % vertices.size()]);
  }
  if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    const Point& c = vertices[(i + 2) % n];
    const Point e1{b[0] - a[0], b[1] - a[1], 0.0};
    const Point e2{c[0] - b[0], c[1] - b[1], 0.0};
    if (cross2(e1, e2) <= 0.0) throw ConfigError("rounded polygon must be strictly convex");
  }
  SlotGeometry g;
  g.dimension_ = 2;
  g.kind_ = SlotKind::RoundedPolygon;
  g.vertices_ = std::move(vertices);
  g.corner_radius_ = corner_radius;
  return g;
}

double SlotGeometry::signed_distance(const Point& x) const {
  if (kind_ != SlotKind::RoundedPolygon) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centers_.size(); ++k) {
      best = std::min(best, distance(x, centers_[k], dimension_) - radii_[k]);
    }
    return best;
  }
  const std::size_t n = vertices_.size();
  bool inside = true;
  double edge_dist = std::numeric_limits<double>::infinity();
  double inner = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices_[i];
    const Point& b = vertices_[(i + 1) % n];
    const double ex = b[0] - a[0];
    const double ey = b[1] - a[1];
    const double len = std::hypot(ex, ey);
    // Outward normal of a counter-clockwise polygon.
    const double side = ((x[0] - a[0]) * ey - (x[1] - a[1]) * ex) / len;
    if (side > 0.0) inside = false;
    inner = std::min(inner, -side);
    edge_dist = std::min(edge_dist, segment_distance(x, a, b));
  }
  const double d = inside ? -inner : edge_dist;
  return d - corner_radius_;
}

BoundingBox SlotGeometry::bounds() const {
  BoundingBox box;
  const double inf = std::numeric_limits<double>::infinity();
  for (int d = 0; d < 3; ++d) {
    box.lower[d] = d < dimension_ ? inf : 0.0;
    box.upper[d] = d < dimension_ ? -inf : 0.0;
  }
  if (kind_ != SlotKind::RoundedPolygon) {
    for (std::size_t k = 0; k < centers_.size(); ++k) {
      for (int d = 0; d < dimension_; ++d) {
        box.lower[d] = std::min(box.lower[d], centers_[k][d] - radii_[k]);
        box.upper[d] = std::max(box.upper[d], centers_[k][d] + radii_[k]);
      }
    }
  } else {
    for (const auto& v : vertices_) {
      for (int d = 0; d < 2; ++d) {
        box.lower[d] = std::min(box.lower[d], v[d] - corner_radius_);
        box.upper[d] = std::max(box.upper[d], v[d] + corner_radius_);
      }
    }
  }
  return box;
}

Point SlotGeometry::enclosing_center() const {
  if (kind_ == SlotKind::RoundedPolygon) {
    Point c{0.0, 0.0, 0.0};
    for (const auto& v : vertices_) {
      c[0] += v[0];
      c[1] += v[1];
    }
    c[0] /= static_cast<double>(vertices_.size());
    c[1] /= static_cast<double>(vertices_.size());
    return c;
  }
  if (centers_.size() == 1) return centers_.front();
  const BoundingBox box = bounds();
  Point c{0.0, 0.0, 0.0};
  for (int d = 0; d < dimension_; ++d) c[d] = 0.5 * (box.lower[d] + box.upper[d]);
  return c;
}

double SlotGeometry::enclosing_radius() const {
  const Point c = enclosing_center();
  double r = 0.0;
  if (kind_ == SlotKind::RoundedPolygon) {
    for (const auto& v : vertices_) r = std::max(r, distance(v, c, 2) + corner_radius_);
  } else {
    for (std::size_t k = 0; k < centers_.size(); ++k) {
      r = std::max(r, distance(centers_[k], c, dimension_) + radii_[k]);
    }
  }
  return r;
}

std::vector<BoundarySample> SlotGeometry::sample_boundary(double spacing) const {
  if (!(spacing > 0.0)) throw ConfigError("boundary sample spacing must be positive");
  std::vector<BoundarySample> out;
  if (kind_ != SlotKind::RoundedPolygon) {
    for (std::size_t k = 0; k < centers_.size(); ++k) {
      const Point& c = centers_[k];
      const double r = radii_[k];
      if (dimension_ == 2) {
        const double perimeter = 2.0 * std::numbers::pi * r;
        const auto count = static_cast<std::size_t>(std::ceil(perimeter / spacing));
        for (std::size_t i = 0; i < count; ++i) {
          const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
          const Point nrm{std::cos(phi), std::sin(phi), 0.0};
          out.push_back({{c[0] + r * nrm[0], c[1] + r * nrm[1], 0.0}, nrm,
                         perimeter / static_cast<double>(count)});
        }
      } else {
        const double area = 4.0 * std::numbers::pi * r * r;
        const auto count = static_cast<std::size_t>(std::ceil(area / (spacing * spacing)));
        for (const Point& nrm : sphere_directions(std::max<std::size_t>(count, 4))) {
          out.push_back({{c[0] + r * nrm[0], c[1] + r * nrm[1], c[2] + r * nrm[2]}, nrm,
                         area / static_cast<double>(std::max<std::size_t>(count, 4))});
        }
      }
    }
    return out;
  }

  const std::size_t n = vertices_.size();
  const double rho = corner_radius_;
  auto edge_normal = [&](std::size_t i) {
    const Point& a = vertices_[i];
    const Point& b = vertices_[(i + 1) % n];
    const double ex = b[0] - a[0];
    const double ey = b[1] - a[1];
    const double len = std::hypot(ex, ey);
    return Point{ey / len, -ex / len, 0.0};
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices_[i];
    const Point& b = vertices_[(i + 1) % n];
    const Point nrm = edge_normal(i);
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const auto count = static_cast<std::size_t>(std::ceil(len / spacing));
    for (std::size_t s = 0; s < count; ++s) {
      const double f = static_cast<double>(s) / static_cast<double>(count);
      out.push_back({{a[0] + f * (b[0] - a[0]) + rho * nrm[0],
                      a[1] + f * (b[1] - a[1]) + rho * nrm[1], 0.0},
                     nrm, len / static_cast<double>(count)});
    }
    if (rho > 0.0) {
      const Point next = edge_normal((i + 1) % n);
      const double phi0 = std::atan2(nrm[1], nrm[0]);
      double sweep = std::atan2(next[1], next[0]) - phi0;
      while (sweep < 0.0) sweep += 2.0 * std::numbers::pi;
      const double arc = rho * sweep;
      const auto arc_count = static_cast<std::size_t>(std::ceil(arc / spacing));
      for (std::size_t s = 0; s < arc_count; ++s) {
        const double phi = phi0 + sweep * static_cast<double>(s) / static_cast<double>(arc_count);
        const Point dn{std::cos(phi), std::sin(phi), 0.0};
        out.push_back({{b[0] + rho * dn[0], b[1] + rho * dn[1], 0.0}, dn,
                       arc / static_cast<double>(arc_count)});
      }
    }
  }
  return out;
}

double SlotGeometry::crossing_fraction(const Point& outside, const Point& inside) const {
  double lo = 0.0;
  double hi = 1.0;
  auto at = [&](double s) {
    Point p{};
    for (int d = 0; d < 3; ++d) p[d] = outside[d] + s * (inside[d] - outside[d]);
    return signed_distance(p);
  };
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (at(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

Grid::Grid(int dimension, double h, const Point& origin, const std::array<int, 3>& shape,
           std::vector<CellRole> roles)
    : dimension_(dimension), h_(h), origin_(origin), shape_(shape), roles_(std::move(roles)) {
  check_dimension(dimension);
  if (dimension == 2) shape_[2] = 1;
  strides_ = {1, shape_[0], static_cast<std::ptrdiff_t>(shape_[0]) * shape_[1]};
  if (roles_.size() != static_cast<std::size_t>(shape_[0]) * shape_[1] * shape_[2]) {
    throw ConfigError("grid role array does not match its shape");
  }
}

Grid Grid::uniform(int dimension, double h, const Point& origin, const std::array<int, 3>& shape) {
  std::array<int, 3> s = shape;
  if (dimension == 2) s[2] = 1;
  std::vector<CellRole> roles(static_cast<std::size_t>(s[0]) * s[1] * s[2], CellRole::Fluid);
  Grid g(dimension, h, origin, s, std::move(roles));
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.distance_to_band(idx) == 0) g.roles_[idx] = CellRole::FarField;
  }
  return g;
}

double Grid::cell_volume() const { return std::pow(h_, dimension_); }

std::array<int, 3> Grid::coords(std::size_t idx) const {
  const auto nx = static_cast<std::size_t>(shape_[0]);
  const auto ny = static_cast<std::size_t>(shape_[1]);
  return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny),
          static_cast<int>(idx / (nx * ny))};
}

Point Grid::center(std::size_t idx) const {
  const auto c = coords(idx);
  Point p{0.0, 0.0, 0.0};
  for (int d = 0; d < dimension_; ++d) p[d] = origin_[d] + (c[d] + 0.5) * h_;
  return p;
}

std::size_t Grid::locate(const Point& x) const {
  std::array<int, 3> c{0, 0, 0};
  for (int d = 0; d < dimension_; ++d) {
    c[d] = std::clamp(static_cast<int>(std::floor((x[d] - origin_[d]) / h_)), 0, shape_[d] - 1);
  }
  return index(c[0], c[1], c[2]);
}

std::size_t Grid::count(CellRole role) const {
  return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), role));
}

int Grid::distance_to_band(std::size_t idx) const {
  const auto c = coords(idx);
  int best = std::numeric_limits<int>::max();
  for (int d = 0; d < dimension_; ++d) {
    best = std::min({best, c[d], shape_[d] - 1 - c[d]});
  }
  return std::max(0, best - kBand + 1);
}

BoundingBox Grid::extent() const {
  BoundingBox box;
  for (int d = 0; d < dimension_; ++d) {
    box.lower[d] = origin_[d];
    box.upper[d] = origin_[d] + shape_[d] * h_;
  }
  return box;
}

// ---------------------------------------------------------------------------

double required_margin(const SlotGeometry& slot, double h, const ReachRequirement& reach) {
  const BoundingBox box = slot.bounds();
  const double pad = reach.radius + (Grid::kBand + 2) * h;
  double need = 0.0;
  for (int d = 0; d < slot.dimension(); ++d) {
    need = std::max(need, pad - (reach.center[d] - box.lower[d]));
    need = std::max(need, pad - (box.upper[d] - reach.center[d]));
  }
  return need + h;
}

Grid build_grid(const SlotGeometry& slot, double h, double margin,
                const std::optional<ReachRequirement>& reach) {
  if (!(h > 0.0)) throw ConfigError("grid spacing h must be positive");
  if (!(margin > 0.0)) throw ConfigError("grid margin must be positive");
  const int dim = slot.dimension();
  const BoundingBox box = slot.bounds();
  Point origin{0.0, 0.0, 0.0};
  std::array<int, 3> shape{1, 1, 1};
  for (int d = 0; d < dim; ++d) {
    const double lo = box.lower[d] - margin;
    const double hi = box.upper[d] + margin;
    shape[d] = static_cast<int>(std::ceil((hi - lo) / h - 1e-9));
    origin[d] = 0.5 * (lo + hi) - 0.5 * shape[d] * h;
  }
  const double cells = static_cast<double>(shape[0]) * shape[1] * shape[2];
  if (cells > 4.0e8) throw ConfigError("grid too large: reduce margin or increase h");

  if (reach) {
    const double guard = (Grid::kBand + 2) * h;
    for (int d = 0; d < dim; ++d) {
      const double room_lo = reach->center[d] - origin[d] - guard;
      const double room_hi = origin[d] + shape[d] * h - reach->center[d] - guard;
      if (reach->radius > room_lo || reach->radius > room_hi) {
        const double need = required_margin(slot, h, *reach);
        std::ostringstream msg;
        msg << "margin " << margin << " cannot hold the supersolution envelope of radius "
            << reach->radius << "; required margin >= " << need;
        throw EnvelopeError(msg.str(), need);
      }
    }
  }

  std::vector<CellRole> roles(static_cast<std::size_t>(cells), CellRole::Fluid);
  Grid grid(dim, h, origin, shape, roles);
  std::vector<CellRole> classified(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.distance_to_band(idx) == 0) {
      classified[idx] = CellRole::FarField;
    } else if (slot.contains(grid.center(idx))) {
      classified[idx] = CellRole::Slot;
    } else {
      classified[idx] = CellRole::Fluid;
    }
  }
  return Grid(dim, h, origin, shape, std::move(classified));
}

int count_slot_components(const Grid& grid) {
  std::vector<std::uint8_t> seen(grid.size(), 0);
  int components = 0;
  for (std::size_t start = 0; start < grid.size(); ++start) {
    if (grid.role(start) != CellRole::Slot || seen[start]) continue;
    ++components;
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      const std::size_t idx = q.front();
      q.pop();
      const auto c = grid.coords(idx);
      for (int d = 0; d < grid.dimension(); ++d) {
        for (int s : {-1, 1}) {
          const int nc = c[d] + s;
          if (nc < 0 || nc >= grid.shape()[d]) continue;
          const std::size_t nb = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + s * grid.stride(d));
          if (grid.role(nb) == CellRole::Slot && !seen[nb]) {
            seen[nb] = 1;
            q.push(nb);
          }
        }
      }
    }
  }
  return components;
}

}  // namespace hs
