#include "hs/fbdiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "hs/errors.hpp"

namespace hs::fbdiag {

namespace {

template <class F>
void for_each_face_neighbour(const Grid& g, std::size_t idx, F f) {
  for (int ax = 0; ax < g.dimension(); ++ax) {
    for (int side : {-1, 1}) {
      const auto c = g.coords(idx);
      const int nc = c[ax] + side;
      if (nc < 0 || nc >= g.shape()[ax]) continue;
      f(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + side * g.stride(ax)), ax, side);
    }
  }
}

double staircase_factor(int dim) { return dim == 2 ? std::numbers::pi / 4.0 : 2.0 / 3.0; }

}  // namespace

RegionFrame make_frame(const Domain& d, const Mask& active, double t) {
  const Grid& g = d.grid;
  RegionFrame fr;
  fr.t = t;
  fr.active = active;
  const double vol = g.cell_volume();
  const double h = g.h();
  std::size_t faces = 0;
  for (std::size_t idx : d.fluid_cells) {
    if (!active[idx]) continue;
    ++fr.active_cells;
    fr.area += vol;
    fr.weighted_measure += (1.0 - d.u_init[idx]) * vol;
    const Point x = g.center(idx);
    for_each_face_neighbour(g, idx, [&](std::size_t nb, int ax, int side) {
      if (g.role(nb) == CellRole::Slot || active[nb]) return;
      Point p = x;
      p[ax] += 0.5 * side * h;
      fr.fb_points.push_back(p);
      ++faces;
    });
  }
  fr.fb_length = static_cast<double>(faces) * std::pow(h, g.dimension() - 1) * staircase_factor(g.dimension());
  return fr;
}

RegionSeries extract_regions(const Domain& d, const std::vector<std::vector<double>>& fields,
                             const std::vector<double>& times, double activation_rel) {
  if (fields.size() != times.size()) throw ConfigError("one time per field is required");
  RegionSeries series;
  for (std::size_t s = 0; s < fields.size(); ++s) {
    const auto& f = fields[s];
    double fmax = 0.0;
    for (std::size_t idx : d.fluid_cells) fmax = std::max(fmax, f[idx]);
    const double threshold = activation_rel > 0.0 ? activation_rel * fmax : 0.0;
    Mask m(d.size(), 0);
    if (fmax > 0.0) {
      for (std::size_t idx : d.fluid_cells) m[idx] = f[idx] > threshold ? 1 : 0;
    }
    series.frames.push_back(make_frame(d, m, times[s]));
  }
  return series;
}

int count_components(const Grid& g, const Mask& mask) {
  std::vector<std::uint8_t> seen(g.size(), 0);
  int components = 0;
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (!mask[start] || seen[start]) continue;
    ++components;
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      const std::size_t idx = q.front();
      q.pop();
      for_each_face_neighbour(g, idx, [&](std::size_t nb, int, int) {
        if (mask[nb] && !seen[nb]) {
          seen[nb] = 1;
          q.push(nb);
        }
      });
    }
  }
  return components;
}

Mask wet_mask(const Domain& d, const Mask& active, double tol) {
  Mask m(d.size(), 0);
  for (std::size_t idx : d.fluid_cells) {
    m[idx] = (active[idx] || d.u_init[idx] >= 1.0 - tol) ? 1 : 0;
  }
  return m;
}

RadiusStats radius_stats(const std::vector<Point>& points, const Point& center, int dim) {
  RadiusStats s;
  if (points.empty()) return s;
  s.min = std::numeric_limits<double>::infinity();
  for (const Point& p : points) {
    const double r = distance(p, center, dim);
    s.min = std::min(s.min, r);
    s.max = std::max(s.max, r);
    s.mean += r;
  }
  s.count = points.size();
  s.mean /= static_cast<double>(s.count);
  return s;
}

double hausdorff_cells(const Grid& g, const Mask& a, const Mask& b) {
  auto boundary = [&](const Mask& m) {
    std::vector<std::array<int, 3>> out;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      if (!m[idx]) continue;
      bool edge = false;
      for_each_face_neighbour(g, idx, [&](std::size_t nb, int, int) { edge = edge || !m[nb]; });
      if (edge) out.push_back(g.coords(idx));
    }
    return out;
  };
  const bool a_empty = std::find(a.begin(), a.end(), 1) == a.end();
  const bool b_empty = std::find(b.begin(), b.end(), 1) == b.end();
  if (a_empty && b_empty) return 0.0;
  if (a_empty || b_empty) return std::numeric_limits<double>::infinity();
  const auto ba = boundary(a);
  const auto bb = boundary(b);
  double worst = 0.0;
  auto one_way = [&](const Mask& from, const Mask& to, const std::vector<std::array<int, 3>>& target) {
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      if (!from[idx] || to[idx]) continue;
      const auto c = g.coords(idx);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : target) {
        const double dx = c[0] - q[0], dy = c[1] - q[1], dz = c[2] - q[2];
        best = std::min(best, dx * dx + dy * dy + dz * dz);
      }
      worst = std::max(worst, std::sqrt(best));
    }
  };
  one_way(a, b, bb);
  one_way(b, a, ba);
  return worst;
}

double min_diameter(const std::vector<Point>& points, int dim, int K) {
  if (points.empty()) return 0.0;
  if (K < 1) throw ConfigError("min_diameter needs at least one direction");
  std::vector<Point> dirs;
  if (dim == 2) {
    for (int k = 0; k < K; ++k) {
      const double phi = std::numbers::pi * k / K;
      dirs.push_back({std::cos(phi), std::sin(phi), 0.0});
    }
  } else {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < K; ++k) {
      const double z = (k + 0.5) / K;
      const double r = std::sqrt(1.0 - z * z);
      dirs.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Point& e : dirs) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Point& p : points) {
      const double s = p[0] * e[0] + p[1] * e[1] + p[2] * e[2];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    best = std::min(best, hi - lo);
  }
  return best;
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::Regular: return "regular";
    case PointClass::CuspSuspect: return "cusp-suspect";
    case PointClass::Unresolved: return "unresolved";
    case PointClass::Excluded: return "excluded";
  }
  return "unresolved";
}

std::vector<double> geometric_radii(double r_max, int count) {
  std::vector<double> r;
  for (int i = 0; i < count; ++i) r.push_back(r_max / std::pow(2.0, i));
  return r;
}

FBPointReport classify_point(const Grid& g, const Mask& active, const Point& x0, std::vector<double> radii,
                             const ClassifyThresholds& th, const SlotGeometry* slot) {
  FBPointReport rep;
  rep.point = x0;
  const int dim = g.dimension();
  const double h = g.h();
  if (slot && slot->signed_distance(x0) < th.slot_exclusion_cells * h) {
    rep.classification = PointClass::Excluded;
    rep.warnings.push_back("point lies within the slot exclusion distance");
    return rep;
  }
  std::sort(radii.begin(), radii.end(), std::greater<>());
  const BoundingBox ext = g.extent();
  for (double r : radii) {
    bool fits = true;
    for (int d = 0; d < dim; ++d) {
      if (x0[d] - r < ext.lower[d] || x0[d] + r > ext.upper[d]) fits = false;
    }
    if (!fits) {
      std::ostringstream msg;
      msg << "radius " << r << " exceeds the grid and was dropped";
      rep.warnings.push_back(msg.str());
      continue;
    }
    if (r < 4.0 * h) {
      std::ostringstream msg;
      msg << "radius " << r << " is below 4h";
      rep.warnings.push_back(msg.str());
    }
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int d = 0; d < dim; ++d) {
      lo[d] = std::max(0, static_cast<int>(std::floor((x0[d] - r - g.origin()[d]) / h)));
      hi[d] = std::min(g.shape()[d] - 1, static_cast<int>(std::ceil((x0[d] + r - g.origin()[d]) / h)));
    }
    std::size_t fluid = 0, wet = 0;
    std::vector<Point> dry;
    for (int k = lo[2]; k <= hi[2]; ++k)
      for (int j = lo[1]; j <= hi[1]; ++j)
        for (int i = lo[0]; i <= hi[0]; ++i) {
          const std::size_t idx = g.index(i, j, k);
          if (g.role(idx) == CellRole::Slot) continue;
          const Point c = g.center(idx);
          if (distance(c, x0, dim) > r) continue;
          ++fluid;
          if (active[idx]) ++wet; else dry.push_back(c);
        }
    rep.radii.push_back(r);
    rep.density.push_back(fluid ? static_cast<double>(wet) / static_cast<double>(fluid) : 0.0);
    const double md = min_diameter(dry, dim, th.directions);
    rep.min_diameter.push_back(md);
    rep.md_ratio.push_back(md / r);
  }
  const std::size_t n = rep.radii.size();
  if (n < 3) {
    rep.warnings.push_back("fewer than 3 usable radii");
    rep.classification = PointClass::Unresolved;
    return rep;
  }
  bool regular = std::abs(rep.density.back() - 0.5) <= th.delta_reg;
  bool cusp = true;
  for (std::size_t i = 1; i < n; ++i) {
    const double slack = h / rep.radii[i];
    if (std::abs(rep.density[i] - 0.5) > std::abs(rep.density[i - 1] - 0.5) + slack) regular = false;
    if (!(rep.md_ratio[i] < rep.md_ratio[i - 1] - slack)) cusp = false;
  }
  rep.classification = regular ? PointClass::Regular : cusp ? PointClass::CuspSuspect : PointClass::Unresolved;
  return rep;
}

double pair_slope(const RegionFrame& a, const RegionFrame& b) {
  if (!(b.t > a.t)) throw ConfigError("pair_slope needs increasing times");
  std::size_t gained = 0;
  for (std::size_t i = 0; i < b.active.size(); ++i) gained += (b.active[i] && !a.active[i]) ? 1 : 0;
  const double vol = b.active_cells ? b.area / static_cast<double>(b.active_cells) : 0.0;
  return static_cast<double>(gained) * vol / (b.t - a.t);
}

ContinuityReport measure_continuity(const RegionSeries& series, double lambda) {
  ContinuityReport rep;
  rep.degenerate = lambda >= 1.0;
  rep.lambda_factor = rep.degenerate ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - lambda);
  const auto& fr = series.frames;
  for (std::size_t i = 1; i < fr.size(); ++i) {
    SlopeEntry e;
    e.s = fr[i - 1].t;
    e.t = fr[i].t;
    e.slope = pair_slope(fr[i - 1], fr[i]);
    e.increment = e.slope * (e.t - e.s);
    rep.slopes.push_back(e);
    rep.max_slope = std::max(rep.max_slope, e.slope);
  }
  if (!rep.slopes.empty()) {
    std::vector<double> s;
    for (const auto& e : rep.slopes) s.push_back(e.slope);
    std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(s.size() / 2), s.end());
    const double median = s[s.size() / 2];
    for (auto& e : rep.slopes) e.spike = median > 0.0 ? e.slope > 5.0 * median : e.slope > 0.0 && rep.slopes.size() > 2;
  }
  return rep;
}

EnergyReport energy_estimate_check(const Domain& d, const std::vector<std::vector<TemperatureField>>& series,
                                   const std::vector<EnergyBall>& balls) {
  const Grid& g = d.grid;
  const int dim = g.dimension();
  const double h = g.h();
  const double vol = g.cell_volume();
  EnergyReport rep;
  for (const EnergyBall& b : balls) {
    if (!(b.r > 0.0 && b.R > b.r)) throw ConfigError("energy balls need 0 < r < R");
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      if (g.role(idx) == CellRole::Slot && distance(g.center(idx), b.center, dim) <= b.R + h) {
        throw ConfigError("energy ball meets the slot");
      }
    }
  }
  for (std::size_t f = 0; f < series.size(); ++f) {
    for (std::size_t bi = 0; bi < balls.size(); ++bi) {
      const EnergyBall& b = balls[bi];
      EnergyEntry e;
      e.field = f;
      e.ball = bi;
      double prev_t = 0.0;
      for (const TemperatureField& snap : series[f]) {
        const double w = snap.t - prev_t;
        prev_t = snap.t;
        if (w <= 0.0) continue;
        const auto& th = snap.theta;
        for (std::size_t idx = 0; idx < g.size(); ++idx) {
          if (g.role(idx) == CellRole::Slot) continue;
          const Point c = g.center(idx);
          const double r = distance(c, b.center, dim);
          if (r <= b.R) e.mass += w * th[idx] * th[idx] * vol;
          if (r > b.r + h) continue;
          for (int ax = 0; ax < dim; ++ax) {
            if (g.coords(idx)[ax] + 1 >= g.shape()[ax]) continue;
            const std::size_t nb = idx + static_cast<std::size_t>(g.stride(ax));
            if (g.role(nb) == CellRole::Slot) continue;
            Point mid = c;
            mid[ax] += 0.5 * h;
            if (distance(mid, b.center, dim) > b.r) continue;
            const double grad = (th[nb] - th[idx]) / h;
            e.gradient += w * grad * grad * vol;
          }
        }
      }
      const double span2 = (b.R - b.r) * (b.R - b.r);
      e.ratio = e.mass > 0.0 ? e.gradient * span2 / e.mass : 0.0;
      e.holds = e.gradient <= rep.constant / span2 * e.mass * (1.0 + 1e-12);
      rep.entries.push_back(e);
    }
  }
  return rep;
}

}  // namespace hs::fbdiag
