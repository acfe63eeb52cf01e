#include "hs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hs/errors.hpp"
#include "json.hpp"

namespace hs {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point to_point(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) {
    throw ConfigError("expected a coordinate array of length 2 or 3");
  }
  Point p{0.0, 0.0, 0.0};
  for (std::size_t d = 0; d < j.size(); ++d) p[d] = j.at(d).get<double>();
  return p;
}

json from_point(const Point& p, int dimension) {
  json a = json::array();
  for (int d = 0; d < dimension; ++d) a.push_back(p[d]);
  return a;
}

std::vector<double> read_raster(const std::filesystem::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open raster file " + path.string());
  std::vector<double> v(count);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double)) {
    throw ConfigError("raster file " + path.string() + " is shorter than its shape");
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

InitialData InitialData::zero() { return constant(0.0, 0.0); }

InitialData InitialData::constant(double value, double radius, const Point& center) {
  InitialData d;
  d.kind = Kind::Constant;
  d.value = value;
  d.radius = radius;
  d.center = center;
  return d;
}

InitialData InitialData::radial(std::vector<double> knots, std::vector<double> values,
                                const Point& center) {
  InitialData d;
  d.kind = Kind::Radial;
  d.knots = std::move(knots);
  d.values = std::move(values);
  d.center = center;
  return d;
}

double InitialData::evaluate(const Point& x, int dimension) const {
  switch (kind) {
    case Kind::Constant:
      return distance(x, center, dimension) < radius ? value : 0.0;
    case Kind::Radial: {
      const double r = distance(x, center, dimension);
      if (r < knots.front()) return values.front();
      // Last knot not exceeding r; repeated knots resolve to the later value.
      const auto it = std::upper_bound(knots.begin(), knots.end(), r);
      const auto i = static_cast<std::size_t>(it - knots.begin()) - 1;
      if (i + 1 >= knots.size()) return values.back();
      const double span = knots[i + 1] - knots[i];
      const double s = span > 0.0 ? (r - knots[i]) / span : 0.0;
      return values[i] + s * (values[i + 1] - values[i]);
    }
    case Kind::Raster: {
      std::array<int, 3> c{0, 0, 0};
      for (int d = 0; d < dimension; ++d) {
        const int ci = static_cast<int>(std::floor((x[d] - origin[d]) / spacing));
        if (ci < 0 || ci >= shape[d]) return 0.0;
        c[d] = ci;
      }
      return data[(static_cast<std::size_t>(c[2]) * shape[1] + c[1]) * shape[0] + c[0]];
    }
  }
  return 0.0;
}

double InitialData::max_value() const {
  switch (kind) {
    case Kind::Constant: return std::max(0.0, value);
    case Kind::Radial: return *std::max_element(values.begin(), values.end());
    case Kind::Raster: return data.empty() ? 0.0 : *std::max_element(data.begin(), data.end());
  }
  return 0.0;
}

double InitialData::min_value() const {
  switch (kind) {
    case Kind::Constant: return std::min(0.0, value);
    case Kind::Radial: return *std::min_element(values.begin(), values.end());
    case Kind::Raster: return data.empty() ? 0.0 : *std::min_element(data.begin(), data.end());
  }
  return 0.0;
}

double InitialData::support_radius(const Point& about, int dimension) const {
  const double offset = distance(about, center, dimension);
  switch (kind) {
    case Kind::Constant:
      if (value == 0.0 || radius <= 0.0) return 0.0;
      return radius + offset;
    case Kind::Radial: {
      if (values.back() != 0.0) return kInf;
      // Walk back over the trailing zero run.
      std::size_t i = values.size() - 1;
      while (i > 0 && values[i - 1] == 0.0) --i;
      if (i == 0) return 0.0;
      return knots[i] + offset;
    }
    case Kind::Raster: {
      double r = 0.0;
      const double half_diag = 0.5 * spacing * std::sqrt(static_cast<double>(dimension));
      for (std::size_t idx = 0; idx < data.size(); ++idx) {
        if (data[idx] == 0.0) continue;
        const auto nx = static_cast<std::size_t>(shape[0]);
        const auto ny = static_cast<std::size_t>(shape[1]);
        const int c[3] = {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny),
                          static_cast<int>(idx / (nx * ny))};
        Point x{0.0, 0.0, 0.0};
        for (int d = 0; d < dimension; ++d) x[d] = origin[d] + (c[d] + 0.5) * spacing;
        r = std::max(r, distance(x, about, dimension) + half_diag);
      }
      return r;
    }
  }
  return kInf;
}

// ---------------------------------------------------------------------------

BoundaryData BoundaryData::constant(double value) {
  BoundaryData b;
  b.kind = Kind::Constant;
  b.value = value;
  return b;
}

double BoundaryData::evaluate(const Point& x, int dimension) const {
  if (kind == Kind::Constant) return value;
  std::size_t best = 0;
  double best_d = kInf;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = distance(x, points[i], dimension);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return values[best];
}

double BoundaryData::max_value() const {
  if (kind == Kind::Constant) return value;
  return *std::max_element(values.begin(), values.end());
}

// ---------------------------------------------------------------------------

void Scenario::validate() const {
  if (!(h > 0.0)) throw ConfigError("h must be positive");
  if (margin && !(*margin > 0.0)) throw ConfigError("margin must be positive");
  if (!(t_max >= 0.0)) throw ConfigError("t_max must be nonnegative");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
  if (m_list.empty()) throw ConfigError("m_list must not be empty");
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    if (!(m_list[i] > 0.0)) throw ConfigError("m_list entries must be positive");
    if (i > 0 && !(m_list[i] > m_list[i - 1])) {
      throw ConfigError("m_list must be strictly increasing");
    }
  }

  switch (u_init.kind) {
    case InitialData::Kind::Constant:
      if (!(u_init.radius >= 0.0)) throw ConfigError("u_init radius must be nonnegative");
      break;
    case InitialData::Kind::Radial:
      if (u_init.knots.empty() || u_init.knots.size() != u_init.values.size()) {
        throw ConfigError("radial u_init needs matching, non-empty knots and values");
      }
      for (std::size_t i = 1; i < u_init.knots.size(); ++i) {
        if (u_init.knots[i] < u_init.knots[i - 1]) {
          throw ConfigError("radial u_init knots must be nondecreasing");
        }
        if (i > 1 && u_init.knots[i] == u_init.knots[i - 2]) {
          throw ConfigError("radial u_init knots may repeat at most twice");
        }
      }
      break;
    case InitialData::Kind::Raster: {
      if (!(u_init.spacing > 0.0)) throw ConfigError("raster u_init spacing must be positive");
      std::size_t count = 1;
      for (int d = 0; d < dimension(); ++d) {
        if (u_init.shape[d] <= 0) throw ConfigError("raster u_init shape must be positive");
        count *= static_cast<std::size_t>(u_init.shape[d]);
      }
      if (u_init.data.size() != count) throw ConfigError("raster u_init data does not match shape");
      for (double v : u_init.data) {
        if (!std::isfinite(v)) throw ConfigError("raster u_init contains non-finite values");
      }
      break;
    }
  }
  if (u_init.min_value() < 0.0 || u_init.max_value() > 1.0) {
    throw ConfigError("u_init must take values in [0, 1]");
  }

  if (p.kind == BoundaryData::Kind::Samples) {
    if (p.points.empty() || p.points.size() != p.values.size()) {
      throw ConfigError("p samples need matching, non-empty points and values");
    }
    for (double v : p.values) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("p values must be nonnegative");
    }
  } else if (!(p.value >= 0.0) || !std::isfinite(p.value)) {
    throw ConfigError("p value must be nonnegative");
  }
}

// ---------------------------------------------------------------------------

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    Scenario s;
    s.name = j.value("name", std::string("scenario"));
    const int dim = j.at("dimension").get<int>();

    const json& slot = j.at("slot");
    const std::string slot_kind = slot.value("kind", std::string("balls"));
    if (slot_kind == "balls" || slot_kind == "ball") {
      std::vector<Point> centers;
      for (const auto& c : slot.at("centers")) centers.push_back(to_point(c));
      s.slot = SlotGeometry::balls(dim, centers, slot.at("radii").get<std::vector<double>>());
    } else if (slot_kind == "rounded_polygon") {
      if (dim != 2) throw ConfigError("rounded polygon slots are two-dimensional");
      std::vector<Point> vertices;
      for (const auto& v : slot.at("vertices")) vertices.push_back(to_point(v));
      s.slot = SlotGeometry::rounded_polygon(vertices, slot.value("corner_radius", 0.0));
    } else {
      throw ConfigError("unknown slot kind '" + slot_kind + "'");
    }

    const json& grid = j.at("grid");
    s.h = grid.at("h").get<double>();
    if (grid.contains("margin") && !grid.at("margin").is_null()) {
      if (grid.at("margin").is_string()) {
        if (grid.at("margin").get<std::string>() != "auto") {
          throw ConfigError("grid.margin must be a number or \"auto\"");
        }
      } else {
        s.margin = grid.at("margin").get<double>();
      }
    }

    const json& u = j.at("u_init");
    const std::string u_kind = u.at("kind").get<std::string>();
    Point center{0.0, 0.0, 0.0};
    if (u.contains("center")) center = to_point(u.at("center"));
    if (u_kind == "constant") {
      s.u_init = InitialData::constant(u.at("value").get<double>(),
                                       u.value("radius", kInf), center);
    } else if (u_kind == "radial") {
      s.u_init = InitialData::radial(u.at("knots").get<std::vector<double>>(),
                                     u.at("values").get<std::vector<double>>(), center);
    } else if (u_kind == "raster") {
      InitialData d;
      d.kind = InitialData::Kind::Raster;
      const auto shape = u.at("shape").get<std::vector<int>>();
      if (static_cast<int>(shape.size()) != dim) throw ConfigError("raster shape rank must equal dimension");
      for (int a = 0; a < dim; ++a) d.shape[a] = shape[a];
      d.origin = to_point(u.at("origin"));
      d.spacing = u.at("spacing").get<double>();
      std::size_t count = 1;
      for (int a = 0; a < dim; ++a) count *= static_cast<std::size_t>(std::max(d.shape[a], 0));
      if (u.contains("data")) {
        d.data = u.at("data").get<std::vector<double>>();
      } else {
        d.path = u.at("path").get<std::string>();
        std::filesystem::path file(d.path);
        if (file.is_relative()) file = base_dir / file;
        d.data = read_raster(file, count);
      }
      s.u_init = std::move(d);
    } else {
      throw ConfigError("unknown u_init kind '" + u_kind + "'");
    }

    const json& p = j.at("p");
    const std::string p_kind = p.at("kind").get<std::string>();
    if (p_kind == "constant") {
      s.p = BoundaryData::constant(p.at("value").get<double>());
    } else if (p_kind == "samples") {
      BoundaryData b;
      b.kind = BoundaryData::Kind::Samples;
      for (const auto& pt : p.at("points")) b.points.push_back(to_point(pt));
      b.values = p.at("values").get<std::vector<double>>();
      s.p = std::move(b);
    } else {
      throw ConfigError("unknown p kind '" + p_kind + "'");
    }

    s.t_max = j.at("t_max").get<double>();
    if (j.contains("m_list")) s.m_list = j.at("m_list").get<std::vector<double>>();
    s.lambda = j.value("lambda", 0.0);
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario schema violation: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.parent_path());
}

std::string scenario_to_json(const Scenario& s) {
  const int dim = s.dimension();
  json j;
  j["name"] = s.name;
  j["dimension"] = dim;
  json slot;
  if (s.slot.kind() == SlotKind::RoundedPolygon) {
    slot["kind"] = "rounded_polygon";
    json verts = json::array();
    for (const auto& v : s.slot.vertices()) verts.push_back(from_point(v, 2));
    slot["vertices"] = verts;
    slot["corner_radius"] = s.slot.corner_radius();
  } else {
    slot["kind"] = "balls";
    json centers = json::array();
    for (const auto& c : s.slot.centers()) centers.push_back(from_point(c, dim));
    slot["centers"] = centers;
    slot["radii"] = s.slot.radii();
  }
  j["slot"] = slot;
  j["grid"] = {{"h", s.h}};
  if (s.margin) j["grid"]["margin"] = *s.margin; else j["grid"]["margin"] = "auto";

  json u;
  u["center"] = from_point(s.u_init.center, dim);
  switch (s.u_init.kind) {
    case InitialData::Kind::Constant:
      u["kind"] = "constant";
      u["value"] = s.u_init.value;
      if (std::isfinite(s.u_init.radius)) u["radius"] = s.u_init.radius;
      break;
    case InitialData::Kind::Radial:
      u["kind"] = "radial";
      u["knots"] = s.u_init.knots;
      u["values"] = s.u_init.values;
      break;
    case InitialData::Kind::Raster:
      u["kind"] = "raster";
      u["shape"] = std::vector<int>(s.u_init.shape.begin(), s.u_init.shape.begin() + dim);
      u["origin"] = from_point(s.u_init.origin, dim);
      u["spacing"] = s.u_init.spacing;
      if (!s.u_init.path.empty()) u["path"] = s.u_init.path; else u["data"] = s.u_init.data;
      break;
  }
  j["u_init"] = u;

  if (s.p.kind == BoundaryData::Kind::Constant) {
    j["p"] = {{"kind", "constant"}, {"value", s.p.value}};
  } else {
    json pts = json::array();
    for (const auto& q : s.p.points) pts.push_back(from_point(q, dim));
    j["p"] = {{"kind", "samples"}, {"points", pts}, {"values", s.p.values}};
  }
  j["t_max"] = s.t_max;
  j["m_list"] = s.m_list;
  j["lambda"] = s.lambda;
  return j.dump(2);
}

// ---------------------------------------------------------------------------

Scenario radial_scenario(double h, double t_max, double lambda) {
  Scenario s;
  s.name = lambda > 0.0 ? "radial-lambda" : "radial";
  s.slot = SlotGeometry::ball(2, {0.0, 0.0, 0.0}, 1.0);
  s.h = h;
  s.u_init = lambda > 0.0 ? InitialData::constant(lambda, 3.0) : InitialData::zero();
  s.p = BoundaryData::constant(1.0);
  s.t_max = t_max;
  s.lambda = lambda;
  return s;
}

Scenario annulus_scenario(double eps_patch, double ramp, double h) {
  if (!(eps_patch >= 0.0 && eps_patch <= 1.0)) throw ConfigError("eps_patch must lie in [0, 1]");
  if (!(ramp >= 0.0 && ramp < 2.0)) throw ConfigError("ramp width must lie in [0, 2)");
  const double top = 1.0 - eps_patch;
  Scenario s;
  s.name = "annulus";
  s.slot = SlotGeometry::ball(2, {0.0, 0.0, 0.0}, 1.0);
  s.h = h;
  s.u_init = ramp > 0.0
                 ? InitialData::radial({3.0 - ramp, 3.0, 5.0, 5.0}, {0.0, top, top, 0.0})
                 : InitialData::radial({3.0, 3.0, 5.0, 5.0}, {0.0, top, top, 0.0});
  s.p = BoundaryData::constant(1.0);
  s.t_max = 3.0;
  s.lambda = top;
  return s;
}

Scenario sandwich_scenario(double h, double k) {
  Scenario s;
  s.name = "sandwich";
  s.slot = SlotGeometry::ball(2, {0.0, 0.0, 0.0}, 1.0);
  s.h = h;
  s.u_init = InitialData::radial({1.0, 2.0, 2.0}, {1.0, 1.0, 0.0});
  s.p = BoundaryData::constant(k);
  s.t_max = 0.2;
  s.lambda = 1.0;
  return s;
}

Scenario two_slot_scenario(double h) {
  Scenario s;
  s.name = "two-slot";
  s.slot = SlotGeometry::balls(2, {{-1.5, 0.0, 0.0}, {1.5, 0.0, 0.0}}, {0.5, 0.5});
  s.h = h;
  s.u_init = InitialData::zero();
  s.p = BoundaryData::constant(1.0);
  s.t_max = 0.25;
  return s;
}

}  // namespace hs
