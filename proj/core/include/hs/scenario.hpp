#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hs/geometry.hpp"

namespace hs {

/// Initial energy u_I. Three representations:
///  - Radial: a profile of the distance to `center`, piecewise linear between
///    `knots`. A repeated knot encodes a jump; the profile is right-continuous.
///    Below the first knot the first value holds, beyond the last the last.
///  - Constant: `value` inside the ball B(center, radius), 0 outside.
///  - Raster: nearest-cell lookup in a cell-centered array.
struct InitialData {
  enum class Kind { Radial, Constant, Raster };

  Kind kind = Kind::Constant;
  Point center{0.0, 0.0, 0.0};

  std::vector<double> knots;
  std::vector<double> values;

  double value = 0.0;
  double radius = 0.0;

  std::string path;
  std::array<int, 3> shape{1, 1, 1};
  Point origin{0.0, 0.0, 0.0};
  double spacing = 0.0;
  std::vector<double> data;

  static InitialData zero();
  static InitialData constant(double value, double radius, const Point& center = {});
  static InitialData radial(std::vector<double> knots, std::vector<double> values,
                            const Point& center = {});

  double evaluate(const Point& x, int dimension) const;
  double max_value() const;
  double min_value() const;
  /// Radius about `about` outside of which u_I vanishes; infinity if none.
  double support_radius(const Point& about, int dimension) const;
};

/// Dirichlet datum p on the slot boundary: a constant, or nearest-neighbour
/// interpolation of values attached to boundary points.
struct BoundaryData {
  enum class Kind { Constant, Samples };

  Kind kind = Kind::Constant;
  double value = 1.0;
  std::vector<Point> points;
  std::vector<double> values;

  static BoundaryData constant(double value);

  double evaluate(const Point& x, int dimension) const;
  double max_value() const;
};

struct Scenario {
  std::string name = "scenario";
  SlotGeometry slot = SlotGeometry::ball(2, {0.0, 0.0, 0.0}, 1.0);
  double h = 1.0 / 32.0;
  /// Unset means: smallest margin holding the supersolution envelope at t_max.
  std::optional<double> margin;
  InitialData u_init = InitialData::zero();
  BoundaryData p = BoundaryData::constant(1.0);
  double t_max = 0.5;
  std::vector<double> m_list{16, 32, 64, 128, 256, 512, 1024};
  double lambda = 0.0;

  int dimension() const { return slot.dimension(); }
  /// M, the supremum of the slot datum.
  double max_p() const { return p.max_value(); }

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

Scenario parse_scenario(const std::string& json_text,
                        const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

/// D = B_1 in 2D, p = 1. u_I = lambda on B_3 (0 when lambda = 0).
Scenario radial_scenario(double h = 1.0 / 64.0, double t_max = 0.5, double lambda = 0.0);

/// D = B_1 in 2D, p = 1; u_I = 1 - eps_patch on 3 <= r < 5, a linear ramp
/// of width `ramp` below r = 3, 0 elsewhere.
Scenario annulus_scenario(double eps_patch = 0.0, double ramp = 0.25, double h = 1.0 / 16.0);

/// D = B_1 in 2D, p = k, u_I = 1 on 1 <= r < 2. The diffusive region starts
/// at r = 2, where the barrier comparison is set up.
Scenario sandwich_scenario(double h = 1.0 / 64.0, double k = 1.0);

/// Two disjoint unit-half balls at (+-1.5, 0), u_I = 0, p = 1.
Scenario two_slot_scenario(double h = 1.0 / 32.0);

}  // namespace hs
