#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hs/domain.hpp"
#include "hs/fields.hpp"
#include "hs/geometry.hpp"

namespace hs::fbdiag {

/// Diffusive region at one time.
struct RegionFrame {
  double t = 0.0;
  Mask active;
  /// Midpoints of faces between an active fluid cell and an inactive
  /// non-slot cell.
  std::vector<Point> fb_points;
  std::size_t active_cells = 0;
  double area = 0.0;              ///< |A(t)|
  double weighted_measure = 0.0;  ///< integral of (1 - u_I) over A(t)
  double fb_length = 0.0;         ///< perimeter (2D) or surface (3D) estimate
};

struct RegionSeries {
  std::vector<RegionFrame> frames;
};

/// Active cells: field > activation_rel * max(field), or field > 0 when
/// activation_rel is 0. `fields[i]` is the V or W field at `times[i]`.
RegionSeries extract_regions(const Domain& domain, const std::vector<std::vector<double>>& fields,
                             const std::vector<double>& times, double activation_rel = 0.0);

RegionFrame make_frame(const Domain& domain, const Mask& active, double t);

/// Number of 2n-connected components of a mask.
int count_components(const Grid& grid, const Mask& mask);

/// Active cells together with cells where u_I >= 1 - tol.
Mask wet_mask(const Domain& domain, const Mask& active, double tol);

struct RadiusStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};

RadiusStats radius_stats(const std::vector<Point>& points, const Point& center, int dimension);

/// Hausdorff distance between two masks, in cells. 0 when both are empty,
/// infinity when exactly one is.
double hausdorff_cells(const Grid& grid, const Mask& a, const Mask& b);

/// Minimum over K sampled directions of the width of the projections
/// (half-circle in 2D, Fibonacci hemisphere in 3D). 0 for an empty set.
double min_diameter(const std::vector<Point>& points, int dimension, int directions = 64);

enum class PointClass { Regular, CuspSuspect, Unresolved, Excluded };
const char* to_string(PointClass c);

struct ClassifyThresholds {
  double delta_reg = 0.1;
  int directions = 64;
  /// Points closer than this many cells to the slot are not classified.
  double slot_exclusion_cells = 4.0;
};

struct FBPointReport {
  Point point{};
  std::vector<double> radii;          ///< decreasing
  std::vector<double> density;        ///< |B_r ∩ A| / |B_r| over fluid cells
  std::vector<double> min_diameter;   ///< m.d.(B_r ∩ A^c)
  std::vector<double> md_ratio;       ///< m.d. / r
  PointClass classification = PointClass::Unresolved;
  std::vector<std::string> warnings;
};

/// Finite-radius surrogate of the density / cusp dichotomy at x0.
/// Radii reaching outside the grid are dropped with a warning. With a slot
/// given, points within `slot_exclusion_cells` cells of it are Excluded.
FBPointReport classify_point(const Grid& grid, const Mask& active, const Point& x0,
                             std::vector<double> radii, const ClassifyThresholds& thresholds = {},
                             const SlotGeometry* slot = nullptr);

/// Geometric radius list r_max, r_max / 2, ... with at least `count` entries.
std::vector<double> geometric_radii(double r_max, int count);

struct SlopeEntry {
  double s = 0.0;
  double t = 0.0;
  double increment = 0.0;  ///< |A(t) \ A(s)|
  double slope = 0.0;
  bool spike = false;
};

struct ContinuityReport {
  std::vector<SlopeEntry> slopes;  ///< consecutive pairs
  double max_slope = 0.0;
  /// True when lambda >= 1: the continuity bound says nothing.
  bool degenerate = false;
  /// Bound coefficient 1 / (1 - lambda); infinity when degenerate.
  double lambda_factor = 0.0;
};

/// Incremental measures between consecutive frames; a slope more than five
/// times the median of its series is flagged as a spike.
ContinuityReport measure_continuity(const RegionSeries& series, double lambda);

/// |A(t) \ A(s)| / (t - s) for one pair of frames.
double pair_slope(const RegionFrame& earlier, const RegionFrame& later);

struct EnergyBall {
  Point center{};
  double r = 0.0;
  double R = 0.0;
};

struct EnergyEntry {
  std::size_t field = 0;
  std::size_t ball = 0;
  double gradient = 0.0;    ///< integral of |grad theta|^2 over B_r
  double mass = 0.0;        ///< integral of theta^2 over B_R
  double ratio = 0.0;       ///< gradient * (R - r)^2 / mass (0 when mass is 0)
  bool holds = true;        ///< gradient <= C(n) / (R - r)^2 * mass
};

struct EnergyReport {
  std::vector<EnergyEntry> entries;
  double constant = 64.0;   ///< C(n) from the cut-off construction
};

/// Space-time energy comparison. `series[f]` is a list of temperature
/// snapshots of one field (e.g. one m level); the time integral uses the
/// rectangle rule on the snapshot spacing. Throws ConfigError for balls
/// meeting the slot.
EnergyReport energy_estimate_check(const Domain& domain,
                                   const std::vector<std::vector<TemperatureField>>& series,
                                   const std::vector<EnergyBall>& balls);

}  // namespace hs::fbdiag
