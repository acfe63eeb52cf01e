#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hs {

/// Spatial point. Two-dimensional problems leave the last coordinate at 0.
using Point = std::array<double, 3>;

double distance(const Point& a, const Point& b, int dimension);
double norm(const Point& a, int dimension);

struct BoundingBox {
  Point lower{0.0, 0.0, 0.0};
  Point upper{0.0, 0.0, 0.0};
};

enum class SlotKind { Ball, UnionOfBalls, RoundedPolygon };

/// A point on the slot boundary with its outward unit normal (pointing away
/// from D, into the fluid) and the boundary measure it represents.
struct BoundarySample {
  Point x{};
  Point normal{};
  double weight = 0.0;
};

/// The injection slot D. Balls and unions of pairwise disjoint balls are
/// supported in 2D and 3D; rounded convex polygons (a convex polygon
/// inflated by `corner_radius`) in 2D only.
class SlotGeometry {
 public:
  static SlotGeometry ball(int dimension, const Point& center, double radius);
  static SlotGeometry balls(int dimension, std::vector<Point> centers,
                            std::vector<double> radii);
  static SlotGeometry rounded_polygon(std::vector<Point> vertices, double corner_radius);

  int dimension() const { return dimension_; }
  SlotKind kind() const { return kind_; }
  const std::vector<Point>& centers() const { return centers_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  double corner_radius() const { return corner_radius_; }

  /// Negative inside D, positive outside; exact distance outside D.
  double signed_distance(const Point& x) const;
  bool contains(const Point& x) const { return signed_distance(x) < 0.0; }

  BoundingBox bounds() const;

  /// Center and radius of a ball containing D.
  Point enclosing_center() const;
  double enclosing_radius() const;

  /// Ordered samples of the boundary with spacing at most `spacing`.
  std::vector<BoundarySample> sample_boundary(double spacing) const;

  /// Fraction s in (0, 1] along the segment from `outside` to `inside` where
  /// the boundary is crossed.
  double crossing_fraction(const Point& outside, const Point& inside) const;

 private:
  SlotGeometry() = default;

  int dimension_ = 2;
  SlotKind kind_ = SlotKind::Ball;
  std::vector<Point> centers_;
  std::vector<double> radii_;
  std::vector<Point> vertices_;
  double corner_radius_ = 0.0;
};

enum class CellRole : std::uint8_t { Slot, Fluid, FarField };

/// Uniform Cartesian cell grid covering a truncation of the exterior of the
/// slot. Indices are row-major with x fastest: idx = (k * ny + j) * nx + i.
class Grid {
 public:
  /// Width of the far-field band, in cells.
  static constexpr int kBand = 2;

  Grid() = default;
  Grid(int dimension, double h, const Point& origin, const std::array<int, 3>& shape,
       std::vector<CellRole> roles);

  /// A grid without slot: every cell outside the far-field band is fluid.
  static Grid uniform(int dimension, double h, const Point& origin,
                      const std::array<int, 3>& shape);

  int dimension() const { return dimension_; }
  double h() const { return h_; }
  const Point& origin() const { return origin_; }
  const std::array<int, 3>& shape() const { return shape_; }
  std::size_t size() const { return roles_.size(); }
  std::ptrdiff_t stride(int axis) const { return strides_[axis]; }
  double cell_volume() const;

  std::size_t index(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(k) * shape_[1] + j) * shape_[0] + i;
  }
  std::array<int, 3> coords(std::size_t idx) const;
  Point center(std::size_t idx) const;
  /// Cell containing x (clamped to the grid).
  std::size_t locate(const Point& x) const;

  CellRole role(std::size_t idx) const { return roles_[idx]; }
  bool is_fluid(std::size_t idx) const { return roles_[idx] == CellRole::Fluid; }
  std::span<const CellRole> roles() const { return roles_; }
  std::size_t count(CellRole role) const;

  /// Number of cells between a fluid cell and the far-field band
  /// (1 for a cell touching the band). 0 for far-field cells.
  int distance_to_band(std::size_t idx) const;

  BoundingBox extent() const;

 private:
  int dimension_ = 2;
  double h_ = 0.0;
  Point origin_{};
  std::array<int, 3> shape_{1, 1, 1};
  std::array<std::ptrdiff_t, 3> strides_{1, 1, 1};
  std::vector<CellRole> roles_;
};

/// Region the truncated domain must contain: a ball of `radius` about
/// `center`, plus the far-field band and a 2-cell guard.
struct ReachRequirement {
  Point center{};
  double radius = 0.0;
};

/// Classifies cells of the box `slot.bounds()` inflated by `margin` on every
/// side. Throws EnvelopeError (carrying the required margin) when the box
/// cannot hold `reach`.
Grid build_grid(const SlotGeometry& slot, double h, double margin,
                const std::optional<ReachRequirement>& reach = std::nullopt);

/// Smallest margin for which build_grid accepts `reach`.
double required_margin(const SlotGeometry& slot, double h, const ReachRequirement& reach);

/// Number of 2n-connected components of the SLOT mask.
int count_slot_components(const Grid& grid);

}  // namespace hs
