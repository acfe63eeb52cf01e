#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hs/barriers.hpp"
#include "hs/geometry.hpp"
#include "hs/scenario.hpp"

namespace hs {

/// A fluid-to-slot face. The Dirichlet datum is imposed at the point where
/// the link between the two cell centers crosses the slot boundary.
struct SlotFace {
  std::size_t cell = 0;
  int axis = 0;
  int side = 0;  ///< -1 or +1
  double fraction = 1.0;  ///< crossing distance over h
  double transmissibility = 1.0;
  double p = 0.0;
  Point crossing{};
};

/// A scenario discretized on its grid: everything the solvers share.
struct Domain {
  Grid grid;
  double margin = 0.0;
  double max_p = 0.0;
  double t_max = 0.0;
  barriers::Envelope envelope;

  /// u_I per cell (0 on slot cells).
  std::vector<double> u_init;
  /// Per cell: sum of slot-face transmissibilities and of transmissibility * p.
  std::vector<double> slot_t;
  std::vector<double> slot_tp;
  /// Per cell: number of faces to non-slot neighbours.
  std::vector<std::uint8_t> open_faces;
  std::vector<SlotFace> slot_faces;
  std::vector<std::size_t> fluid_cells;
  /// Fluid cells within two cells of the far-field band.
  std::vector<std::size_t> guard_cells;

  std::size_t size() const { return grid.size(); }
  bool touches_slot(std::size_t idx) const { return slot_t[idx] > 0.0; }
};

/// Smallest face fraction used when a slot boundary passes next to a center.
inline constexpr double kMinFaceFraction = 1e-3;

/// Builds the grid (margin from the scenario or, if unset, from the
/// supersolution envelope at `reach_time`, default t_max) and the boundary
/// coupling. Throws EnvelopeError when an explicit margin is too small.
Domain prepare(const Scenario& scenario, std::optional<double> reach_time = std::nullopt);

/// Same, on an explicitly given grid; no envelope check is made.
Domain prepare_on_grid(const Scenario& scenario, Grid grid);

/// Throws EnvelopeError if `field` is positive on a guard cell.
void check_guard(const Domain& domain, const std::vector<double>& field, const char* what,
                 double t);

}  // namespace hs
