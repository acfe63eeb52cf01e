#pragma once

#include <cstddef>
#include <vector>

#include "hs/domain.hpp"
#include "hs/fields.hpp"
#include "hs/mesa.hpp"

namespace hs::baiocchi {

struct ObstacleSolveParams {
  double omega = 1.8;
  double tol = 1e-10;
  /// 0 selects 200 * sqrt(number of cells).
  std::size_t max_sweeps = 0;
  /// A cell is active when W exceeds this fraction of max W.
  double activation_rel = 1e-8;
};

/// Solution of the obstacle problem at one time slice.
struct BaiocchiPotential {
  double t = 0.0;
  std::vector<double> W;
  Mask active;
  double residual = 0.0;
  /// Tolerance certified: tol, raised to the round-off floor of the stencil.
  double tolerance = 0.0;
  std::size_t sweeps = 0;
};

/// Projected relaxation for W >= 0, Laplacian W = (1 - u_I) on {W > 0},
/// W = p t on the slot, W = 0 in the far-field band. `warm` (a slice at an
/// earlier time) seeds the iteration. Throws SolverError on non-convergence
/// and EnvelopeError if W reaches the guard cells.
BaiocchiPotential solve_slice(const Domain& domain, double t, const ObstacleSolveParams& params = {},
                              const std::vector<double>* warm = nullptr);

/// Slices at sorted times; `jobs` > 1 solves contiguous chunks concurrently.
std::vector<BaiocchiPotential> solve_slices(const Domain& domain, const std::vector<double>& times,
                                            const ObstacleSolveParams& params = {},
                                            unsigned jobs = 1);

Mask active_mask(const Domain& domain, const std::vector<double>& W, double activation_rel);

/// Max natural complementarity residual of the discrete obstacle problem.
double complementarity_residual(const Domain& domain, const std::vector<double>& W, double t);

/// Forward difference (W(t1) - W(t0)) / (t1 - t0).
TemperatureField recover_V(const BaiocchiPotential& earlier, const BaiocchiPotential& later);

struct MassBalance {
  double weighted_area = 0.0;  ///< sum over the active set of (1 - u_I) h^n
  double slot_flux = 0.0;      ///< flux of W through the slot faces
  double discrepancy = 0.0;
  double relative = 0.0;
};

MassBalance mass_balance_check(const Domain& domain, const BaiocchiPotential& slice);

struct CrossValidationRow {
  double t = 0.0;
  double sup_gap = 0.0;
  double max_W = 0.0;
  double relative_gap = 0.0;
  double hausdorff_cells = 0.0;
};

struct CrossValidation {
  std::vector<CrossValidationRow> rows;
  /// Time of the largest one-step growth of the diffusive region per route.
  double contact_time_mesa = 0.0;
  double contact_time_obstacle = 0.0;
  double contact_jump_mesa = 0.0;      ///< cells gained in that step
  double contact_jump_obstacle = 0.0;
  bool contact_detected = false;
};

/// Compares the time-integrated last-level temperature of the mesa sweep
/// with the obstacle slices at every common time.
CrossValidation cross_validate(const Domain& domain, const mesa::MesaLimit& limit,
                               const std::vector<BaiocchiPotential>& slices);

/// Largest one-step increase of the active cell count along a slice series:
/// returns (time after the jump, cells gained).
std::pair<double, double> largest_growth(const std::vector<BaiocchiPotential>& slices);

}  // namespace hs::baiocchi
