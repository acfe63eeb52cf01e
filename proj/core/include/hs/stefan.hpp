#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "hs/domain.hpp"
#include "hs/fields.hpp"

namespace hs::stefan {

/// m (s - 1)_+.
double alpha_m(double s, double m);

struct SolverOptions {
  double tol = 1e-10;
  /// 0 selects 50 * sqrt(number of cells).
  std::size_t max_iters = 0;
  double omega = 1.9;
};

/// Time step: `fixed` if set, otherwise fraction * h / M.
struct DtPolicy {
  double fraction = 0.25;
  std::optional<double> fixed;

  double dt(const Domain& domain) const;
};

/// Evolving state. theta is kept alongside u so steps can warm start.
struct State {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> theta;
};

State initial_state(const Domain& domain);

struct StepReport {
  double influx = 0.0;   ///< energy entering through the slot during the step
  double outflux = 0.0;  ///< energy leaving into the far-field band
  std::size_t sweeps = 0;
  double residual = 0.0;
};

/// Backward Euler step of u_t = Laplacian alpha_m(u) with alpha_m(u) = p on
/// the slot. Throws ConfigError for dt <= 0 and SolverError on
/// non-convergence.
StepReport step(const Domain& domain, State& state, double dt, double m,
                const SolverOptions& options = {});

struct FluxEntry {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double influx = 0.0;
  double outflux = 0.0;
  double cumulative = 0.0;
};

struct Snapshot {
  EnthalpyField u;
  TemperatureField theta;
  /// Time integral of theta up to this snapshot (rectangle rule per step).
  std::vector<double> W;
};

struct HistoryEntry {
  double t = 0.0;
  std::size_t active_cells = 0;
  double enthalpy = 0.0;
};

struct RunOptions {
  SolverOptions solver;
  DtPolicy dt;
  /// Assert the cellwise invariants after every step.
  bool check_invariants = true;
};

struct RunResult {
  double m = 0.0;
  std::vector<Snapshot> snapshots;
  std::vector<FluxEntry> ledger;
  std::vector<HistoryEntry> history;
  /// Per cell: first step-end time with theta > 0, and with u >= 1 - tol.
  /// Infinity where never reached.
  std::vector<double> t_first_theta;
  std::vector<double> tau_first_u;
  double mass_balance_error = 0.0;
  std::size_t steps = 0;
  std::size_t total_sweeps = 0;
  double max_residual = 0.0;
};

/// Tolerance for the cellwise invariants of a run with solver tolerance tol.
inline double invariant_tolerance(double tol) { return 4.0 * tol + 1e-12; }

/// Runs from u_I to the last snapshot time. Within each interval between
/// consecutive snapshot times the step is uniform and at most dt_policy's.
/// Throws EnvelopeError if theta reaches the guard cells next to the band.
RunResult run(const Domain& domain, double m, const std::vector<double>& snapshot_times,
              const RunOptions& options = {});

/// The step sizes run() uses for the given snapshot times.
std::vector<double> time_grid(const std::vector<double>& snapshot_times, double dt_max);

struct EssentialRangeReport {
  double fraction = 0.0;
  std::size_t cells = 0;
  std::vector<std::size_t> offending;
};

/// Fluid cells where u is neither u_I (within tol) nor in [1 - tol, 1 + M/m + tol].
EssentialRangeReport essential_range_check(const Domain& domain, const EnthalpyField& field,
                                           double m, double tol);

}  // namespace hs::stefan
