#pragma once

#include <cstddef>
#include <vector>

#include "hs/domain.hpp"
#include "hs/fields.hpp"
#include "hs/stefan.hpp"

namespace hs::mesa {

struct SweepOptions {
  stefan::RunOptions run;
  /// Concurrent per-m runs; 1 runs them in order on the calling thread.
  unsigned jobs = 1;
};

/// Per-cell first-crossing times of one m level; infinity where never reached.
struct TimeFunctions {
  double m = 0.0;
  std::vector<double> t;    ///< first time theta > 0
  std::vector<double> tau;  ///< first time u >= 1 - tol
};

struct MesaLimit {
  std::vector<double> m_list;
  std::vector<double> times;
  /// Last-level temperature per snapshot.
  std::vector<TemperatureField> V;
  /// Last-level time integral of theta per snapshot.
  std::vector<std::vector<double>> W;
  /// Last-level enthalpy per snapshot.
  std::vector<std::vector<double>> u_last;
  std::vector<std::vector<double>> u_inf;
  std::vector<Mask> Q;
  std::vector<std::size_t> q_counts;
  /// Sup-norm gap between the last two levels and its geometric-tail estimate.
  std::vector<double> tail_gap;
  std::vector<double> tail_estimate;
  /// Largest observed theta_{m_k} - theta_{m_{k+1}} over all cells and times.
  double max_order_violation = 0.0;
  /// Cells positive at a lower level but zero at the next one.
  std::size_t nesting_violations = 0;
  std::vector<TimeFunctions> time_functions;
  std::vector<stefan::RunResult> runs;
};

/// Allowed theta ordering slack between levels m_k < m_{k+1}.
inline double order_tolerance(double m_next, double solver_tol) {
  return 2.0 * m_next * stefan::invariant_tolerance(solver_tol);
}

/// Runs every level of m_list (>= 3 entries, strictly increasing) and forms
/// the limit. Throws SolverError when theta fails to increase with m beyond
/// the solver tolerance.
MesaLimit sweep(const Domain& domain, const std::vector<double>& times,
                const std::vector<double>& m_list, const SweepOptions& options = {});

struct RepresentationReport {
  /// |u_inf - (chi_Q + u_I (1 - chi_Q))| > tol; zero by construction.
  double fraction = 0.0;
  /// Same with the last-level enthalpy in place of u_inf.
  double fraction_last_level = 0.0;
  /// Cells in Q(s) but not Q(t) for s < t.
  std::size_t nesting_violations = 0;
  std::vector<std::size_t> q_counts;
};

RepresentationReport representation_check(const Domain& domain, const MesaLimit& limit,
                                          double tol);

struct HarmonicityReport {
  double residual = 0.0;
  std::size_t cells = 0;
};

/// Max |discrete Laplacian of V| over cells whose `margin`-neighbourhood lies
/// inside the active mask and away from the slot.
HarmonicityReport harmonicity_check(const Domain& domain, const std::vector<double>& V,
                                    const Mask& active, int margin);

}  // namespace hs::mesa
