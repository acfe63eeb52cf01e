#pragma once

#include <cstddef>
#include <vector>

#include "hs/geometry.hpp"

namespace hs::detail {

/// Grid complementarity problem shared by the Stefan step and the obstacle
/// slice. At every fluid cell i:
///   x_i >= 0,  F_i = a_i x_i - c * sum_{j ~ i} x_j - b_i >= 0,  x_i F_i = 0.
/// Non-fluid entries of x are held at 0.
struct LcpProblem {
  const Grid* grid = nullptr;
  const std::vector<double>* a = nullptr;
  double c = 0.0;
  const std::vector<double>* b = nullptr;
};

struct LcpOptions {
  double omega = 1.8;
  double tol = 1e-10;
  std::size_t max_sweeps = 10000;
};

struct LcpStats {
  std::size_t sweeps = 0;
  double residual = 0.0;
  double tolerance = 0.0;  ///< effective tolerance after the roundoff floor
  std::vector<double> history;
};

/// Projected SOR, red-black ordered, restricted to the box around cells
/// where x > 0 or b > 0. Throws SolverError after max_sweeps.
LcpStats solve_lcp(const LcpProblem& problem, std::vector<double>& x, const LcpOptions& options);

/// Max natural residual: |F| where x > 0, max(0, -F) where x = 0.
double lcp_residual(const LcpProblem& problem, const std::vector<double>& x);

}  // namespace hs::detail
