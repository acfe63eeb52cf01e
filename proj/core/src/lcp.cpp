#include "lcp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "hs/errors.hpp"

namespace hs::detail {

namespace {

struct Box {
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{-1, -1, -1};
};

template <int Dim>
double neighbour_sum(const double* x, std::size_t idx, std::ptrdiff_t sy, std::ptrdiff_t sz) {
  double s = x[idx - 1] + x[idx + 1] + x[idx - sy] + x[idx + sy];
  if constexpr (Dim == 3) s += x[idx - sz] + x[idx + sz];
  return s;
}

double natural_residual(double x, double F) { return x > 0.0 ? std::abs(F) : std::max(0.0, -F); }

template <int Dim>
class Sweeper {
 public:
  Sweeper(const LcpProblem& p, std::vector<double>& x)
      : grid_(*p.grid), a_(p.a->data()), b_(p.b->data()), c_(p.c), x_(x.data()),
        roles_(p.grid->roles().data()) {
    sy_ = grid_.stride(1);
    sz_ = grid_.stride(2);
    for (int d = 0; d < 3; ++d) {
      lim_lo_[d] = d < Dim ? Grid::kBand : 0;
      lim_hi_[d] = d < Dim ? grid_.shape()[d] - 1 - Grid::kBand : 0;
    }
    init_box();
  }

  bool empty() const { return box_.hi[0] < box_.lo[0]; }

  // One red-black sweep; returns the max residual met before each update.
  double sweep(double omega) {
    double worst = 0.0;
    for (int color = 0; color < 2; ++color) {
      for (int k = box_.lo[2]; k <= box_.hi[2]; ++k) {
        for (int j = box_.lo[1]; j <= box_.hi[1]; ++j) {
          int i = box_.lo[0] + ((color + box_.lo[0] + j + k) & 1);
          std::size_t idx = grid_.index(i, j, k);
          for (; i <= box_.hi[0]; i += 2, idx += 2) {
            if (roles_[idx] != CellRole::Fluid) continue;
            const double s = c_ * neighbour_sum<Dim>(x_, idx, sy_, sz_) + b_[idx];
            const double xi = x_[idx];
            worst = std::max(worst, natural_residual(xi, a_[idx] * xi - s));
            const double next = std::max(0.0, xi + omega * (s / a_[idx] - xi));
            x_[idx] = next;
            if (next > 0.0 && xi == 0.0) grow(i, j, k);
          }
        }
      }
    }
    return worst;
  }

  double residual() const {
    double worst = 0.0;
    for (int k = box_.lo[2]; k <= box_.hi[2]; ++k) {
      for (int j = box_.lo[1]; j <= box_.hi[1]; ++j) {
        std::size_t idx = grid_.index(box_.lo[0], j, k);
        for (int i = box_.lo[0]; i <= box_.hi[0]; ++i, ++idx) {
          if (roles_[idx] != CellRole::Fluid) continue;
          const double s = c_ * neighbour_sum<Dim>(x_, idx, sy_, sz_) + b_[idx];
          worst = std::max(worst, natural_residual(x_[idx], a_[idx] * x_[idx] - s));
        }
      }
    }
    return worst;
  }

  double max_x() const {
    double m = 0.0;
    for (int k = box_.lo[2]; k <= box_.hi[2]; ++k)
      for (int j = box_.lo[1]; j <= box_.hi[1]; ++j) {
        std::size_t idx = grid_.index(box_.lo[0], j, k);
        for (int i = box_.lo[0]; i <= box_.hi[0]; ++i, ++idx) m = std::max(m, x_[idx]);
      }
    return m;
  }

 private:
  void init_box() {
    for (int d = 0; d < 3; ++d) {
      box_.lo[d] = std::numeric_limits<int>::max();
      box_.hi[d] = std::numeric_limits<int>::min();
    }
    const auto& shape = grid_.shape();
    for (int k = 0; k < shape[2]; ++k)
      for (int j = 0; j < shape[1]; ++j) {
        std::size_t idx = grid_.index(0, j, k);
        for (int i = 0; i < shape[0]; ++i, ++idx) {
          if (roles_[idx] != CellRole::Fluid) continue;
          if (x_[idx] > 0.0 || b_[idx] > 0.0) grow(i, j, k);
        }
      }
    if (box_.lo[0] == std::numeric_limits<int>::max()) {
      box_.lo = {0, 0, 0};
      box_.hi = {-1, -1, -1};
    }
  }

  void grow(int i, int j, int k) {
    const int c[3] = {i, j, k};
    for (int d = 0; d < 3; ++d) {
      box_.lo[d] = std::max(lim_lo_[d], std::min(box_.lo[d], c[d] - 1));
      box_.hi[d] = std::min(lim_hi_[d], std::max(box_.hi[d], c[d] + 1));
    }
  }

  const Grid& grid_;
  const double* a_;
  const double* b_;
  double c_;
  double* x_;
  const CellRole* roles_;
  std::ptrdiff_t sy_ = 0, sz_ = 0;
  std::array<int, 3> lim_lo_{}, lim_hi_{};
  Box box_;
};

template <int Dim>
LcpStats run(const LcpProblem& p, std::vector<double>& x, const LcpOptions& opt) {
  LcpStats stats;
  Sweeper<Dim> sw(p, x);
  if (sw.empty()) return stats;
  const double a_max = *std::max_element(p.a->begin(), p.a->end());
  auto floor_tol = [&] {
    return std::max(opt.tol, 100.0 * std::numeric_limits<double>::epsilon() * a_max * sw.max_x());
  };
  while (stats.sweeps < opt.max_sweeps) {
    const double in_sweep = sw.sweep(opt.omega);
    ++stats.sweeps;
    stats.history.push_back(in_sweep);
    if (in_sweep <= floor_tol()) {
      stats.tolerance = floor_tol();
      stats.residual = sw.residual();
      if (stats.residual <= stats.tolerance) return stats;
    }
  }
  stats.residual = sw.residual();
  stats.tolerance = floor_tol();
  if (stats.residual <= stats.tolerance) return stats;
  std::ostringstream msg;
  msg << "projected relaxation did not converge in " << opt.max_sweeps
      << " sweeps: residual " << stats.residual << " > tol " << stats.tolerance;
  std::vector<double> tail(stats.history.end() - std::min<std::ptrdiff_t>(200, static_cast<std::ptrdiff_t>(stats.history.size())),
                           stats.history.end());
  throw SolverError(msg.str(), stats.residual, std::move(tail));
}

}  // namespace

LcpStats solve_lcp(const LcpProblem& problem, std::vector<double>& x, const LcpOptions& options) {
  if (!(options.omega > 0.0 && options.omega < 2.0)) {
    throw ConfigError("relaxation factor must lie in (0, 2)");
  }
  if (!(options.tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  return problem.grid->dimension() == 2 ? run<2>(problem, x, options) : run<3>(problem, x, options);
}

double lcp_residual(const LcpProblem& problem, const std::vector<double>& x) {
  const Grid& g = *problem.grid;
  const int dim = g.dimension();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.is_fluid(idx)) continue;
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += x[idx - g.stride(d)] + x[idx + g.stride(d)];
    const double F = (*problem.a)[idx] * x[idx] - problem.c * s - (*problem.b)[idx];
    worst = std::max(worst, natural_residual(x[idx], F));
  }
  return worst;
}

}  // namespace hs::detail
