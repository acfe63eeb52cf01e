#include "hs/baiocchi.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "hs/errors.hpp"
#include "hs/fbdiag.hpp"
#include "lcp.hpp"

namespace hs::baiocchi {

namespace {

struct Coefficients {
  std::vector<double> a;
  std::vector<double> b;
  double c = 0.0;
};

Coefficients coefficients(const Domain& d, double t) {
  const double inv_h2 = 1.0 / (d.grid.h() * d.grid.h());
  Coefficients k;
  k.a.assign(d.size(), 0.0);
  k.b.assign(d.size(), 0.0);
  k.c = inv_h2;
  for (std::size_t idx : d.fluid_cells) {
    k.a[idx] = (d.open_faces[idx] + d.slot_t[idx]) * inv_h2;
    k.b[idx] = d.slot_tp[idx] * t * inv_h2 - (1.0 - d.u_init[idx]);
  }
  return k;
}

}  // namespace

Mask active_mask(const Domain& d, const std::vector<double>& W, double rel) {
  double wmax = 0.0;
  for (std::size_t idx : d.fluid_cells) wmax = std::max(wmax, W[idx]);
  Mask m(d.size(), 0);
  if (wmax <= 0.0) return m;
  const double threshold = rel * wmax;
  for (std::size_t idx : d.fluid_cells) m[idx] = W[idx] > threshold ? 1 : 0;
  return m;
}

BaiocchiPotential solve_slice(const Domain& d, double t, const ObstacleSolveParams& params,
                              const std::vector<double>* warm) {
  if (!(t >= 0.0)) throw ConfigError("slice time must be nonnegative");
  if (!(params.omega >= 1.0 && params.omega < 2.0)) throw ConfigError("omega must lie in [1, 2)");
  BaiocchiPotential out;
  out.t = t;
  out.W.assign(d.size(), 0.0);
  if (warm) {
    if (warm->size() != d.size()) throw ConfigError("warm start does not match the grid");
    for (std::size_t idx : d.fluid_cells) out.W[idx] = (*warm)[idx];
  }
  Coefficients k = coefficients(d, t);
  const std::size_t max_sweeps =
      params.max_sweeps ? params.max_sweeps
                        : static_cast<std::size_t>(200.0 * std::sqrt(static_cast<double>(d.size())));
  detail::LcpProblem prob{&d.grid, &k.a, k.c, &k.b};
  const detail::LcpStats stats = detail::solve_lcp(prob, out.W, {params.omega, params.tol, max_sweeps});
  out.residual = stats.residual;
  out.tolerance = stats.tolerance;
  out.sweeps = stats.sweeps;
  out.active = active_mask(d, out.W, params.activation_rel);
  check_guard(d, out.W, "W", t);
  return out;
}

std::vector<BaiocchiPotential> solve_slices(const Domain& d, const std::vector<double>& times,
                                            const ObstacleSolveParams& params, unsigned jobs) {
  if (!std::is_sorted(times.begin(), times.end())) throw ConfigError("slice times must be sorted");
  std::vector<BaiocchiPotential> out(times.size());
  auto chunk = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      out[i] = solve_slice(d, times[i], params, i > lo ? &out[i - 1].W : nullptr);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(times.size())));
  if (jobs <= 1) {
    chunk(0, times.size());
    return out;
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  const std::size_t per = (times.size() + jobs - 1) / jobs;
  for (unsigned j = 0; j < jobs; ++j) {
    const std::size_t lo = std::min(times.size(), j * per);
    const std::size_t hi = std::min(times.size(), lo + per);
    pool.emplace_back([&, j, lo, hi] {
      try {
        chunk(lo, hi);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double complementarity_residual(const Domain& d, const std::vector<double>& W, double t) {
  Coefficients k = coefficients(d, t);
  detail::LcpProblem prob{&d.grid, &k.a, k.c, &k.b};
  return detail::lcp_residual(prob, W);
}

TemperatureField recover_V(const BaiocchiPotential& earlier, const BaiocchiPotential& later) {
  const double dt = later.t - earlier.t;
  if (!(dt > 0.0)) throw ConfigError("recover_V needs a later slice");
  if (earlier.W.size() != later.W.size()) throw ConfigError("slices have different grids");
  TemperatureField V;
  V.t = earlier.t;
  V.theta.resize(later.W.size());
  for (std::size_t i = 0; i < V.theta.size(); ++i) V.theta[i] = (later.W[i] - earlier.W[i]) / dt;
  return V;
}

MassBalance mass_balance_check(const Domain& d, const BaiocchiPotential& s) {
  MassBalance mb;
  const double vol = d.grid.cell_volume();
  const double h = d.grid.h();
  for (std::size_t idx : d.fluid_cells) {
    if (s.active[idx]) mb.weighted_area += (1.0 - d.u_init[idx]) * vol;
  }
  for (const SlotFace& f : d.slot_faces) {
    mb.slot_flux += f.transmissibility * (f.p * s.t - s.W[f.cell]);
  }
  mb.slot_flux *= vol / (h * h);
  mb.discrepancy = std::abs(mb.weighted_area - mb.slot_flux);
  mb.relative = mb.slot_flux > 0.0 ? mb.discrepancy / mb.slot_flux : mb.discrepancy;
  return mb;
}

std::pair<double, double> largest_growth(const std::vector<BaiocchiPotential>& slices) {
  double best_t = 0.0, best = 0.0;
  for (std::size_t i = 1; i < slices.size(); ++i) {
    const auto before = std::count(slices[i - 1].active.begin(), slices[i - 1].active.end(), 1);
    const auto after = std::count(slices[i].active.begin(), slices[i].active.end(), 1);
    const double gain = static_cast<double>(after - before);
    if (gain > best) {
      best = gain;
      best_t = slices[i].t;
    }
  }
  return {best_t, best};
}

CrossValidation cross_validate(const Domain& d, const mesa::MesaLimit& lim,
                               const std::vector<BaiocchiPotential>& slices) {
  CrossValidation cv;
  for (const BaiocchiPotential& s : slices) {
    std::size_t k = lim.times.size();
    for (std::size_t i = 0; i < lim.times.size(); ++i) {
      if (std::abs(lim.times[i] - s.t) <= 1e-9 * std::max(1.0, s.t)) k = i;
    }
    if (k == lim.times.size()) continue;
    CrossValidationRow row;
    row.t = s.t;
    for (std::size_t idx : d.fluid_cells) {
      row.sup_gap = std::max(row.sup_gap, std::abs(lim.W[k][idx] - s.W[idx]));
      row.max_W = std::max(row.max_W, s.W[idx]);
    }
    row.relative_gap = row.max_W > 0.0 ? row.sup_gap / row.max_W : row.sup_gap;
    Mask a_mesa(d.size(), 0);
    for (std::size_t idx : d.fluid_cells) a_mesa[idx] = lim.V[k].theta[idx] > 0.0 ? 1 : 0;
    row.hausdorff_cells = fbdiag::hausdorff_cells(d.grid, a_mesa, s.active);
    cv.rows.push_back(row);
  }

  if (!lim.runs.empty()) {
    const auto& hist = lim.runs.back().history;
    std::size_t prev = 0;
    for (const auto& e : hist) {
      const double gain = static_cast<double>(e.active_cells) - static_cast<double>(prev);
      if (gain > cv.contact_jump_mesa) {
        cv.contact_jump_mesa = gain;
        cv.contact_time_mesa = e.t;
      }
      prev = e.active_cells;
    }
  }
  const auto [t_obs, jump_obs] = largest_growth(slices);
  cv.contact_time_obstacle = t_obs;
  cv.contact_jump_obstacle = jump_obs;
  // A contact is a single-step gain far above the typical per-step growth.
  if (slices.size() > 2) {
    std::vector<double> gains;
    for (std::size_t i = 1; i < slices.size(); ++i) {
      gains.push_back(static_cast<double>(std::count(slices[i].active.begin(), slices[i].active.end(), 1)) -
                      static_cast<double>(std::count(slices[i - 1].active.begin(), slices[i - 1].active.end(), 1)));
    }
    std::nth_element(gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(gains.size() / 2), gains.end());
    const double median = gains[gains.size() / 2];
    cv.contact_detected = jump_obs > 10.0 * std::max(1.0, median);
  }
  return cv;
}

}  // namespace hs::baiocchi
