#include "hs/mesa.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "hs/errors.hpp"

namespace hs::mesa {

MesaLimit sweep(const Domain& d, const std::vector<double>& times, const std::vector<double>& m_list,
                const SweepOptions& opt) {
  if (m_list.size() < 3) throw ConfigError("m_list needs at least 3 entries");
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    if (!(m_list[i] > 0.0) || (i > 0 && !(m_list[i] > m_list[i - 1]))) {
      throw ConfigError("m_list must be positive and strictly increasing");
    }
  }

  const std::size_t L = m_list.size();
  std::vector<stefan::RunResult> runs(L);
  std::vector<std::exception_ptr> errors(L);
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(L)));
  if (jobs == 1) {
    for (std::size_t k = 0; k < L; ++k) runs[k] = stefan::run(d, m_list[k], times, opt.run);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    auto worker = [&] {
      for (;;) {
        std::size_t k;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= L) return;
          k = next++;
        }
        try {
          runs[k] = stefan::run(d, m_list[k], times, opt.run);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  MesaLimit lim;
  lim.m_list = m_list;
  lim.times = times;
  const double tol = opt.run.solver.tol;
  const double h = d.grid.h();

  for (std::size_t s = 0; s < times.size(); ++s) {
    for (std::size_t k = 0; k + 1 < L; ++k) {
      const auto& lo = runs[k].snapshots[s].theta.theta;
      const auto& hi = runs[k + 1].snapshots[s].theta.theta;
      const double slack = order_tolerance(m_list[k + 1], tol);
      for (std::size_t idx : d.fluid_cells) {
        const double excess = lo[idx] - hi[idx];
        lim.max_order_violation = std::max(lim.max_order_violation, excess);
        if (excess > slack) {
          const Point x = d.grid.center(idx);
          std::ostringstream msg;
          msg << "temperature decreased from m=" << m_list[k] << " to m=" << m_list[k + 1]
              << " by " << excess << " at t=" << times[s] << " (" << x[0] << ", " << x[1] << ")";
          throw SolverError(msg.str(), excess);
        }
        if (lo[idx] > slack && hi[idx] <= 0.0) ++lim.nesting_violations;
      }
    }

    const auto& last = runs[L - 1].snapshots[s];
    const auto& prev = runs[L - 2].snapshots[s];
    lim.V.push_back(last.theta);
    lim.W.push_back(last.W);
    lim.u_last.push_back(last.u.u);
    double gap = 0.0;
    for (std::size_t idx : d.fluid_cells) gap = std::max(gap, std::abs(last.theta.theta[idx] - prev.theta.theta[idx]));
    lim.tail_gap.push_back(gap);
    lim.tail_estimate.push_back(gap * m_list[L - 2] / (m_list[L - 1] - m_list[L - 2]));

    Mask q(d.size(), 0);
    std::vector<double> u_inf = d.u_init;
    std::size_t count = 0;
    for (std::size_t idx : d.fluid_cells) {
      if (last.u.u[idx] >= 1.0 - h) {
        q[idx] = 1;
        u_inf[idx] = 1.0;
        ++count;
      }
    }
    lim.Q.push_back(std::move(q));
    lim.u_inf.push_back(std::move(u_inf));
    lim.q_counts.push_back(count);
  }

  for (std::size_t k = 0; k < L; ++k) {
    lim.time_functions.push_back({m_list[k], runs[k].t_first_theta, runs[k].tau_first_u});
  }
  lim.runs = std::move(runs);
  return lim;
}

RepresentationReport representation_check(const Domain& d, const MesaLimit& lim, double tol) {
  RepresentationReport rep;
  rep.q_counts = lim.q_counts;
  const double cells = static_cast<double>(std::max<std::size_t>(1, d.fluid_cells.size()));
  for (std::size_t s = 0; s < lim.times.size(); ++s) {
    std::size_t bad = 0, bad_last = 0;
    for (std::size_t idx : d.fluid_cells) {
      const double q = lim.Q[s][idx] ? 1.0 : 0.0;
      const double rep_value = q + d.u_init[idx] * (1.0 - q);
      if (std::abs(lim.u_inf[s][idx] - rep_value) > tol) ++bad;
      // The last level carries theta / m above 1 on its plateau.
      const double u = std::min(lim.u_last[s][idx], 1.0);
      if (std::abs(u - rep_value) > tol) ++bad_last;
      if (s > 0 && lim.Q[s - 1][idx] && !lim.Q[s][idx]) ++rep.nesting_violations;
    }
    rep.fraction = std::max(rep.fraction, static_cast<double>(bad) / cells);
    rep.fraction_last_level = std::max(rep.fraction_last_level, static_cast<double>(bad_last) / cells);
  }
  return rep;
}

HarmonicityReport harmonicity_check(const Domain& d, const std::vector<double>& V, const Mask& active,
                                    int margin) {
  HarmonicityReport rep;
  const Grid& g = d.grid;
  const int dim = g.dimension();
  const double h2 = g.h() * g.h();
  const auto& shape = g.shape();
  for (std::size_t idx : d.fluid_cells) {
    if (!active[idx]) continue;
    const auto c = g.coords(idx);
    bool inside = true;
    const int kz = dim == 3 ? margin : 0;
    for (int dk = -kz; dk <= kz && inside; ++dk) {
      for (int dj = -margin; dj <= margin && inside; ++dj) {
        for (int di = -margin; di <= margin && inside; ++di) {
          const int i = c[0] + di, j = c[1] + dj, k = c[2] + dk;
          if (i < 0 || j < 0 || k < 0 || i >= shape[0] || j >= shape[1] || k >= shape[2]) {
            inside = false;
            break;
          }
          const std::size_t nb = g.index(i, j, k);
          if (!g.is_fluid(nb) || !active[nb]) inside = false;
        }
      }
    }
    if (!inside) continue;
    double lap = -2.0 * dim * V[idx];
    for (int ax = 0; ax < dim; ++ax) lap += V[idx - g.stride(ax)] + V[idx + g.stride(ax)];
    rep.residual = std::max(rep.residual, std::abs(lap) / h2);
    ++rep.cells;
  }
  return rep;
}

}  // namespace hs::mesa
