#include "hs/stefan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hs/errors.hpp"
#include "lcp.hpp"

namespace hs::stefan {

double alpha_m(double s, double m) {
  if (!(m > 0.0)) throw ConfigError("m must be positive");
  return m * std::max(s - 1.0, 0.0);
}

double DtPolicy::dt(const Domain& domain) const {
  if (fixed) {
    if (!(*fixed > 0.0)) throw ConfigError("dt must be positive");
    return *fixed;
  }
  if (!(fraction > 0.0)) throw ConfigError("dt fraction must be positive");
  const double M = domain.max_p > 0.0 ? domain.max_p : 1.0;
  return fraction * domain.grid.h() / M;
}

State initial_state(const Domain& domain) {
  State s;
  s.u = domain.u_init;
  s.theta.assign(domain.size(), 0.0);
  return s;
}

namespace {

struct Workspace {
  double dt = -1.0;
  double m = -1.0;
  std::vector<double> a;
  std::vector<double> b;
};

std::size_t default_iters(const Domain& d, const SolverOptions& o) {
  if (o.max_iters > 0) return o.max_iters;
  return static_cast<std::size_t>(50.0 * std::sqrt(static_cast<double>(d.size()))) + 1;
}

StepReport step_impl(const Domain& d, State& s, double dt, double m, const SolverOptions& opt,
                     Workspace& ws) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(m > 0.0)) throw ConfigError("m must be positive");
  const Grid& g = d.grid;
  const double h = g.h();
  const double kappa = dt / (h * h);
  if (ws.dt != dt || ws.m != m || ws.a.size() != d.size()) {
    ws.a.assign(d.size(), 0.0);
    ws.b.assign(d.size(), 0.0);
    for (std::size_t idx : d.fluid_cells) {
      ws.a[idx] = 1.0 / m + kappa * (d.open_faces[idx] + d.slot_t[idx]);
    }
    ws.dt = dt;
    ws.m = m;
  }
  for (std::size_t idx : d.fluid_cells) ws.b[idx] = kappa * d.slot_tp[idx] + s.u[idx] - 1.0;

  detail::LcpProblem prob{&g, &ws.a, kappa, &ws.b};
  const detail::LcpStats stats =
      detail::solve_lcp(prob, s.theta, {opt.omega, opt.tol, default_iters(d, opt)});

  // Conservative update: net face fluxes of theta.
  const int dim = g.dimension();
  const double vol = g.cell_volume();
  StepReport rep;
  rep.sweeps = stats.sweeps;
  rep.residual = stats.residual;
  for (std::size_t idx : d.fluid_cells) {
    const double th = s.theta[idx];
    double net = d.slot_tp[idx] - d.slot_t[idx] * th;
    rep.influx += net;
    for (int ax = 0; ax < dim; ++ax) {
      for (std::ptrdiff_t off : {-g.stride(ax), g.stride(ax)}) {
        const std::size_t nb = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + off);
        const CellRole r = g.role(nb);
        if (r == CellRole::Slot) continue;
        net += s.theta[nb] - th;
        if (r == CellRole::FarField) rep.outflux += th;
      }
    }
    s.u[idx] += kappa * net;
  }
  rep.influx *= kappa * vol;
  rep.outflux *= kappa * vol;
  s.t += dt;
  return rep;
}

void invariant_failure(const std::string& what, double t, const Point& x, int dim) {
  std::ostringstream msg;
  msg << what << " at t=" << t << " cell";
  for (int k = 0; k < dim; ++k) msg << ' ' << x[k];
  throw SolverError(msg.str());
}

}  // namespace

StepReport step(const Domain& domain, State& state, double dt, double m, const SolverOptions& options) {
  Workspace ws;
  return step_impl(domain, state, dt, m, options, ws);
}

std::vector<double> time_grid(const std::vector<double>& times, double dt_max) {
  if (!(dt_max > 0.0)) throw ConfigError("dt must be positive");
  std::vector<double> steps;
  double prev = 0.0;
  for (double t : times) {
    if (t < prev) throw ConfigError("snapshot times must be sorted and nonnegative");
    const double span = t - prev;
    if (span > 0.0) {
      const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt_max - 1e-9)));
      for (std::size_t i = 0; i < n; ++i) steps.push_back(span / static_cast<double>(n));
    }
    prev = t;
  }
  return steps;
}

RunResult run(const Domain& d, double m, const std::vector<double>& times, const RunOptions& opt) {
  if (!(m > 0.0)) throw ConfigError("m must be positive");
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
    throw ConfigError("snapshot times must be sorted and nonnegative");
  }
  const Grid& g = d.grid;
  const double dt_max = opt.dt.dt(d);
  const double inf = std::numeric_limits<double>::infinity();
  const double tol_u = invariant_tolerance(opt.solver.tol);
  const double vol = g.cell_volume();

  RunResult res;
  res.m = m;
  res.t_first_theta.assign(d.size(), inf);
  res.tau_first_u.assign(d.size(), inf);
  for (std::size_t idx : d.fluid_cells) {
    if (d.u_init[idx] >= 1.0 - tol_u) res.tau_first_u[idx] = 0.0;
  }

  State s = initial_state(d);
  std::vector<double> W(d.size(), 0.0);
  std::vector<double> u_prev;
  Workspace ws;
  double cumulative = 0.0;
  double enthalpy0 = 0.0;
  for (std::size_t idx : d.fluid_cells) enthalpy0 += s.u[idx] * vol;
  double outflow = 0.0;
  const double u_cap = 1.0 + d.max_p / m;

  auto snapshot = [&] {
    Snapshot snap;
    snap.u = {s.t, s.u};
    snap.theta = {s.t, s.theta};
    snap.W = W;
    res.snapshots.push_back(std::move(snap));
  };

  double prev = 0.0;
  for (double target : times) {
    const double span = target - prev;
    std::size_t n = 0;
    if (span > 0.0) n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt_max - 1e-9)));
    for (std::size_t i = 0; i < n; ++i) {
      const double dt = span / static_cast<double>(n);
      if (opt.check_invariants) u_prev = s.u;
      const StepReport rep = step_impl(d, s, dt, m, opt.solver, ws);
      if (i + 1 == n) s.t = target;
      ++res.steps;
      res.total_sweeps += rep.sweeps;
      res.max_residual = std::max(res.max_residual, rep.residual);
      cumulative += rep.influx;
      outflow += rep.outflux;
      res.ledger.push_back({res.steps, s.t, dt, rep.influx, rep.outflux, cumulative});

      std::size_t active = 0;
      double enthalpy = 0.0;
      for (std::size_t idx : d.fluid_cells) {
        const double th = s.theta[idx];
        W[idx] += dt * th;
        enthalpy += s.u[idx] * vol;
        if (th > 0.0) {
          ++active;
          if (res.t_first_theta[idx] == inf) res.t_first_theta[idx] = s.t;
        }
        if (res.tau_first_u[idx] == inf && s.u[idx] >= 1.0 - tol_u) res.tau_first_u[idx] = s.t;
        if (opt.check_invariants) {
          if (s.u[idx] < u_prev[idx] - tol_u) invariant_failure("enthalpy decreased in time", s.t, g.center(idx), g.dimension());
          if (s.u[idx] < -tol_u) invariant_failure("negative enthalpy", s.t, g.center(idx), g.dimension());
          if (s.u[idx] > u_cap + tol_u) invariant_failure("enthalpy above 1 + M/m", s.t, g.center(idx), g.dimension());
          if (th > d.max_p + tol_u * m) invariant_failure("temperature above M", s.t, g.center(idx), g.dimension());
        }
      }
      res.history.push_back({s.t, active, enthalpy});
      check_guard(d, s.theta, "temperature", s.t);
    }
    prev = target;
    snapshot();
  }

  double enthalpy = 0.0;
  for (std::size_t idx : d.fluid_cells) enthalpy += s.u[idx] * vol;
  res.mass_balance_error = std::abs((enthalpy - enthalpy0) - (cumulative - outflow));
  return res;
}

EssentialRangeReport essential_range_check(const Domain& d, const EnthalpyField& field, double m,
                                           double tol) {
  EssentialRangeReport rep;
  const double cap = 1.0 + d.max_p / m + tol;
  for (std::size_t idx : d.fluid_cells) {
    const double u = field.u[idx];
    ++rep.cells;
    const bool initial = std::abs(u - d.u_init[idx]) <= tol;
    const bool plateau = u >= 1.0 - tol && u <= cap;
    if (!initial && !plateau) rep.offending.push_back(idx);
  }
  rep.fraction = rep.cells ? static_cast<double>(rep.offending.size()) / static_cast<double>(rep.cells) : 0.0;
  return rep;
}

}  // namespace hs::stefan
