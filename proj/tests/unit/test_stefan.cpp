#include <cmath>
#include <random>

#include "doctest.h"
#include "hs/domain.hpp"
#include "hs/errors.hpp"
#include "hs/scenario.hpp"
#include "hs/stefan.hpp"

using namespace hs;

namespace {

double total_enthalpy(const Domain& d, const std::vector<double>& u) {
  double s = 0.0;
  for (std::size_t i : d.fluid_cells) s += u[i];
  return s * d.grid.cell_volume();
}

}  // namespace

TEST_CASE("alpha_m") {
  CHECK(stefan::alpha_m(1.5, 2.0) == 1.0);
  CHECK(stefan::alpha_m(0.7, 64.0) == 0.0);
  const double M = 1.7, m = 128.0;
  CHECK(stefan::alpha_m(1.0 + M / m, m) == doctest::Approx(M));
}

TEST_CASE("no injection means no evolution") {
  Scenario s = radial_scenario(1.0 / 16, 0.25);
  s.p = BoundaryData::constant(0.0);
  s.u_init = InitialData::radial({1.5, 2.0, 2.5}, {0.3, 0.9, 0.0});
  const Domain d = prepare(s);
  const auto r = stefan::run(d, 64.0, {0.0, 0.1, 0.25});
  for (const auto& snap : r.snapshots) {
    CHECK(snap.u.u == d.u_init);
    for (std::size_t i : d.fluid_cells) CHECK(snap.theta.theta[i] == 0.0);
  }
}

TEST_CASE("one step conserves enthalpy up to the boundary flux") {
  const Domain d = prepare(radial_scenario(1.0 / 32, 0.5));
  stefan::State st = stefan::initial_state(d);
  const stefan::SolverOptions opt;
  for (int n = 0; n < 5; ++n) {
    const double before = total_enthalpy(d, st.u);
    const auto rep = stefan::step(d, st, 0.01, 64.0, opt);
    const double gain = total_enthalpy(d, st.u) - before;
    CHECK(rep.influx > 0.0);
    CHECK(std::abs(gain - (rep.influx - rep.outflux)) <= opt.tol * d.size() * d.grid.cell_volume() + 1e-14);
  }
}

TEST_CASE("step rejects nonpositive dt") {
  const Domain d = prepare(radial_scenario(1.0 / 8, 0.25));
  stefan::State st = stefan::initial_state(d);
  CHECK_THROWS_AS(stefan::step(d, st, 0.0, 64.0), ConfigError);
  CHECK_THROWS_AS(stefan::step(d, st, -0.1, 64.0), ConfigError);
}

TEST_CASE("non-convergence reports the residual") {
  const Domain d = prepare(radial_scenario(1.0 / 32, 0.25));
  stefan::State st = stefan::initial_state(d);
  stefan::SolverOptions opt;
  opt.max_iters = 2;
  try {
    stefan::step(d, st, 0.05, 1024.0, opt);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.residual() > opt.tol);
    CHECK_FALSE(e.residual_history().empty());
  }
}

TEST_CASE("positivity set at m = 64 is an annulus inside the supersolution support") {
  const Scenario s = radial_scenario(1.0 / 32, 0.1);
  const Domain d = prepare(s);
  const auto r = stefan::run(d, 64.0, {0.1});
  const auto& th = r.snapshots.back().theta.theta;
  const double bound = d.envelope.radius(0.1);
  double inner_max = 0.0;
  std::size_t active = 0;
  for (std::size_t i : d.fluid_cells) {
    const double rad = norm(d.grid.center(i), 2);
    if (th[i] > 0.0) {
      ++active;
      CHECK(rad <= bound);
      inner_max = std::max(inner_max, rad);
    }
    // Every cell touching the slot is diffusive.
    if (d.touches_slot(i)) CHECK(th[i] > 0.0);
  }
  CHECK(active > 0);
  // Radially increasing: every fluid cell closer than the nearest inactive
  // cell is active.
  double nearest_inactive = 1e300;
  for (std::size_t i : d.fluid_cells) {
    if (th[i] == 0.0) nearest_inactive = std::min(nearest_inactive, norm(d.grid.center(i), 2));
  }
  CHECK(nearest_inactive > 1.0 + d.grid.h());
}

TEST_CASE("temperature increases with m") {
  const Domain d = prepare(radial_scenario(1.0 / 16, 0.3));
  const std::vector<double> times{0.1, 0.2, 0.3};
  const auto lo = stefan::run(d, 32.0, times);
  const auto hi = stefan::run(d, 64.0, times);
  const double tol = 2.0 * 64.0 * stefan::invariant_tolerance(1e-10);
  for (std::size_t s = 0; s < times.size(); ++s) {
    for (std::size_t i : d.fluid_cells) {
      CHECK(lo.snapshots[s].theta.theta[i] <= hi.snapshots[s].theta.theta[i] + tol);
    }
  }
}

TEST_CASE("snapshot at t = 0 returns u_I exactly") {
  const Domain d = prepare(radial_scenario(1.0 / 16, 0.25, 0.5));
  const auto r = stefan::run(d, 64.0, {0.0, 0.1});
  CHECK(r.snapshots.front().u.u == d.u_init);
  CHECK(r.snapshots.front().u.t == 0.0);
}

TEST_CASE("run invariants: monotone in time, bounded, mass balanced") {
  const Domain d = prepare(radial_scenario(1.0 / 16, 0.4, 0.3));
  const double m = 128.0;
  const auto r = stefan::run(d, m, {0.1, 0.2, 0.3, 0.4});
  const double tol = stefan::invariant_tolerance(1e-10);
  for (std::size_t s = 0; s < r.snapshots.size(); ++s) {
    const auto& u = r.snapshots[s].u.u;
    const auto& th = r.snapshots[s].theta.theta;
    for (std::size_t i : d.fluid_cells) {
      CHECK(u[i] >= -tol);
      CHECK(u[i] <= 1.0 + d.max_p / m + tol);
      CHECK(th[i] >= 0.0);
      CHECK(th[i] <= d.max_p + m * tol);
      if (u[i] < 1.0 - tol) CHECK(th[i] == 0.0);
      if (s > 0) CHECK(u[i] >= r.snapshots[s - 1].u.u[i] - tol);
    }
  }
  CHECK(r.mass_balance_error <= 1e-10 * d.size() * r.steps * d.grid.cell_volume());
  double cumulative = 0.0;
  for (const auto& e : r.ledger) {
    CHECK(e.influx >= 0.0);
    cumulative += e.influx;
    CHECK(e.cumulative == doctest::Approx(cumulative));
  }
}

TEST_CASE("discrete comparison principle on random ordered pairs") {
  const Domain d = prepare(radial_scenario(1.0 / 16, 0.25));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> base(0.0, 1.0), bump(0.0, 0.3);
  for (int trial = 0; trial < 5; ++trial) {
    stefan::State a{0.0, std::vector<double>(d.size(), 0.0), std::vector<double>(d.size(), 0.0)};
    stefan::State b = a;
    for (std::size_t i : d.fluid_cells) {
      a.u[i] = base(rng);
      b.u[i] = std::min(1.0, a.u[i] + bump(rng));
    }
    for (int n = 0; n < 3; ++n) {
      stefan::step(d, a, 0.02, 64.0);
      stefan::step(d, b, 0.02, 64.0);
    }
    double worst = 0.0;
    for (std::size_t i : d.fluid_cells) worst = std::max(worst, a.u[i] - b.u[i]);
    CHECK(worst <= stefan::invariant_tolerance(1e-10));
  }
}

TEST_CASE("weak-form residual vanishes under refinement") {
  // phi(x, t) = (1 - |x - c|^2 / rho^2)_+^3 * g(t) with g(T) = 0, supported
  // away from the slot so the boundary pairing drops out.
  struct Test {
    Point c;
    double rho;
    int power;
  };
  const std::vector<Test> tests{{{1.6, 0, 0}, 0.5, 1}, {{0, -1.7, 0}, 0.6, 2}, {{-1.2, 1.2, 0}, 0.55, 3}};
  const double T = 0.3;
  std::vector<std::vector<double>> residuals(tests.size());
  for (double h : {1.0 / 16, 1.0 / 32}) {
    const Domain d = prepare(radial_scenario(h, T, 0.2));
    const double dt = 0.25 * h;
    const double m = 64.0;
    const double vol = d.grid.cell_volume();
    stefan::State st = stefan::initial_state(d);
    std::vector<double> acc(tests.size(), 0.0), scale(tests.size(), 0.0);
    auto phi = [&](const Test& q, const Point& x, double t, double& lap) {
      const double s = (std::pow(x[0] - q.c[0], 2) + std::pow(x[1] - q.c[1], 2)) / (q.rho * q.rho);
      const double g = std::pow(1.0 - t / T, q.power);
      if (s >= 1.0) {
        lap = 0.0;
        return 0.0;
      }
      // Laplacian of (1 - s)^3 in 2D: 12 (1 - s)(2s - 1) / rho^2 + ... computed exactly.
      const double w = 1.0 - s;
      lap = g * (-12.0 * w * w + 24.0 * w * s) / (q.rho * q.rho);
      return g * w * w * w;
    };
    for (std::size_t q = 0; q < tests.size(); ++q) {
      for (std::size_t i : d.fluid_cells) {
        double lap;
        const double p0 = phi(tests[q], d.grid.center(i), 0.0, lap);
        acc[q] -= vol * d.u_init[i] * p0;
        scale[q] += vol * std::abs(p0);
      }
    }
    const int steps = static_cast<int>(std::round(T / dt));
    for (int n = 0; n < steps; ++n) {
      const double t0 = n * dt, t1 = (n + 1) * dt;
      stefan::step(d, st, dt, m);
      for (std::size_t q = 0; q < tests.size(); ++q) {
        for (std::size_t i : d.fluid_cells) {
          double lap0, lap1;
          const Point x = d.grid.center(i);
          const double p0 = phi(tests[q], x, t0, lap0);
          const double p1 = phi(tests[q], x, t1, lap1);
          acc[q] += vol * (-st.u[i] * (p1 - p0) - dt * st.theta[i] * lap1);
        }
      }
    }
    for (std::size_t q = 0; q < tests.size(); ++q) residuals[q].push_back(std::abs(acc[q]) / scale[q]);
  }
  for (const auto& r : residuals) {
    CHECK(r[1] < r[0]);
    CHECK(r[1] < 0.05);
  }
}

TEST_CASE("essential range check") {
  const Domain d = prepare(radial_scenario(1.0 / 16, 0.25, 0.4));
  const EnthalpyField init{0.0, d.u_init};
  CHECK(stefan::essential_range_check(d, init, 64.0, 1e-8).fraction == 0.0);
  const EnthalpyField ones{0.0, std::vector<double>(d.size(), 1.0)};
  CHECK(stefan::essential_range_check(d, ones, 64.0, 1e-8).fraction == 0.0);
  EnthalpyField mixed = init;
  mixed.u[d.fluid_cells[0]] = 0.7;
  const auto rep = stefan::essential_range_check(d, mixed, 64.0, 1e-8);
  CHECK(rep.cells == d.fluid_cells.size());
  CHECK(rep.offending == std::vector<std::size_t>{d.fluid_cells[0]});
}

TEST_CASE("annulus patch stays saturated until contact, then is swept within a few steps") {
  const Scenario s = annulus_scenario(0.0, 0.25, 1.0 / 8);
  const Domain d = prepare(s);
  std::vector<double> times;
  for (int i = 1; i <= 96; ++i) times.push_back(i / 32.0);
  stefan::RunOptions opt;
  opt.dt.fixed = 1.0 / 32.0;
  const auto r = stefan::run(d, 256.0, times, opt);
  // Patch cells: u_I = 1.
  std::vector<std::size_t> patch;
  for (std::size_t i : d.fluid_cells) {
    if (d.u_init[i] == 1.0) patch.push_back(i);
  }
  REQUIRE_FALSE(patch.empty());
  // First time theta appears on the patch.
  double contact = INFINITY, swept = 0.0;
  for (std::size_t i : patch) {
    contact = std::min(contact, r.t_first_theta[i]);
    swept = std::max(swept, r.t_first_theta[i]);
  }
  REQUIRE(std::isfinite(contact));
  for (const auto& snap : r.snapshots) {
    if (snap.u.t >= contact) break;
    for (std::size_t i : patch) CHECK(snap.u.u[i] == 1.0);
  }
  // Front reaches r = 3 in roughly t = 2.55; the patch is swept within a few steps.
  CHECK(contact > 2.0);
  CHECK(contact < 3.0);
  CHECK(swept - contact <= 4.0 * opt.dt.fixed.value());
}

TEST_CASE("time grid divides each interval uniformly") {
  const auto g = stefan::time_grid({0.1, 0.25}, 0.04);
  double t = 0.0;
  for (double dt : g) {
    CHECK(dt <= 0.04 + 1e-15);
    t += dt;
  }
  CHECK(t == doctest::Approx(0.25));
  CHECK(g.size() == 3 + 4);
}
