#include "hs_cli/cli.hpp"

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hs/errors.hpp"
#include "hs/version.hpp"
#include "output.hpp"

namespace hs::cli {

namespace {

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--tol", f.tol, "complementarity residual tolerance")->check(CLI::PositiveNumber);
  app->add_option("--omega", f.stefan_omega, "relaxation factor of the enthalpy solver")->check(CLI::Range(0.1, 1.99));
  app->add_option("--max-iters", f.max_iters, "sweep cap per time step (0: 50 sqrt(cells))");
  app->add_option("--obstacle-omega", f.obstacle_omega, "relaxation factor of the obstacle solver")
      ->check(CLI::Range(0.1, 1.99));
  app->add_option("--max-sweeps", f.max_sweeps, "sweep cap per obstacle slice (0: 200 sqrt(cells))");
  app->add_option("--activation", f.activation_rel, "W threshold for the active set, relative to max W")
      ->check(CLI::PositiveNumber);
}

json error_record(const Error& e) {
  json j{{"error", e.kind()}, {"message", e.what()}, {"exit_code", e.exit_code()}};
  if (const auto* s = dynamic_cast<const SolverError*>(&e)) {
    j["residual"] = s->residual();
    j["residual_history"] = s->residual_history();
  }
  if (const auto* v = dynamic_cast<const EnvelopeError*>(&e)) j["required_margin"] = v->required_margin();
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Hele-Shaw flow as the mesa limit of one-phase Stefan problems"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string out;
  unsigned jobs = 1;

  StefanArgs st;
  auto* c_st = app.add_subcommand("stefan", "enthalpy solve for one m");
  c_st->add_option("scenario", st.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  c_st->add_option("--m", st.m, "mesa exponent")->check(CLI::PositiveNumber);
  c_st->add_option("--dt", st.dt, "fixed time step")->check(CLI::PositiveNumber);
  c_st->add_option("--snapshots", st.snapshots, "snapshot times")->delimiter(',');
  add_solver_flags(c_st, st.solver);

  MesaArgs me;
  auto* c_me = app.add_subcommand("mesa", "sweep over m and assemble the limit");
  c_me->add_option("scenario", me.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  c_me->add_option("--m-list", me.m_list, "increasing exponents, at least three")->delimiter(',');
  c_me->add_option("--dt", me.dt, "fixed time step")->check(CLI::PositiveNumber);
  c_me->add_option("--snapshots", me.snapshots, "snapshot times")->delimiter(',');
  add_solver_flags(c_me, me.solver);

  ObstacleArgs ob;
  auto* c_ob = app.add_subcommand("obstacle", "obstacle problem per time slice");
  c_ob->add_option("scenario", ob.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  c_ob->add_option("--times", ob.times, "slice times")->delimiter(',');
  add_solver_flags(c_ob, ob.solver);

  CompareArgs co;
  auto* c_co = app.add_subcommand("compare", "mesa limit against the obstacle route");
  c_co->add_option("scenario", co.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  c_co->add_option("--m-list", co.m_list, "increasing exponents, at least three")->delimiter(',');
  c_co->add_option("--dt", co.dt, "fixed time step")->check(CLI::PositiveNumber);
  c_co->add_option("--times", co.times, "comparison times")->delimiter(',');
  add_solver_flags(c_co, co.solver);

  BarrierArgs ba;
  auto* c_ba = app.add_subcommand("barriers", "radial barrier profiles and constants");
  c_ba->add_option("--n", ba.n, "dimension")->check(CLI::IsMember({2, 3}));
  c_ba->add_option("--k", ba.k, "slot datum")->check(CLI::PositiveNumber);
  c_ba->add_option("--eps", ba.eps, "source strength, relative to k")->check(CLI::NonNegativeNumber);
  c_ba->add_option("--alpha", ba.alpha, "inner radius of the profile annulus")->check(CLI::PositiveNumber);
  c_ba->add_option("--beta", ba.beta, "annulus parameter")->check(CLI::Range(0.0, 1.0));
  c_ba->add_option("--samples", ba.samples, "profile samples")->check(CLI::Range(3, 100000));

  DiagnoseArgs di;
  auto* c_di = app.add_subcommand("diagnose", "free-boundary diagnostics of a run directory");
  c_di->add_option("run_dir", di.run_dir, "output directory of a previous run")->required()->check(CLI::ExistingDirectory);
  c_di->add_option("--points", di.points, "points 'x,y;x,y' (default: 8 free-boundary points)");
  c_di->add_option("--radii", di.radii, "ball radii, decreasing")->delimiter(',');
  c_di->add_option("--delta-reg", di.delta_reg, "regularity threshold")->check(CLI::PositiveNumber);

  for (auto* c : {c_st, c_me, c_ob, c_co, c_ba, c_di}) {
    c->add_option("--out", out, "output directory")->required();
  }
  for (auto* c : {c_st, c_me, c_ob, c_co}) {
    c->add_option("--jobs", jobs, "worker threads (HS_JOBS overrides)")->check(CLI::PositiveNumber);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const unsigned j = resolve_jobs(jobs);
    if (c_st->parsed()) st.out = out, st.jobs = j, cmd_stefan(st);
    if (c_me->parsed()) me.out = out, me.jobs = j, cmd_mesa(me);
    if (c_ob->parsed()) ob.out = out, ob.jobs = j, cmd_obstacle(ob);
    if (c_co->parsed()) co.out = out, co.jobs = j, cmd_compare(co);
    if (c_ba->parsed()) ba.out = out, cmd_barriers(ba);
    if (c_di->parsed()) di.out = out, cmd_diagnose(di);
  } catch (const Error& e) {
    const json rec = error_record(e);
    std::cerr << rec.dump() << '\n';
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!ec) write_json(fs::path(out) / "error.json", rec);
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}, {"exit_code", 4}}.dump() << '\n';
    return 4;
  }
  return 0;
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace hs::cli
