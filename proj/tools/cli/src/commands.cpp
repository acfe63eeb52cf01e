#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "hs/baiocchi.hpp"
#include "hs/barriers.hpp"
#include "hs/errors.hpp"
#include "hs/fbdiag.hpp"
#include "hs/mesa.hpp"
#include "hs/raster_io.hpp"
#include "hs/stefan.hpp"
#include "output.hpp"

namespace hs::cli {

namespace {

std::string stem(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%03zu", prefix, i);
  return buf;
}

std::string csv_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

stefan::RunOptions run_options(const SolverFlags& f, std::optional<double> dt) {
  stefan::RunOptions o;
  o.solver.tol = f.tol;
  o.solver.omega = f.stefan_omega;
  o.solver.max_iters = f.max_iters;
  o.dt.fixed = dt;
  return o;
}

baiocchi::ObstacleSolveParams obstacle_params(const SolverFlags& f) {
  baiocchi::ObstacleSolveParams p;
  p.omega = f.obstacle_omega;
  p.tol = f.tol;
  p.max_sweeps = f.max_sweeps;
  p.activation_rel = f.activation_rel;
  return p;
}

void record_solver(RunContext& ctx, const SolverFlags& f, const Domain& d) {
  ctx.parameters["solver_tol"] = f.tol;
  ctx.parameters["stefan_omega"] = f.stefan_omega;
  ctx.parameters["stefan_max_iters"] =
      f.max_iters ? f.max_iters : static_cast<std::size_t>(50.0 * std::sqrt(static_cast<double>(d.size()))) + 1;
  ctx.parameters["obstacle_omega"] = f.obstacle_omega;
  ctx.parameters["obstacle_max_sweeps"] =
      f.max_sweeps ? f.max_sweeps : static_cast<std::size_t>(200.0 * std::sqrt(static_cast<double>(d.size())));
  ctx.parameters["activation_rel"] = f.activation_rel;
  ctx.parameters["invariant_tol"] = stefan::invariant_tolerance(f.tol);
  ctx.parameters["min_face_fraction"] = kMinFaceFraction;
}

json grid_record(const Domain& d) {
  const Grid& g = d.grid;
  json j;
  j["h"] = g.h();
  j["dimension"] = g.dimension();
  j["shape"] = std::vector<int>(g.shape().begin(), g.shape().begin() + g.dimension());
  j["origin"] = std::vector<double>(g.origin().begin(), g.origin().begin() + g.dimension());
  j["margin"] = d.margin;
  j["far_field_band"] = Grid::kBand;
  j["cells"] = g.size();
  j["slot_cells"] = g.count(CellRole::Slot);
  j["fluid_cells"] = g.count(CellRole::Fluid);
  j["far_field_cells"] = g.count(CellRole::FarField);
  j["envelope"] = {{"center", std::vector<double>(d.envelope.center.begin(), d.envelope.center.begin() + g.dimension())},
                   {"scale", d.envelope.scale},
                   {"k", d.envelope.k},
                   {"ell", d.envelope.ell}};
  return j;
}

Domain prepare_for(RunContext& ctx, double reach_time) {
  Domain d = prepare(ctx.scenario, reach_time);
  ctx.parameters["margin"] = d.margin;
  ctx.parameters["reach_time"] = reach_time;
  return d;
}

json radius_record(const Domain& d, const std::vector<Point>& points) {
  const auto r = fbdiag::radius_stats(points, d.envelope.center, d.grid.dimension());
  return {{"min", r.min}, {"max", r.max}, {"mean", r.mean}, {"points", r.count}};
}

Mask positive_mask(const Domain& d, const std::vector<double>& f) {
  Mask m(d.size(), 0);
  for (std::size_t idx : d.fluid_cells) m[idx] = f[idx] > 0.0 ? 1 : 0;
  return m;
}

void check_times(const std::vector<double>& t) {
  if (t.empty()) throw ConfigError("at least one time is required");
  if (!std::is_sorted(t.begin(), t.end()) || t.front() < 0.0) {
    throw ConfigError("times must be sorted and nonnegative");
  }
}

std::string regions_csv(const fbdiag::RegionSeries& s) {
  std::ostringstream out;
  out << "t,active_cells,area,weighted_measure,fb_length\n";
  for (const auto& f : s.frames) {
    out << csv_number(f.t) << ',' << f.active_cells << ',' << csv_number(f.area) << ','
        << csv_number(f.weighted_measure) << ',' << csv_number(f.fb_length) << '\n';
  }
  return out.str();
}

void write_limit(RunContext& ctx, const Domain& d, const mesa::MesaLimit& lim) {
  for (std::size_t s = 0; s < lim.times.size(); ++s) {
    std::vector<double> q(lim.Q[s].begin(), lim.Q[s].end());
    const std::string name = stem("limit", s);
    io::write_raster(ctx.out / "snapshots", name, io::header_for(d.grid, lim.times[s], lim.m_list.back()),
                     {{"V", &lim.V[s].theta}, {"u_inf", &lim.u_inf[s]}, {"W", &lim.W[s]}, {"Q", &q}});
    ctx.outputs.push_back("snapshots/" + name + ".json");
  }
}

json mesa_record(const Domain& d, const mesa::MesaLimit& lim, double tol) {
  const auto rep = mesa::representation_check(d, lim, tol);
  json j;
  j["m_list"] = lim.m_list;
  j["times"] = lim.times;
  j["tail_gap"] = lim.tail_gap;
  j["tail_estimate"] = lim.tail_estimate;
  j["q_counts"] = lim.q_counts;
  j["q_threshold"] = 1.0 - d.grid.h();
  j["max_order_violation"] = lim.max_order_violation;
  j["nesting_violations"] = lim.nesting_violations;
  j["representation"] = {{"fraction", rep.fraction},
                         {"fraction_last_level", rep.fraction_last_level},
                         {"q_nesting_violations", rep.nesting_violations}};
  json harm = json::array();
  for (std::size_t s = 0; s < lim.times.size(); ++s) {
    const auto h = mesa::harmonicity_check(d, lim.V[s].theta, positive_mask(d, lim.V[s].theta), 2);
    harm.push_back({{"t", lim.times[s]}, {"residual", h.residual}, {"cells", h.cells}});
  }
  j["harmonicity"] = harm;
  json runs = json::array();
  for (const auto& r : lim.runs) {
    runs.push_back({{"m", r.m}, {"steps", r.steps}, {"sweeps", r.total_sweeps},
                    {"max_residual", r.max_residual}, {"mass_balance_error", r.mass_balance_error}});
  }
  j["runs"] = runs;
  return j;
}

json slices_record(const Domain& d, const std::vector<baiocchi::BaiocchiPotential>& slices) {
  json arr = json::array();
  for (const auto& s : slices) {
    const auto fr = fbdiag::make_frame(d, s.active, s.t);
    const auto mb = baiocchi::mass_balance_check(d, s);
    arr.push_back({{"t", s.t},
                   {"residual", s.residual},
                   {"tolerance", s.tolerance},
                   {"sweeps", s.sweeps},
                   {"active_cells", fr.active_cells},
                   {"area", fr.area},
                   {"weighted_measure", fr.weighted_measure},
                   {"fb_length", fr.fb_length},
                   {"fb_radius", radius_record(d, fr.fb_points)},
                   {"mass_balance", {{"weighted_area", mb.weighted_area},
                                     {"slot_flux", mb.slot_flux},
                                     {"discrepancy", mb.discrepancy},
                                     {"relative", mb.relative}}}});
  }
  return arr;
}

void write_slices(RunContext& ctx, const Domain& d, const std::vector<baiocchi::BaiocchiPotential>& slices) {
  for (std::size_t i = 0; i < slices.size(); ++i) {
    std::vector<double> a(slices[i].active.begin(), slices[i].active.end());
    const std::string name = stem("slice", i);
    io::write_raster(ctx.out / "slices", name, io::header_for(d.grid, slices[i].t),
                     {{"W", &slices[i].W}, {"active", &a}});
    ctx.outputs.push_back("slices/" + name + ".json");
  }
}

}  // namespace


void cmd_stefan(const StefanArgs& a) {
  RunContext ctx = open_context("stefan", a.scenario, a.out, a.jobs);
  const std::vector<double> times = a.snapshots.empty() ? default_times(ctx.scenario.t_max, 10) : a.snapshots;
  check_times(times);
  Domain d = prepare_for(ctx, std::max(times.back(), ctx.scenario.t_max));
  const stefan::RunOptions opt = run_options(a.solver, a.dt);
  record_solver(ctx, a.solver, d);
  ctx.parameters["m"] = a.m;
  ctx.parameters["dt"] = opt.dt.dt(d);
  ctx.parameters["dt_fraction"] = a.dt ? json(nullptr) : json(opt.dt.fraction);
  ctx.parameters["snapshots"] = times;
  const double er_tol = 5.0 * d.grid.h();
  ctx.parameters["essential_range_tol"] = er_tol;

  const stefan::RunResult r = stefan::run(d, a.m, times, opt);

  json snaps = json::array();
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    const auto& s = r.snapshots[i];
    const std::string name = stem("snap", i);
    io::write_raster(ctx.out / "snapshots", name, io::header_for(d.grid, s.u.t, a.m),
                     {{"u", &s.u.u}, {"theta", &s.theta.theta}, {"W", &s.W}});
    ctx.outputs.push_back("snapshots/" + name + ".json");
    const auto fr = fbdiag::make_frame(d, positive_mask(d, s.theta.theta), s.u.t);
    const auto er = stefan::essential_range_check(d, s.u, a.m, er_tol);
    double enthalpy = 0.0, theta_max = 0.0;
    for (std::size_t idx : d.fluid_cells) {
      enthalpy += s.u.u[idx] * d.grid.cell_volume();
      theta_max = std::max(theta_max, s.theta.theta[idx]);
    }
    snaps.push_back({{"t", s.u.t}, {"active_cells", fr.active_cells}, {"area", fr.area},
                     {"fb_radius", radius_record(d, fr.fb_points)}, {"theta_max", theta_max},
                     {"enthalpy", enthalpy}, {"essential_range_fraction", er.fraction}});
  }

  std::ostringstream ledger;
  ledger << "step,t,dt,influx,outflux,cumulative\n";
  for (const auto& e : r.ledger) {
    ledger << e.step << ',' << csv_number(e.t) << ',' << csv_number(e.dt) << ',' << csv_number(e.influx) << ','
           << csv_number(e.outflux) << ',' << csv_number(e.cumulative) << '\n';
  }
  write_text(ctx.out / "flux_ledger.csv", ledger.str());
  ctx.outputs.push_back("flux_ledger.csv");

  json rep;
  rep["grid"] = grid_record(d);
  rep["m"] = a.m;
  rep["steps"] = r.steps;
  rep["sweeps"] = r.total_sweeps;
  rep["max_residual"] = r.max_residual;
  rep["mass_balance_error"] = r.mass_balance_error;
  rep["snapshots"] = snaps;
  write_json(ctx.out / "report.json", rep);
  ctx.outputs.push_back("report.json");
  write_manifest(ctx);
}

void cmd_mesa(const MesaArgs& a) {
  RunContext ctx = open_context("mesa", a.scenario, a.out, a.jobs);
  const std::vector<double> times = a.snapshots.empty() ? default_times(ctx.scenario.t_max, 10) : a.snapshots;
  check_times(times);
  const std::vector<double> m_list = a.m_list.empty() ? ctx.scenario.m_list : a.m_list;
  Domain d = prepare_for(ctx, std::max(times.back(), ctx.scenario.t_max));
  mesa::SweepOptions opt;
  opt.run = run_options(a.solver, a.dt);
  opt.jobs = a.jobs;
  record_solver(ctx, a.solver, d);
  ctx.parameters["m_list"] = m_list;
  ctx.parameters["dt"] = opt.run.dt.dt(d);
  ctx.parameters["snapshots"] = times;
  ctx.parameters["q_threshold"] = 1.0 - d.grid.h();
  ctx.parameters["harmonicity_margin_cells"] = 2;

  const mesa::MesaLimit lim = mesa::sweep(d, times, m_list, opt);
  write_limit(ctx, d, lim);
  json rep = mesa_record(d, lim, a.solver.tol + d.grid.h());
  rep["grid"] = grid_record(d);
  write_json(ctx.out / "mesa.json", rep);
  ctx.outputs.push_back("mesa.json");
  write_manifest(ctx);
}

void cmd_obstacle(const ObstacleArgs& a) {
  RunContext ctx = open_context("obstacle", a.scenario, a.out, a.jobs);
  const std::vector<double> times = a.times.empty() ? default_times(ctx.scenario.t_max, 10) : a.times;
  check_times(times);
  Domain d = prepare_for(ctx, std::max(times.back(), ctx.scenario.t_max));
  record_solver(ctx, a.solver, d);
  ctx.parameters["times"] = times;

  const auto slices = baiocchi::solve_slices(d, times, obstacle_params(a.solver), a.jobs);
  write_slices(ctx, d, slices);
  std::vector<std::vector<double>> fields;
  for (const auto& s : slices) fields.push_back(s.W);
  const auto series = fbdiag::extract_regions(d, fields, times, a.solver.activation_rel);
  write_text(ctx.out / "regions.csv", regions_csv(series));
  ctx.outputs.push_back("regions.csv");

  json rep;
  rep["grid"] = grid_record(d);
  rep["slices"] = slices_record(d, slices);
  write_json(ctx.out / "obstacle.json", rep);
  ctx.outputs.push_back("obstacle.json");
  write_manifest(ctx);
}

void cmd_compare(const CompareArgs& a) {
  RunContext ctx = open_context("compare", a.scenario, a.out, a.jobs);
  const std::vector<double> times = a.times.empty() ? default_times(ctx.scenario.t_max, 10) : a.times;
  check_times(times);
  const std::vector<double> m_list = a.m_list.empty() ? ctx.scenario.m_list : a.m_list;
  Domain d = prepare_for(ctx, std::max(times.back(), ctx.scenario.t_max));
  mesa::SweepOptions opt;
  opt.run = run_options(a.solver, a.dt);
  opt.jobs = a.jobs;
  record_solver(ctx, a.solver, d);
  const double dt = opt.run.dt.dt(d);
  ctx.parameters["m_list"] = m_list;
  ctx.parameters["dt"] = dt;
  ctx.parameters["times"] = times;
  ctx.parameters["contact_agreement_steps"] = 2;

  const mesa::MesaLimit lim = mesa::sweep(d, times, m_list, opt);
  const auto slices = baiocchi::solve_slices(d, times, obstacle_params(a.solver), a.jobs);
  const auto cv = baiocchi::cross_validate(d, lim, slices);
  write_limit(ctx, d, lim);
  write_slices(ctx, d, slices);

  // The obstacle route only resolves contact to the slice spacing.
  double spacing = dt;
  for (std::size_t i = 1; i < times.size(); ++i) spacing = std::max(spacing, times[i] - times[i - 1]);
  const bool agree = std::abs(cv.contact_time_mesa - cv.contact_time_obstacle) <= 2.0 * spacing;

  std::ostringstream csv;
  csv << "t,supgap_W,relative_gap,hausdorff_cells,contact_flags\n";
  json rows = json::array();
  for (const auto& r : cv.rows) {
    std::string flags;
    if (cv.contact_detected && std::abs(r.t - cv.contact_time_obstacle) < 1e-12) flags += "obstacle";
    if (cv.contact_detected && r.t >= cv.contact_time_mesa && r.t - cv.contact_time_mesa < spacing) {
      flags += flags.empty() ? "mesa" : "|mesa";
    }
    csv << csv_number(r.t) << ',' << csv_number(r.sup_gap) << ',' << csv_number(r.relative_gap) << ','
        << csv_number(r.hausdorff_cells) << ',' << flags << '\n';
    rows.push_back({{"t", r.t}, {"supgap_W", r.sup_gap}, {"max_W", r.max_W}, {"relative_gap", r.relative_gap},
                    {"hausdorff_cells", r.hausdorff_cells}, {"contact_flags", flags}});
  }
  write_text(ctx.out / "compare.csv", csv.str());
  ctx.outputs.push_back("compare.csv");

  json rep;
  rep["grid"] = grid_record(d);
  rep["rows"] = rows;
  rep["contact"] = {{"detected", cv.contact_detected},
                    {"time_mesa", cv.contact_time_mesa},
                    {"time_obstacle", cv.contact_time_obstacle},
                    {"cells_gained_mesa", cv.contact_jump_mesa},
                    {"cells_gained_obstacle", cv.contact_jump_obstacle},
                    {"resolution", spacing},
                    {"agree_within_two_steps", agree}};
  rep["mesa"] = mesa_record(d, lim, a.solver.tol + d.grid.h());
  rep["obstacle"] = slices_record(d, slices);
  write_json(ctx.out / "compare.json", rep);
  ctx.outputs.push_back("compare.json");
  write_manifest(ctx);
}

void cmd_barriers(const BarrierArgs& a) {
  RunContext ctx = open_plain_context("barriers", a.out, 1);
  ctx.parameters = {{"n", a.n}, {"k", a.k}, {"eps", a.eps}, {"alpha", a.alpha}, {"beta", a.beta},
                    {"samples", a.samples}, {"alpha_scan", {1.0, 1e6, 200}}, {"beta_scan", {0.0, 1.0, 50}}};
  const auto bounds = barriers::derivative_bounds(a.n);
  const auto sub = barriers::subsolution_speed(a.n, a.k, a.eps);
  const auto super = barriers::check_supersolution(a.n, 1024.0, a.k, a.k, 1.0);

  auto profile_csv = [](const std::vector<barriers::ProfileSample>& p) {
    std::ostringstream s;
    s << "r,value,derivative\n";
    for (const auto& q : p) s << csv_number(q.r) << ',' << csv_number(q.value) << ',' << csv_number(q.derivative) << '\n';
    return s.str();
  };
  write_text(ctx.out / "u_profile.csv", profile_csv(barriers::profile_u(a.n, a.alpha, a.beta, a.samples)));
  write_text(ctx.out / "v_profile.csv", profile_csv(barriers::profile_v(a.n, a.alpha, a.beta, a.samples)));
  ctx.outputs = {"u_profile.csv", "v_profile.csv", "barriers.json"};

  json rep;
  rep["derivative_bounds"] = {{"gamma1", bounds.gamma1}, {"gamma2", bounds.gamma2}, {"gamma3", bounds.gamma3},
                              {"gamma4", bounds.gamma4}, {"u_r_range", {bounds.u_min, bounds.u_max}},
                              {"v_r_range", {bounds.v_min, bounds.v_max}}, {"pad_u", bounds.pad_u},
                              {"pad_v", bounds.pad_v}, {"samples", bounds.samples}};
  rep["supersolution"] = {{"ell", a.k}, {"front", "2 + ell t (unit slot)"}, {"samples", super.samples},
                          {"violations", super.violations}, {"max_diffusion", super.max_diffusion},
                          {"min_time_derivative", super.min_time_derivative},
                          {"max_gradient_excess", super.max_gradient_excess}};
  rep["subsolution"] = {{"ell", sub.ell}, {"c2", sub.c2}, {"eps", sub.eps},
                        {"m0", std::isfinite(sub.m0) ? json(sub.m0) : json(nullptr)}};
  rep["outer_derivatives"] = {{"u_r", barriers::eval_u_outer_derivative(a.n, a.alpha, a.beta)},
                              {"v_r", barriers::eval_v_outer_derivative(a.n, a.alpha, a.beta)}};
  write_json(ctx.out / "barriers.json", rep);
  write_manifest(ctx);
}

void cmd_diagnose(const DiagnoseArgs& a) {
  const fs::path run_dir(a.run_dir);
  const json manifest = json::parse(read_text(run_dir / "manifest.json"));
  const std::string command = manifest.at("command").get<std::string>();
  if (!manifest.contains("scenario")) throw ConfigError("run directory has no scenario record");
  const fs::path scenario_path = manifest.value("scenario_path", std::string());

  RunContext ctx = open_plain_context("diagnose", a.out, 1);
  ctx.scenario = parse_scenario(manifest.at("scenario").dump(), scenario_path.parent_path());
  ctx.scenario.margin = manifest.at("parameters").at("margin").get<double>();
  ctx.has_scenario = true;
  ctx.scenario_path = scenario_path;
  ctx.scenario_text = manifest.at("scenario").dump();
  const double reach = manifest.at("parameters").at("reach_time").get<double>();
  Domain d = prepare(ctx.scenario, reach);

  std::string folder, prefix, field;
  double activation = 0.0;
  if (command == "stefan") {
    folder = "snapshots", prefix = "snap", field = "theta";
  } else if (command == "mesa") {
    folder = "snapshots", prefix = "limit", field = "V";
  } else if (command == "obstacle" || command == "compare") {
    folder = "slices", prefix = "slice", field = "W";
    activation = manifest.at("parameters").value("activation_rel", 1e-8);
  } else {
    throw ConfigError("cannot diagnose a '" + command + "' run");
  }

  std::vector<std::vector<double>> fields;
  std::vector<double> times;
  for (std::size_t i = 0;; ++i) {
    const fs::path header = run_dir / folder / (stem(prefix.c_str(), i) + ".json");
    if (!fs::exists(header)) break;
    io::Raster r = io::read_raster(header);
    if (r.header.shape != d.grid.shape()) throw ConfigError("raster grid does not match the scenario grid");
    times.push_back(r.header.t);
    fields.push_back(std::move(r.fields.at(field)));
  }
  if (fields.empty()) throw ConfigError("no rasters found in " + (run_dir / folder).string());

  const auto series = fbdiag::extract_regions(d, fields, times, activation);
  write_text(ctx.out / "regions.csv", regions_csv(series));

  const auto cont = fbdiag::measure_continuity(series, ctx.scenario.lambda);
  json slopes = json::array();
  for (const auto& e : cont.slopes) {
    slopes.push_back({{"s", e.s}, {"t", e.t}, {"increment", e.increment}, {"slope", e.slope}, {"spike", e.spike}});
  }
  write_json(ctx.out / "continuity.json",
             {{"lambda", ctx.scenario.lambda}, {"degenerate", cont.degenerate},
              {"lambda_factor", cont.degenerate ? json(nullptr) : json(cont.lambda_factor)},
              {"max_slope", cont.max_slope}, {"slopes", slopes}});

  const auto& last = series.frames.back();
  std::vector<Point> points;
  if (!a.points.empty()) {
    std::stringstream ss(a.points);
    std::string item;
    while (std::getline(ss, item, ';')) {
      Point p{0.0, 0.0, 0.0};
      std::stringstream ps(item);
      std::string c;
      int k = 0;
      while (std::getline(ps, c, ',') && k < 3) p[k++] = std::stod(c);
      if (k != d.grid.dimension()) throw ConfigError("point '" + item + "' has the wrong dimension");
      points.push_back(p);
    }
  } else if (!last.fb_points.empty()) {
    const std::size_t step = std::max<std::size_t>(1, last.fb_points.size() / 8);
    for (std::size_t i = 0; i < last.fb_points.size() && points.size() < 8; i += step) points.push_back(last.fb_points[i]);
  }
  const double h = d.grid.h();
  const std::vector<double> radii = a.radii.empty() ? std::vector<double>{16 * h, 8 * h, 4 * h} : a.radii;
  fbdiag::ClassifyThresholds th;
  th.delta_reg = a.delta_reg;
  json records = json::array();
  for (const Point& p : points) {
    const auto rep = fbdiag::classify_point(d.grid, last.active, p, radii, th, &ctx.scenario.slot);
    records.push_back({{"t", last.t},
                       {"point", std::vector<double>(p.begin(), p.begin() + d.grid.dimension())},
                       {"radii", rep.radii},
                       {"density", rep.density},
                       {"min_diameter", rep.min_diameter},
                       {"md_ratio", rep.md_ratio},
                       {"classification", fbdiag::to_string(rep.classification)},
                       {"warnings", rep.warnings}});
  }
  write_json(ctx.out / "points.json", records);
  ctx.outputs = {"regions.csv", "continuity.json", "points.json"};
  ctx.parameters = {{"run_dir", fs::absolute(run_dir).string()}, {"source_command", command},
                    {"field", field}, {"activation_rel", activation}, {"radii", radii},
                    {"delta_reg", th.delta_reg}, {"directions", th.directions},
                    {"slot_exclusion_cells", th.slot_exclusion_cells}, {"spike_factor", 5.0},
                    {"margin", d.margin}, {"reach_time", reach}};
  write_manifest(ctx);
}

}  // namespace hs::cli
