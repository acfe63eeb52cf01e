#include "output.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hs/errors.hpp"
#include "hs/version.hpp"
#include "hs_cli/cli.hpp"

namespace hs::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

RunContext open_context(const std::string& command, const fs::path& scenario_path, const fs::path& out,
                        unsigned jobs) {
  RunContext ctx;
  ctx.command = command;
  ctx.out = out;
  ctx.jobs = jobs;
  ctx.scenario_path = scenario_path;
  ctx.scenario_text = read_text(scenario_path);
  ctx.scenario = parse_scenario(ctx.scenario_text, scenario_path.parent_path());
  ctx.has_scenario = true;
  fs::create_directories(out);
  return ctx;
}

RunContext open_plain_context(const std::string& command, const fs::path& out, unsigned jobs) {
  RunContext ctx;
  ctx.command = command;
  ctx.out = out;
  ctx.jobs = jobs;
  fs::create_directories(out);
  return ctx;
}

void write_manifest(const RunContext& ctx) {
  json m;
  m["tool"] = "hslab";
  m["version"] = kVersion;
  m["command"] = ctx.command;
  if (ctx.has_scenario) {
    m["scenario_path"] = fs::absolute(ctx.scenario_path).string();
    m["scenario_hash"] = "fnv1a64:" + hex64(fnv1a64(ctx.scenario_text));
    m["scenario"] = json::parse(scenario_to_json(ctx.scenario));
  }
  m["modules"] = {{"geometry", kVersion}, {"stefan", kVersion}, {"mesa", kVersion},
                  {"baiocchi", kVersion}, {"barriers", kVersion}, {"fbdiag", kVersion},
                  {"cli", kVersion}};
  m["jobs"] = ctx.jobs;
  m["parameters"] = ctx.parameters;
  m["outputs"] = ctx.outputs;
  write_json(ctx.out / "manifest.json", m);
}

unsigned resolve_jobs(unsigned flag) {
  if (const char* env = std::getenv("HS_JOBS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("HS_JOBS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, flag);
}

std::vector<double> default_times(double t_max, int count) {
  std::vector<double> t;
  for (int i = 0; i <= count; ++i) t.push_back(t_max * i / count);
  return t;
}

}  // namespace hs::cli
