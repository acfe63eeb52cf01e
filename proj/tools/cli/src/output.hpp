#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hs/scenario.hpp"
#include "json.hpp"

namespace hs::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// What a command consumed and produced; becomes manifest.json.
struct RunContext {
  std::string command;
  fs::path out;
  fs::path scenario_path;
  std::string scenario_text;
  bool has_scenario = false;
  Scenario scenario;
  json parameters = json::object();
  std::vector<std::string> outputs;
  unsigned jobs = 1;
};

std::string hex64(std::uint64_t v);
std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);
void write_json(const fs::path& path, const json& j);

/// Loads the scenario and fills the scenario fields of a context.
RunContext open_context(const std::string& command, const fs::path& scenario_path, const fs::path& out,
                        unsigned jobs);
/// Context for commands without a scenario file.
RunContext open_plain_context(const std::string& command, const fs::path& out, unsigned jobs);
void write_manifest(const RunContext& ctx);

/// --jobs, overridden by HS_JOBS when set.
unsigned resolve_jobs(unsigned flag);

/// Evenly spaced times 0, t_max / count, ..., t_max.
std::vector<double> default_times(double t_max, int count);

}  // namespace hs::cli
