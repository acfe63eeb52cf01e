#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hs::cli {

struct SolverFlags {
  double tol = 1e-10;
  double stefan_omega = 1.9;
  std::size_t max_iters = 0;
  double obstacle_omega = 1.8;
  std::size_t max_sweeps = 0;
  double activation_rel = 1e-8;
};

struct StefanArgs {
  std::string scenario;
  double m = 1024;
  std::optional<double> dt;
  std::vector<double> snapshots;
  std::string out;
  unsigned jobs = 1;
  SolverFlags solver;
};

struct MesaArgs {
  std::string scenario;
  std::vector<double> m_list;
  std::optional<double> dt;
  std::vector<double> snapshots;
  std::string out;
  unsigned jobs = 1;
  SolverFlags solver;
};

struct ObstacleArgs {
  std::string scenario;
  std::vector<double> times;
  std::string out;
  unsigned jobs = 1;
  SolverFlags solver;
};

struct CompareArgs {
  std::string scenario;
  std::vector<double> m_list;
  std::optional<double> dt;
  std::vector<double> times;
  std::string out;
  unsigned jobs = 1;
  SolverFlags solver;
};

struct BarrierArgs {
  int n = 2;
  double k = 1.0;
  double eps = 0.01;
  double alpha = 1.0;
  double beta = 0.5;
  int samples = 101;
  std::string out;
};

struct DiagnoseArgs {
  std::string run_dir;
  std::string points;
  std::vector<double> radii;
  double delta_reg = 0.1;
  std::string out;
};

void cmd_stefan(const StefanArgs& a);
void cmd_mesa(const MesaArgs& a);
void cmd_obstacle(const ObstacleArgs& a);
void cmd_compare(const CompareArgs& a);
void cmd_barriers(const BarrierArgs& a);
void cmd_diagnose(const DiagnoseArgs& a);

}  // namespace hs::cli
