#ifndef DEBLUR_TOOLS_COMMANDS_HPP
#define DEBLUR_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>

namespace deblur::cli {

// Exit codes, partitioned by failure class for scriptability:
//   2 invalid flags / contract violations
//   3 file I/O failures
//   4 solver failures (not bracketed, not converged, singular)
//   5 dense-SVD guard exceeded
//   6 hierarchy errors (too deep, not separable)
inline constexpr int kExitFlags = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitSolver = 4;
inline constexpr int kExitGuard = 5;
inline constexpr int kExitHierarchy = 6;

struct SimulateArgs {
  long size = 64;
  std::string scene = "H";
  double s = 2.0;
  int half_width = -1;  // < 0: ceil(4s)
  std::string bc = "zero";
  std::string noise = "gaussian:0.001";
  std::uint64_t seed = 7;
  std::string out;
};

struct DeblurArgs {
  std::string scene_dir;
  std::string method = "tikhonov";
  std::string select;
  double tau = 1.0;
  int grid_points = 50;
  std::string out;  // defaults to scene_dir
};

struct AnalyzeArgs {
  std::string scene_dir;
  int grid_points = 50;
  std::string out;  // defaults to scene_dir
};

struct MultilevelArgs {
  std::string scene_dir;
  long levels = 1;
  std::string method = "tikhonov";
  std::string select = "discrepancy:auto";
  double tau = 1.0;
  std::string out;  // defaults to scene_dir
};

struct ReproArgs {
  std::string out;
  std::uint64_t seed = 7;
};

int run_simulate(const SimulateArgs& args);
int run_deblur(const DeblurArgs& args);
int run_analyze(const AnalyzeArgs& args);
int run_multilevel(const MultilevelArgs& args);
int run_repro_figures(const ReproArgs& args);

} // namespace deblur::cli

#endif
