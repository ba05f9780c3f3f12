#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cv2x/engine.hpp"

namespace cv2x {

/// One sweep request: axis points are the cartesian product of the given
/// lists (empty list = the config file's value), each run once per seed.
struct RunSpec {
  std::filesystem::path config_path;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path out_dir;
  bool write_csv = true;
  bool write_json = false;
  std::vector<double> alpha_axis;
  std::vector<double> p_keep_axis;
  std::vector<SelectionPolicy> policy_axis;
};

/// File stem encoding one run's axis values and seed,
/// e.g. "run_standard_alpha-0.4_pkeep-0_seed-7".
std::string run_file_stem(SelectionPolicy policy, double alpha, double p_keep,
                          std::uint64_t seed);

/// Executes every (axis point x seed) run, writing per-run reports plus a
/// merged summary (mean and sample stddev of PRR per distance across seeds).
/// Failed runs are reported and skipped; returns the number of failures.
/// Output files are written atomically (temp + rename).
int run_sweep(const RunSpec& spec);

}  // namespace cv2x
