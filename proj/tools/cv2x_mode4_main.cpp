// Command-line front end: single runs, multi-seed sweeps and config
// validation for the mode-4 sidelink simulator.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cv2x/config.hpp"
#include "cv2x/engine.hpp"
#include "cv2x/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

std::vector<cv2x::SelectionPolicy> parse_policies(const std::vector<std::string>& names) {
  std::vector<cv2x::SelectionPolicy> out;
  for (const std::string& name : names)
    out.push_back(cv2x::selection_policy_from_string(name));
  return out;
}

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
  // CV2X_MODE4_OUT_DIR overrides the --out flag when set
  if (const char* env = std::getenv("CV2X_MODE4_OUT_DIR"); env && *env) return env;
  return flag_value;
}

void write_or_print(const std::filesystem::path& out_dir, const std::string& stem,
                    const cv2x::SimulationReport& report, bool csv, bool json) {
  if (out_dir.empty()) {
    std::cout << (json ? cv2x::serialize_json(report) : cv2x::serialize_csv(report));
    return;
  }
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& ext, const std::string& content) {
    const std::filesystem::path path = out_dir / (stem + ext);
    const std::filesystem::path tmp = path.string() + ".tmp";
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f || !(f << content).flush())
      throw std::runtime_error("cannot write " + path.string());
    f.close();
    std::filesystem::rename(tmp, path);
    std::cout << "wrote " << path.string() << "\n";
  };
  if (csv) write(".csv", cv2x::serialize_csv(report));
  if (json) write(".json", cv2x::serialize_json(report));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C-V2X mode-4 sidelink scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::string format = "csv";
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "simulation config file")
        ->required();
  };

  CLI::App* cmd_run = app.add_subcommand("run", "run one simulation");
  add_common(cmd_run);
  std::uint64_t run_seed = 0;
  bool run_seed_set = false;
  cmd_run->add_option("-s,--seed", run_seed, "override the config seed")
      ->each([&](const std::string&) { run_seed_set = true; });
  cmd_run->add_option("-o,--out", out_flag,
                      "output directory (omit to print to stdout)");
  cmd_run->add_option("-f,--format", format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run an axis/seed sweep");
  add_common(cmd_sweep);
  std::vector<std::uint64_t> seeds;
  std::uint64_t seed_count = 0;
  std::vector<double> alpha_axis;
  std::vector<double> p_keep_axis;
  std::vector<std::string> policy_axis;
  cmd_sweep->add_option("-s,--seeds", seeds, "explicit seed list");
  cmd_sweep->add_option("-n,--seed-count", seed_count, "use seeds 1..N");
  cmd_sweep->add_option("-o,--out", out_flag, "output directory")->required();
  cmd_sweep->add_option("-f,--format", format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  cmd_sweep->add_option("--alpha", alpha_axis, "alpha axis values");
  cmd_sweep->add_option("--p-keep", p_keep_axis, "p_keep axis values");
  cmd_sweep->add_option("--policy", policy_axis, "policy axis values")
      ->check(CLI::IsMember({"standard", "greedy", "random"}));

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "check a config and print its canonical form");
  add_common(cmd_validate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      try {
        const cv2x::SimConfig cfg = cv2x::parse_config_file(config_path);
        std::cout << cv2x::echo_config(cfg);
        return kExitOk;
      } catch (const cv2x::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
      }
    }

    if (cmd_run->parsed()) {
      cv2x::SimConfig cfg;
      try {
        cfg = cv2x::parse_config_file(config_path);
      } catch (const cv2x::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
      }
      if (run_seed_set) cfg.seed = run_seed;
      const cv2x::SimulationReport report = cv2x::run(cfg);
      const std::string stem = cv2x::run_file_stem(cfg.sps.policy, cfg.sps.alpha,
                                                   cfg.sps.p_keep, cfg.seed);
      write_or_print(resolve_out_dir(out_flag), stem, report,
                     format == "csv" || format == "both",
                     format == "json" || format == "both");
      return kExitOk;
    }

    // sweep
    cv2x::RunSpec spec;
    spec.config_path = config_path;
    spec.out_dir = resolve_out_dir(out_flag);
    spec.write_csv = format == "csv" || format == "both";
    spec.write_json = format == "json" || format == "both";
    if (!seeds.empty() && seed_count != 0) {
      std::cerr << "config error: give either --seeds or --seed-count, not both\n";
      return kExitConfigError;
    }
    if (seed_count != 0) {
      spec.seeds.clear();
      for (std::uint64_t s = 1; s <= seed_count; ++s) spec.seeds.push_back(s);
    } else if (!seeds.empty()) {
      spec.seeds = seeds;
    }
    spec.alpha_axis = alpha_axis;
    spec.p_keep_axis = p_keep_axis;
    try {
      spec.policy_axis = parse_policies(policy_axis);
    } catch (const std::invalid_argument& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfigError;
    }
    try {
      return cv2x::run_sweep(spec) == 0 ? kExitOk : kExitRuntimeError;
    } catch (const cv2x::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfigError;
    }
  } catch (const cv2x::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}
