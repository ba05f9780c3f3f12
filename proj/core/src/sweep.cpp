#include "cv2x/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cv2x/config.hpp"

namespace cv2x {

namespace {

std::string short_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

struct AxisPoint {
  SelectionPolicy policy;
  double alpha;
  double p_keep;

  auto key() const { return std::tuple(to_string(policy), alpha, p_keep); }
};

struct PrrSamples {
  std::vector<double> disk;  // one PRR per seed, empty bins skipped
  std::vector<double> ring;
};

double mean(const std::vector<double>& xs) {
  double sum = 0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  const double m = mean(xs);
  double acc = 0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

std::string pct4(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", 100.0 * fraction);
  return buf;
}

}  // namespace

std::string run_file_stem(SelectionPolicy policy, double alpha, double p_keep,
                          std::uint64_t seed) {
  return "run_" + to_string(policy) + "_alpha-" + short_double(alpha) + "_pkeep-" +
         short_double(p_keep) + "_seed-" + std::to_string(seed);
}

int run_sweep(const RunSpec& spec) {
  const SimConfig base = parse_config_file(spec.config_path);
  if (spec.seeds.empty()) throw ConfigError("sweep needs at least one seed");
  if (spec.out_dir.empty()) throw ConfigError("sweep needs an output directory");
  std::filesystem::create_directories(spec.out_dir);

  const std::vector<SelectionPolicy> policies =
      spec.policy_axis.empty() ? std::vector{base.sps.policy} : spec.policy_axis;
  const std::vector<double> alphas =
      spec.alpha_axis.empty() ? std::vector{base.sps.alpha} : spec.alpha_axis;
  const std::vector<double> p_keeps =
      spec.p_keep_axis.empty() ? std::vector{base.sps.p_keep} : spec.p_keep_axis;

  // per (axis point, d_x, variant): PRR samples across seeds
  std::map<std::tuple<std::string, double, double>,
           std::map<double, PrrSamples>>
      summary;
  std::vector<AxisPoint> points;
  for (SelectionPolicy policy : policies)
    for (double alpha : alphas)
      for (double p_keep : p_keeps) points.push_back({policy, alpha, p_keep});

  int failures = 0;
  for (const AxisPoint& point : points) {
    for (std::uint64_t seed : spec.seeds) {
      const std::string stem = run_file_stem(point.policy, point.alpha, point.p_keep, seed);
      try {
        SimConfig cfg = base;
        cfg.sps.policy = point.policy;
        cfg.sps.alpha = point.alpha;
        cfg.sps.p_keep = point.p_keep;
        cfg.seed = seed;
        const SimulationReport report = run(cfg);
        if (spec.write_csv)
          write_file_atomic(spec.out_dir / (stem + ".csv"), serialize_csv(report));
        if (spec.write_json)
          write_file_atomic(spec.out_dir / (stem + ".json"), serialize_json(report));
        for (const DistanceBin& bin : report.table) {
          PrrSamples& samples = summary[point.key()][bin.d_x_m];
          if (bin.disk.total() > 0)
            samples.disk.push_back(static_cast<double>(bin.disk.decoded) /
                                   static_cast<double>(bin.disk.total()));
          if (bin.ring.total() > 0)
            samples.ring.push_back(static_cast<double>(bin.ring.decoded) /
                                   static_cast<double>(bin.ring.total()));
        }
        std::cout << stem << ": ok\n";
      } catch (const std::exception& e) {
        ++failures;
        std::cerr << stem << ": FAILED: " << e.what() << "\n";
      }
    }
  }

  std::string csv =
      "policy,alpha,p_keep,d_x_m,variant,seeds,prr_mean_pct,prr_stddev_pct\n";
  nlohmann::json jrows = nlohmann::json::array();
  for (const AxisPoint& point : points) {
    const auto it = summary.find(point.key());
    if (it == summary.end()) continue;
    for (const auto& [d_x, samples] : it->second) {
      for (const char* variant : {"disk", "ring"}) {
        const std::vector<double>& xs =
            std::string_view(variant) == "disk" ? samples.disk : samples.ring;
        std::string row = to_string(point.policy) + "," + short_double(point.alpha) +
                          "," + short_double(point.p_keep) + "," + short_double(d_x) +
                          "," + variant + "," + std::to_string(xs.size());
        nlohmann::json jrow{{"policy", to_string(point.policy)},
                            {"alpha", point.alpha},
                            {"p_keep", point.p_keep},
                            {"d_x_m", d_x},
                            {"variant", variant},
                            {"seeds", xs.size()}};
        if (xs.empty()) {
          row += ",,";
          jrow["prr_mean_pct"] = nullptr;
          jrow["prr_stddev_pct"] = nullptr;
        } else {
          row += "," + pct4(mean(xs));
          jrow["prr_mean_pct"] = 100.0 * mean(xs);
          if (xs.size() > 1) {
            row += "," + pct4(sample_stddev(xs));
            jrow["prr_stddev_pct"] = 100.0 * sample_stddev(xs);
          } else {
            row += ",";
            jrow["prr_stddev_pct"] = nullptr;
          }
        }
        csv += row + "\n";
        jrows.push_back(std::move(jrow));
      }
    }
  }
  if (spec.write_csv) write_file_atomic(spec.out_dir / "summary.csv", csv);
  if (spec.write_json)
    write_file_atomic(spec.out_dir / "summary.json",
                      nlohmann::json{{"rows", jrows}}.dump(2) + "\n");
  return failures;
}

}  // namespace cv2x
