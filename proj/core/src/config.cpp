#include "cv2x/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace cv2x {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_double_list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ',';
    out += format_double(vs[i]);
  }
  return out;
}

std::string format_int_list(const std::vector<int>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(vs[i]);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

class Parser {
 public:
  Parser(std::string_view text, const std::string& source) : source_(source) {
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;
      if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos)
        fail(line_no, "expected 'key = value', got '" + std::string(line) + "'");
      const std::string key{trim(line.substr(0, eq))};
      const std::string value{trim(line.substr(eq + 1))};
      if (key.empty()) fail(line_no, "empty key");
      if (entries_.count(key))
        fail(line_no, "duplicate key '" + key + "'");
      entries_[key] = {value, line_no};
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string take_string(const std::string& key, const std::string& fallback) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    return it->second.value;
  }

  double take_double(const std::string& key, double fallback) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    return parse_double(it->second.value, key, it->second.line);
  }

  std::int64_t take_int(const std::string& key, std::int64_t fallback) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    return parse_int(it->second.value, key, it->second.line);
  }

  bool take_bool(const std::string& key, bool fallback) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    if (it->second.value == "true") return true;
    if (it->second.value == "false") return false;
    fail(it->second.line, "key '" + key + "': expected true or false");
  }

  std::vector<double> take_double_list(const std::string& key,
                                       std::vector<double> fallback) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    std::vector<double> out;
    for (const std::string& field : split(it->second.value))
      out.push_back(parse_double(field, key, it->second.line));
    return out;
  }

  std::vector<int> take_int_list(const std::string& key, std::vector<int> fallback) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    std::vector<int> out;
    for (const std::string& field : split(it->second.value))
      out.push_back(static_cast<int>(parse_int(field, key, it->second.line)));
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_) {
      if (!consumed_.count(key))
        fail(entry.line, "unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + what);
  }

 private:
  struct Entry {
    std::string value;
    int line;
  };

  static std::vector<std::string> split(const std::string& value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = value.find(',', start);
      out.emplace_back(trim(value.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

  double parse_double(const std::string& field, const std::string& key, int line) {
    double out = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      fail(line, "key '" + key + "': not a number: '" + field + "'");
    return out;
  }

  std::int64_t parse_int(const std::string& field, const std::string& key, int line) {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      fail(line, "key '" + key + "': not an integer: '" + field + "'");
    return out;
  }

  std::string source_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> consumed_;
};

}  // namespace

SimConfig parse_config_text(std::string_view text, const std::string& source) {
  Parser p(text, source);
  SimConfig cfg;

  cfg.grid.sub_bands = static_cast<int>(p.take_int("f", cfg.grid.sub_bands));
  cfg.grid.rbs_per_subchannel =
      static_cast<int>(p.take_int("rbs_per_subchannel", cfg.grid.rbs_per_subchannel));
  cfg.grid.window_ms = static_cast<int>(p.take_int("window_ms", cfg.grid.window_ms));
  cfg.grid.subframes_per_window = cfg.grid.window_ms;  // 1 ms subframes

  ChannelConfig& ch = cfg.channel;
  ch.carrier_frequency_hz = p.take_double("carrier_frequency_hz", ch.carrier_frequency_hz);
  ch.tx_power_per_rb_mw = p.take_double("tx_power_per_rb_mw", ch.tx_power_per_rb_mw);
  ch.antenna_gain_tx_db = p.take_double("antenna_gain_tx_db", ch.antenna_gain_tx_db);
  ch.antenna_gain_rx_db = p.take_double("antenna_gain_rx_db", ch.antenna_gain_rx_db);
  ch.shadow_sigma_db = p.take_double("shadow_sigma_db", ch.shadow_sigma_db);
  ch.shadow_corr_distance_m =
      p.take_double("shadow_corr_distance_m", ch.shadow_corr_distance_m);
  ch.noise_floor_dbm_per_rb =
      p.take_double("noise_floor_dbm_per_rb", ch.noise_floor_dbm_per_rb);
  if (p.has("ibe_vector")) {
    ch.ibe_vector = p.take_double_list("ibe_vector", ch.ibe_vector);
  } else {
    ch.ibe_vector = default_ibe_vector(cfg.grid.sub_bands);
  }
  ch.antenna_height_tx_m = p.take_double("antenna_height_tx_m", ch.antenna_height_tx_m);
  ch.antenna_height_rx_m = p.take_double("antenna_height_rx_m", ch.antenna_height_rx_m);

  SpsPolicyConfig& sps = cfg.sps;
  sps.alpha = p.take_double("alpha", sps.alpha);
  sps.p_keep = p.take_double("p_keep", sps.p_keep);
  sps.rsrp_threshold_dbm = p.take_double("gamma_rsrp_dbm", sps.rsrp_threshold_dbm);
  sps.threshold_step_db = p.take_double("threshold_step_db", sps.threshold_step_db);
  sps.candidate_floor_fraction =
      p.take_double("candidate_floor_fraction", sps.candidate_floor_fraction);
  sps.selection_pool_fraction =
      p.take_double("selection_pool_fraction", sps.selection_pool_fraction);
  const std::string policy = p.take_string("policy", to_string(sps.policy));
  try {
    sps.policy = selection_policy_from_string(policy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  sps.t_sps_set_ms = p.take_int_list("t_sps_set", sps.t_sps_set_ms);

  const std::string scenario = p.take_string("scenario", "freeway");
  if (scenario == "trace") {
    const std::string path = p.take_string("trace_path", "");
    if (path.empty())
      throw ConfigError(source + ": scenario=trace requires trace_path");
    cfg.trace_path = path;
  } else if (scenario != "freeway") {
    throw ConfigError(source + ": unknown scenario '" + scenario +
                      "' (expected freeway or trace)");
  } else if (p.has("trace_path")) {
    throw ConfigError(source + ": trace_path is only valid with scenario=trace");
  }

  FreewayConfig& fw = cfg.freeway;
  fw.lanes_per_direction =
      static_cast<int>(p.take_int("lanes_per_direction", fw.lanes_per_direction));
  fw.lane_width_m = p.take_double("lane_width_m", fw.lane_width_m);
  fw.median_width_m = p.take_double("median_width_m", fw.median_width_m);
  fw.road_length_m = p.take_double("road_length_m", fw.road_length_m);
  fw.density_per_km = p.take_double("density_per_km", fw.density_per_km);
  fw.speed_min_kmh = p.take_double("speed_min_kmh", fw.speed_min_kmh);
  fw.speed_max_kmh = p.take_double("speed_max_kmh", fw.speed_max_kmh);
  fw.wraparound = p.take_bool("wraparound", fw.wraparound);

  cfg.duration_ms = p.take_int("duration_ms", cfg.duration_ms);
  cfg.warmup_ms = p.take_int("warmup_ms", cfg.warmup_ms);
  cfg.seed = static_cast<std::uint64_t>(p.take_int("seed", static_cast<std::int64_t>(cfg.seed)));
  cfg.awareness_distances_m =
      p.take_double_list("awareness_distances_m", cfg.awareness_distances_m);
  cfg.rho_bps_hz = p.take_double("rho_bps_hz", cfg.rho_bps_hz);
  cfg.lambda = p.take_double("lambda", cfg.lambda);
  cfg.cam_size_bytes = static_cast<int>(p.take_int("cam_size_bytes", cfg.cam_size_bytes));

  p.reject_unknown();
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

SimConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string echo_config(const SimConfig& cfg) {
  std::ostringstream out;
  out << "# grid\n";
  out << "f = " << cfg.grid.sub_bands << "\n";
  out << "rbs_per_subchannel = " << cfg.grid.rbs_per_subchannel << "\n";
  out << "window_ms = " << cfg.grid.window_ms << "\n";
  out << "# channel\n";
  out << "carrier_frequency_hz = " << format_double(cfg.channel.carrier_frequency_hz) << "\n";
  out << "tx_power_per_rb_mw = " << format_double(cfg.channel.tx_power_per_rb_mw) << "\n";
  out << "antenna_gain_tx_db = " << format_double(cfg.channel.antenna_gain_tx_db) << "\n";
  out << "antenna_gain_rx_db = " << format_double(cfg.channel.antenna_gain_rx_db) << "\n";
  out << "shadow_sigma_db = " << format_double(cfg.channel.shadow_sigma_db) << "\n";
  out << "shadow_corr_distance_m = " << format_double(cfg.channel.shadow_corr_distance_m)
      << "\n";
  out << "noise_floor_dbm_per_rb = " << format_double(cfg.channel.noise_floor_dbm_per_rb)
      << "\n";
  out << "ibe_vector = " << format_double_list(cfg.channel.ibe_vector) << "\n";
  out << "antenna_height_tx_m = " << format_double(cfg.channel.antenna_height_tx_m) << "\n";
  out << "antenna_height_rx_m = " << format_double(cfg.channel.antenna_height_rx_m) << "\n";
  out << "# sps\n";
  out << "alpha = " << format_double(cfg.sps.alpha) << "\n";
  out << "p_keep = " << format_double(cfg.sps.p_keep) << "\n";
  out << "gamma_rsrp_dbm = " << format_double(cfg.sps.rsrp_threshold_dbm) << "\n";
  out << "threshold_step_db = " << format_double(cfg.sps.threshold_step_db) << "\n";
  out << "candidate_floor_fraction = " << format_double(cfg.sps.candidate_floor_fraction)
      << "\n";
  out << "selection_pool_fraction = " << format_double(cfg.sps.selection_pool_fraction)
      << "\n";
  out << "policy = " << to_string(cfg.sps.policy) << "\n";
  out << "t_sps_set = " << format_int_list(cfg.sps.t_sps_set_ms) << "\n";
  out << "# scenario\n";
  out << "scenario = " << (cfg.trace_path ? "trace" : "freeway") << "\n";
  if (cfg.trace_path) out << "trace_path = " << *cfg.trace_path << "\n";
  out << "lanes_per_direction = " << cfg.freeway.lanes_per_direction << "\n";
  out << "lane_width_m = " << format_double(cfg.freeway.lane_width_m) << "\n";
  out << "median_width_m = " << format_double(cfg.freeway.median_width_m) << "\n";
  out << "road_length_m = " << format_double(cfg.freeway.road_length_m) << "\n";
  out << "density_per_km = " << format_double(cfg.freeway.density_per_km) << "\n";
  out << "speed_min_kmh = " << format_double(cfg.freeway.speed_min_kmh) << "\n";
  out << "speed_max_kmh = " << format_double(cfg.freeway.speed_max_kmh) << "\n";
  out << "wraparound = " << (cfg.freeway.wraparound ? "true" : "false") << "\n";
  out << "# run\n";
  out << "duration_ms = " << cfg.duration_ms << "\n";
  out << "warmup_ms = " << cfg.warmup_ms << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "awareness_distances_m = " << format_double_list(cfg.awareness_distances_m)
      << "\n";
  out << "rho_bps_hz = " << format_double(cfg.rho_bps_hz) << "\n";
  out << "lambda = " << format_double(cfg.lambda) << "\n";
  out << "cam_size_bytes = " << cfg.cam_size_bytes << "\n";
  return out.str();
}

}  // namespace cv2x
