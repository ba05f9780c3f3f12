#include "cv2x/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

namespace cv2x {

void validate(const FreewayConfig& cfg) {
  if (cfg.lanes_per_direction < 1)
    throw std::invalid_argument("lanes_per_direction must be >= 1");
  if (!(cfg.lane_width_m > 0))
    throw std::invalid_argument("lane_width_m must be > 0");
  if (!(cfg.median_width_m >= 0))
    throw std::invalid_argument("median_width_m must be >= 0");
  if (!(cfg.road_length_m >= 0))
    throw std::invalid_argument("road_length_m must be >= 0");
  if (!(cfg.density_per_km > 0))
    throw std::invalid_argument("density_per_km must be > 0");
  if (!(cfg.speed_min_kmh > 0) || cfg.speed_max_kmh < cfg.speed_min_kmh)
    throw std::invalid_argument("speed range must satisfy 0 < min <= max");
}

double lane_center_y(const FreewayConfig& cfg, int lane) {
  const bool forward = lane < cfg.lanes_per_direction;
  const int offset = forward ? lane : lane - cfg.lanes_per_direction;
  const double y = cfg.median_width_m / 2.0 + (offset + 0.5) * cfg.lane_width_m;
  return forward ? y : -y;
}

std::vector<Vehicle> generate_freeway(const FreewayConfig& cfg, RngStream& rng) {
  validate(cfg);
  std::vector<Vehicle> vehicles;
  const double rate_per_m = cfg.density_per_km / 1000.0 / cfg.lane_count();
  int next_id = 0;
  for (int lane = 0; lane < cfg.lane_count(); ++lane) {
    const bool forward = lane < cfg.lanes_per_direction;
    double x = rng.next_exponential(rate_per_m);
    while (x < cfg.road_length_m) {
      const double speed = cfg.speed_min_mps() +
                           rng.next_double() * (cfg.speed_max_mps() - cfg.speed_min_mps());
      vehicles.push_back(Vehicle{next_id++,
                                 Position{x, lane_center_y(cfg, lane)},
                                 lane,
                                 forward ? speed : -speed});
      x += rng.next_exponential(rate_per_m);
    }
  }
  return vehicles;
}

void advance(std::vector<Vehicle>& vehicles, double dt_s, const FreewayConfig& cfg) {
  if (dt_s < 0) throw std::invalid_argument("dt must be >= 0");
  for (Vehicle& v : vehicles) v.position.x_m += v.speed_mps * dt_s;
  if (cfg.wraparound) {
    for (Vehicle& v : vehicles) {
      v.position.x_m = std::fmod(v.position.x_m, cfg.road_length_m);
      if (v.position.x_m < 0) v.position.x_m += cfg.road_length_m;
    }
  } else {
    std::erase_if(vehicles, [&](const Vehicle& v) {
      return v.position.x_m < 0 || v.position.x_m > cfg.road_length_m;
    });
  }
}

const std::vector<Vehicle>* Trace::frame(std::int64_t t_ms) const {
  const auto it = frames_.find(t_ms);
  return it == frames_.end() ? nullptr : &it->second;
}

std::int64_t Trace::first_t_ms() const { return frames_.begin()->first; }
std::int64_t Trace::last_t_ms() const { return frames_.rbegin()->first; }

namespace {

[[noreturn]] void trace_fail(const std::string& source, int row, const std::string& what) {
  throw TraceError(source + ": row " + std::to_string(row) + ": " + what);
}

double parse_double_field(const std::string& source, int row, const std::string& field,
                          const std::string& name) {
  double out = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    trace_fail(source, row, "column '" + name + "' is not a number: '" + field + "'");
  return out;
}

std::int64_t parse_int_field(const std::string& source, int row, const std::string& field,
                             const std::string& name) {
  std::int64_t out = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    trace_fail(source, row, "column '" + name + "' is not an integer: '" + field + "'");
  return out;
}

}  // namespace

Trace parse_trace(const std::string& text, int window_ms, const std::string& source) {
  static constexpr const char* kHeader = "t_ms,vehicle_id,x_m,y_m,speed_mps";
  static constexpr const char* kColumns[] = {"t_ms", "vehicle_id", "x_m", "y_m",
                                             "speed_mps"};
  Trace trace;
  std::istringstream in(text);
  std::string line;
  int row = 0;
  std::int64_t prev_t = -1;
  int prev_id = -1;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r')
      trace_fail(source, row, "CRLF line ending (trace must use LF)");
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kHeader)
        trace_fail(source, row, "expected header '" + std::string(kHeader) + "'");
      saw_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5) {
      if (fields.size() < 5)
        trace_fail(source, row,
                   "missing column '" + std::string(kColumns[fields.size()]) + "'");
      trace_fail(source, row, "expected 5 columns, got " + std::to_string(fields.size()));
    }
    const std::int64_t t = parse_int_field(source, row, fields[0], "t_ms");
    const std::int64_t id = parse_int_field(source, row, fields[1], "vehicle_id");
    const double x = parse_double_field(source, row, fields[2], "x_m");
    const double y = parse_double_field(source, row, fields[3], "y_m");
    const double speed = parse_double_field(source, row, fields[4], "speed_mps");
    if (t < 0 || t % window_ms != 0)
      trace_fail(source, row,
                 "t_ms " + std::to_string(t) + " is not a non-negative multiple of " +
                     std::to_string(window_ms));
    if (t < prev_t) trace_fail(source, row, "t_ms decreases (rows must be sorted)");
    if (t == prev_t) {
      if (id == prev_id)
        trace_fail(source, row,
                   "duplicate (t_ms, vehicle_id) = (" + std::to_string(t) + ", " +
                       std::to_string(id) + ")");
      if (id < prev_id)
        trace_fail(source, row, "vehicle_id decreases within t_ms block");
    }
    prev_t = t;
    prev_id = static_cast<int>(id);
    trace.frames_[t].push_back(
        Vehicle{static_cast<int>(id), Position{x, y}, 0, speed});
  }
  return trace;
}

Trace load_trace(const std::filesystem::path& path, int window_ms) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open trace file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str(), window_ms, path.string());
}

}  // namespace cv2x
