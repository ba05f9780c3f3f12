#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cv2x/channel.hpp"
#include "cv2x/rng.hpp"

namespace cv2x {

struct Vehicle {
  int id = 0;
  Position position{};
  int lane = 0;          // 0..L-1 forward direction, L..2L-1 reverse
  double speed_mps = 0;  // signed by travel direction

  friend bool operator==(const Vehicle&, const Vehicle&) = default;
};

struct FreewayConfig {
  int lanes_per_direction = 3;
  double lane_width_m = 3.5;
  double median_width_m = 4.0;
  double road_length_m = 1500.0;
  double density_per_km = 100.0;  // across all lanes
  /// Speeds are stored in km/h (the unit the knobs are written in) so config
  /// echo round-trips exactly; accessors convert.
  double speed_min_kmh = 100.0;
  double speed_max_kmh = 140.0;
  bool wraparound = true;

  double speed_min_mps() const { return speed_min_kmh / 3.6; }
  double speed_max_mps() const { return speed_max_kmh / 3.6; }
  int lane_count() const { return 2 * lanes_per_direction; }

  friend bool operator==(const FreewayConfig&, const FreewayConfig&) = default;
};

void validate(const FreewayConfig& cfg);

/// Lane centerline y coordinate; forward-direction lanes sit above the
/// median, reverse lanes below.
double lane_center_y(const FreewayConfig& cfg, int lane);

/// Per-lane 1-D Poisson point process with rate density_per_km / lane_count,
/// speeds uniform in [speed_min, speed_max] signed by direction.
std::vector<Vehicle> generate_freeway(const FreewayConfig& cfg, RngStream& rng);

/// Advances positions by speed * dt. Wraparound folds x modulo road length;
/// otherwise vehicles leaving the segment are removed.
void advance(std::vector<Vehicle>& vehicles, double dt_s, const FreewayConfig& cfg);

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time-indexed vehicle positions loaded from CSV
/// (`t_ms,vehicle_id,x_m,y_m,speed_mps`). Vehicles may appear and disappear
/// over time; playback is deterministic.
class Trace {
 public:
  /// Frame at time t, or nullptr when the trace has no row for t.
  const std::vector<Vehicle>* frame(std::int64_t t_ms) const;

  std::int64_t first_t_ms() const;
  std::int64_t last_t_ms() const;
  bool empty() const { return frames_.empty(); }

  friend Trace load_trace(const std::filesystem::path& path, int window_ms);
  friend Trace parse_trace(const std::string& text, int window_ms,
                           const std::string& source_name);

 private:
  std::map<std::int64_t, std::vector<Vehicle>> frames_;
};

/// Parses and validates a trace file. Malformed rows, non-monotonic
/// timestamps, duplicate (t, id) pairs and timestamps that are not multiples
/// of window_ms are rejected with row-numbered diagnostics.
Trace load_trace(const std::filesystem::path& path, int window_ms);
Trace parse_trace(const std::string& text, int window_ms,
                  const std::string& source_name = "<trace>");

}  // namespace cv2x
