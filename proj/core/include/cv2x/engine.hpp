#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cv2x/channel.hpp"
#include "cv2x/grid.hpp"
#include "cv2x/metrics.hpp"
#include "cv2x/mobility.hpp"
#include "cv2x/sps.hpp"

namespace cv2x {

struct SimConfig {
  GridConfig grid;
  ChannelConfig channel;
  SpsPolicyConfig sps;
  FreewayConfig freeway;
  /// When set, positions are replayed from this trace instead of the
  /// generated freeway.
  std::optional<std::string> trace_path;
  std::int64_t duration_ms = 21000;
  std::int64_t warmup_ms = 1000;
  std::uint64_t seed = 1;
  std::vector<double> awareness_distances_m{50, 100, 150, 200, 250, 300};
  double rho_bps_hz = 0.9402;  // effective coded throughput
  double lambda = 0.6;         // throughput loss coefficient
  int cam_size_bytes = 190;    // CAM payload context (one CAM per subchannel)

  double decode_threshold() const {
    return decode_threshold_db(rho_bps_hz, lambda);
  }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

void validate(const SimConfig& cfg);

/// Per-vehicle simulation state: one reservation each (retransmissions are
/// disabled), the rolling sensing history, and the subframes this vehicle
/// transmitted in during the history span.
struct VehicleRuntime {
  Vehicle vehicle;
  Reservation reservation;
  SensingHistory history;
  std::deque<int> recent_tx_subframes;
};

struct ShadowEntry {
  LinkShadowState state;
  std::int64_t window = -1;  // last window this pair's value was advanced
};

struct WorldState {
  std::vector<VehicleRuntime> vehicles;  // sorted by vehicle id
  std::unordered_map<std::uint64_t, ShadowEntry> shadow_states;  // unordered pair
  std::int64_t window = 0;
  Trace trace;
  bool use_trace = false;
};

/// Observation points for tests and instrumentation. All optional.
struct EngineHooks {
  /// Every reception event from measurement windows.
  std::function<void(const ReceptionEvent&)> on_event;
  /// Each vehicle's transmission, once per window.
  std::function<void(int vehicle_id, std::int64_t window, SubchannelId)> on_transmit;
  /// A reservation was installed at expiry. `blocked_subframes` flags (1-based)
  /// the subframes the vehicle transmitted in during its available history;
  /// `kept` marks the p_keep branch, `warmed` is false for the uniform redraw
  /// used before the history is full.
  std::function<void(int vehicle_id, std::int64_t window, const Reservation&,
                     const std::vector<char>& blocked_subframes, bool kept,
                     bool warmed)>
      on_reselect;
  /// Overrides the initial reservation of a vehicle (testing aid).
  std::function<std::optional<Reservation>(int vehicle_id)> initial_reservation;
};

WorldState init_world(const SimConfig& cfg, const EngineHooks& hooks = {});

/// Advances one full window: per subframe, every reserved vehicle transmits,
/// every other vehicle senses, and a reception event is evaluated for every
/// transmitter-receiver pair within the largest awareness distance
/// (half-duplex-blocked pairs included, as losses). At window end snapshots
/// are pushed, counters decremented, expired reservations reselected, and
/// mobility advanced. Returns the window's events.
std::vector<ReceptionEvent> step_window(WorldState& state, const SimConfig& cfg,
                                        const EngineHooks& hooks = {});

/// Runs warmup plus measurement windows and aggregates the measurement
/// events. Identical (config, seed) produce bit-identical reports.
SimulationReport run(const SimConfig& cfg, const EngineHooks& hooks = {});

}  // namespace cv2x
