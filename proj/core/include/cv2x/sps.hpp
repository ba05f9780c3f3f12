#pragma once

#include <deque>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cv2x/channel.hpp"
#include "cv2x/grid.hpp"
#include "cv2x/rng.hpp"

namespace cv2x {

enum class SelectionPolicy { standard, greedy, random_uniform };

std::string to_string(SelectionPolicy policy);
SelectionPolicy selection_policy_from_string(const std::string& name);

std::vector<int> default_t_sps_set_ms();

struct SpsPolicyConfig {
  /// Exponential weighting factor in (0, 1]; 1 reproduces the standardized
  /// linear average. Values below 0.4 are accepted but tend to degrade PRR.
  double alpha = 1.0;
  /// Probability of skipping re-scheduling and keeping the current
  /// subchannel at reservation expiry (a fresh T_SPS is still drawn).
  double p_keep = 0.0;
  double rsrp_threshold_dbm = -128.0;  // initial gamma_RSRP
  double threshold_step_db = 3.0;
  double candidate_floor_fraction = 0.2;   // stage 2 keeps >= this share of |S|
  double selection_pool_fraction = 0.2;    // stage 3 draws from the best 20F
  SelectionPolicy policy = SelectionPolicy::standard;
  std::vector<int> t_sps_set_ms = default_t_sps_set_ms();

  friend bool operator==(const SpsPolicyConfig&, const SpsPolicyConfig&) = default;
};

void validate(const SpsPolicyConfig& cfg, const GridConfig& grid);

/// Ring of the last `window_count` per-window sensed-power snapshots, most
/// recent first. PSSCH-RSRP and RSSI are two named views over the same
/// measurement: transmit power is uniform across a subchannel's RBs here, so
/// their per-RB values coincide (a finer PHY model could diverge them).
class SensingHistory {
 public:
  explicit SensingHistory(int window_count = 10) : window_count_(window_count) {}

  void push(SensedPowerGrid snapshot);

  int size() const { return static_cast<int>(ring_.size()); }
  bool full() const { return size() == window_count_; }
  int window_count() const { return window_count_; }

  /// lag = 1 is the most recent window (n-1), lag = window_count the oldest.
  const SensedPowerGrid& rsrp(int lag) const { return ring_.at(lag - 1); }
  const SensedPowerGrid& rssi(int lag) const { return ring_.at(lag - 1); }

 private:
  int window_count_;
  std::deque<SensedPowerGrid> ring_;
};

struct Reservation {
  SubchannelId subchannel{};
  int windows_remaining = 0;
  int t_sps_ms = 0;

  friend bool operator==(const Reservation&, const Reservation&) = default;
};

/// Weighted average of one subchannel's samples, most recent first:
///   [sum_l alpha^l]^-1 * sum_l alpha^l * x_l,  l = 1..N.
/// Any SATURATED sample saturates the result; averaging must never launder a
/// blocked subchannel into a finite candidate.
double weighted_average(std::span<const double> most_recent_first, double alpha);

/// Element-wise weighted_average over the full history, for both streams.
std::pair<SensedPowerGrid, SensedPowerGrid> average_grids(
    const SensingHistory& history, double alpha);

/// Stage 2: threshold the averaged RSRP at gamma_RSRP, relaxing by
/// threshold_step_db until at least ceil(candidate_floor_fraction * |S|)
/// subchannels qualify. SATURATED entries never qualify; if fewer finite
/// entries than the floor exist, all finite entries are returned.
std::vector<SubchannelId> stage2_candidates(const SensedPowerGrid& avg_rsrp,
                                            const SpsPolicyConfig& cfg,
                                            const GridConfig& grid);

/// Stage 3: rank candidates by ascending averaged RSSI (ties by linear
/// index) and pick uniformly among the best ceil(selection_pool_fraction*|S|).
SubchannelId stage3_select(std::span<const SubchannelId> candidates,
                           const SensedPowerGrid& avg_rssi, const GridConfig& grid,
                           const SpsPolicyConfig& cfg, RngStream& rng);

/// Uniform draw from the configured T_SPS set.
int draw_tsps(const SpsPolicyConfig& cfg, RngStream& rng);

/// Comparison policies: `random_uniform` picks uniformly over every
/// non-SATURATED subchannel of the grid; `greedy` takes the minimum averaged
/// RSSI (ties by linear index).
SubchannelId baseline_select(SelectionPolicy policy, const SensedPowerGrid& avg_rssi,
                             const GridConfig& grid, RngStream& rng);

struct ReselectOutcome {
  Reservation reservation;
  bool kept = false;  // true when the p_keep branch skipped re-scheduling
};

/// Reservation-expiry step: with probability p_keep retain the subchannel,
/// otherwise reselect per the configured policy; either way draw a fresh
/// T_SPS and reset the window counter. Requires a full sensing history.
ReselectOutcome maybe_reselect(const Reservation& expired,
                               const SensingHistory& history,
                               const SpsPolicyConfig& cfg, const GridConfig& grid,
                               RngStream& rng);

}  // namespace cv2x
