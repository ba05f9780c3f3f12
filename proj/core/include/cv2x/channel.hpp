#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cv2x/grid.hpp"
#include "cv2x/rng.hpp"
#include "cv2x/units.hpp"

namespace cv2x {

struct ChannelConfig {
  double carrier_frequency_hz = 5.9e9;
  double tx_power_per_rb_mw = 6.67;  // P_T, identical for all vehicles
  double antenna_gain_tx_db = 3.0;
  double antenna_gain_rx_db = 3.0;
  double shadow_sigma_db = 7.0;
  double shadow_corr_distance_m = 10.0;
  /// Normalized noise floor per RB. Stored in dBm so config echo round-trips
  /// exactly; -112.45 dBm = thermal -174 dBm/Hz + 10*log10(180 kHz) + 9 dB NF.
  double noise_floor_dbm_per_rb = -112.45;
  /// In-band emission leakage by sub-band offset: element 0 is the same
  /// sub-band (always 1), element i the leakage from i sub-bands away.
  std::vector<double> ibe_vector{1.0, 0.0047, 0.0015};
  double antenna_height_tx_m = 1.5;
  double antenna_height_rx_m = 1.5;

  double noise_floor_per_rb_mw() const { return dbm_to_mw(noise_floor_dbm_per_rb); }

  friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

/// Default leakage vectors for small sub-band counts.
std::vector<double> default_ibe_vector(int sub_bands);

void validate(const ChannelConfig& cfg, int sub_bands);

struct Position {
  double x_m = 0.0;
  double y_m = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(Position a, Position b) {
  return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

// ---------------------------------------------------------------------------
// Pathloss. All functions return a linear attenuation factor (received power
// = transmit power / factor); *_db variants expose the underlying dB form.

double free_space_pathloss_db(double distance_m, double carrier_hz);
double free_space_pathloss(double distance_m, double carrier_hz);

/// WINNER+ urban-microcell B1 LOS. Two-branch model around the breakpoint
/// d_bp = 4 h'_tx h'_rx f/c with effective antenna heights h' = h - 1 m:
///   d <= d_bp: 22.7 log10(d) + 41.0 + 20 log10(f_GHz / 5)
///   d >  d_bp: 40 log10(d) + 9.45 - 17.3 log10(h'_tx) - 17.3 log10(h'_rx)
///              + 2.7 log10(f_GHz / 5)
/// Clamped below at its value for d = 3 m.
double winner_b1_pathloss_db(double distance_m, double carrier_hz,
                             double antenna_height_tx_m, double antenna_height_rx_m);
double winner_b1_pathloss(double distance_m, double carrier_hz,
                          double antenna_height_tx_m, double antenna_height_rx_m);

/// max(free-space, B1), the link pathloss used everywhere.
double effective_pathloss_db(double distance_m, const ChannelConfig& cfg);
double effective_pathloss(double distance_m, const ChannelConfig& cfg);

// ---------------------------------------------------------------------------
// Correlated shadowing. One state per unordered vehicle pair.

struct LinkShadowState {
  double value_db = 0.0;
  Position last_a{};
  Position last_b{};
  bool initialized = false;
};

/// Draws the shadowing value for a link whose endpoints have moved to the
/// given positions. First call draws N(0, sigma^2); later calls apply the
/// Gauss-Markov update rho * prev + sqrt(1 - rho^2) * N(0, sigma^2) with
/// rho = exp(-delta / corr_distance) and delta the sum of the two endpoint
/// displacements since the previous call. The marginal stays N(0, sigma^2).
double shadowing_sample(LinkShadowState& state, Position a, Position b,
                        double sigma_db, double corr_distance_m, RngStream& rng);

// ---------------------------------------------------------------------------
// Per-RB received power (the summand of the sensing equation).

/// Leakage factor between an interferer transmitting in sub-band p and a
/// measurement in sub-band f: ibe_vector[|p - f|]. Same sub-band gives 1.
double ibe_factor(int interferer_sub_band, int target_sub_band,
                  const ChannelConfig& cfg);

/// I * P_T * G_t G_r / (X * PL), all linear. Pathloss is passed in so the
/// caller can reuse one evaluation per link across sub-bands.
double received_rb_power(const ChannelConfig& cfg, double pathloss_linear,
                         double shadow_db, int interferer_sub_band,
                         int target_sub_band);

/// One co-subframe transmitter as seen by a fixed receiver.
struct TransmitterSample {
  int sub_band = 1;  // p
  double distance_m = 0.0;
  double shadow_db = 0.0;
};

/// Sensed per-RB power in each sub-band of one subframe: the noise floor
/// plus every co-subframe transmitter's contribution, or SATURATED in every
/// sub-band when the receiver itself transmitted in this subframe
/// (half-duplex: the power could not be sensed).
std::vector<double> sense_subframe(bool receiver_transmitted,
                                   std::span<const TransmitterSample> transmitters,
                                   const ChannelConfig& cfg, int sub_bands);

// ---------------------------------------------------------------------------
// Decode model.

/// SINR threshold in dB: 10 log10(2^(rho/lambda) - 1).
double decode_threshold_db(double rho_bps_hz, double lambda);

struct SinrBreakdown {
  double signal_mw = 0.0;
  double cci_mw = 0.0;    // co-channel: same sub-band, same subframe
  double ibe_mw = 0.0;    // leakage from other sub-bands of the subframe
  double noise_mw = 0.0;

  double sinr_db() const {
    return linear_to_db(signal_mw / (cci_mw + ibe_mw + noise_mw));
  }

  friend bool operator==(const SinrBreakdown&, const SinrBreakdown&) = default;
};

/// SINR of a target transmission at a receiver. `others` are the remaining
/// co-subframe transmitters (excluding the target and the receiver itself).
/// Per-RB ratios equal per-subchannel ratios since power is uniform across a
/// subchannel's RBs.
SinrBreakdown sinr_breakdown(const ChannelConfig& cfg,
                             const TransmitterSample& target,
                             std::span<const TransmitterSample> others);

// ---------------------------------------------------------------------------
// Per-window sensed-power grid (F x K), SATURATED-aware.

class SensedPowerGrid {
 public:
  SensedPowerGrid() = default;
  SensedPowerGrid(int sub_bands, int subframes, double fill_mw);

  double at(int sub_band, int subframe) const {
    return values_[index(sub_band, subframe)];
  }
  double& at(int sub_band, int subframe) { return values_[index(sub_band, subframe)]; }
  double at(SubchannelId id) const { return at(id.sub_band, id.subframe); }

  void saturate_subframe(int subframe);
  bool subframe_saturated(int subframe) const;

  int sub_bands() const { return sub_bands_; }
  int subframes() const { return subframes_; }

  friend bool operator==(const SensedPowerGrid&, const SensedPowerGrid&) = default;

 private:
  int index(int sub_band, int subframe) const {
    return (sub_band - 1) * subframes_ + (subframe - 1);
  }

  int sub_bands_ = 0;
  int subframes_ = 0;
  std::vector<double> values_;
};

}  // namespace cv2x
