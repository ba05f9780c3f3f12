#include "cv2x/channel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cv2x {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
}

std::vector<double> default_ibe_vector(int sub_bands) {
  static const std::vector<double> four{1.0, 0.0047, 0.0015, 0.0005};
  if (sub_bands >= 1 && sub_bands <= 4) {
    return {four.begin(), four.begin() + sub_bands};
  }
  throw std::invalid_argument("no default ibe_vector for " +
                              std::to_string(sub_bands) +
                              " sub-bands; set ibe_vector explicitly");
}

void validate(const ChannelConfig& cfg, int sub_bands) {
  if (!(cfg.carrier_frequency_hz > 0))
    throw std::invalid_argument("carrier_frequency_hz must be > 0");
  if (!(cfg.tx_power_per_rb_mw > 0))
    throw std::invalid_argument("tx_power_per_rb_mw must be > 0");
  if (!std::isfinite(cfg.antenna_gain_tx_db) || !std::isfinite(cfg.antenna_gain_rx_db))
    throw std::invalid_argument("antenna gains must be finite");
  if (!(cfg.shadow_sigma_db >= 0))
    throw std::invalid_argument("shadow_sigma_db must be >= 0");
  if (!(cfg.shadow_corr_distance_m > 0))
    throw std::invalid_argument("shadow_corr_distance_m must be > 0");
  if (!std::isfinite(cfg.noise_floor_dbm_per_rb))
    throw std::invalid_argument("noise_floor_dbm_per_rb must be finite");
  if (cfg.ibe_vector.empty() || cfg.ibe_vector.front() != 1.0)
    throw std::invalid_argument("ibe_vector[0] must be exactly 1");
  if (static_cast<int>(cfg.ibe_vector.size()) < sub_bands)
    throw std::invalid_argument("ibe_vector needs at least one entry per sub-band (" +
                                std::to_string(sub_bands) + " required, " +
                                std::to_string(cfg.ibe_vector.size()) + " given)");
  if (!std::is_sorted(cfg.ibe_vector.rbegin(), cfg.ibe_vector.rend()))
    throw std::invalid_argument("ibe_vector must be non-increasing");
}

double free_space_pathloss_db(double distance_m, double carrier_hz) {
  if (!(distance_m > 0)) throw std::invalid_argument("distance must be > 0");
  return 20.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_hz) +
         20.0 * std::log10(4.0 * std::numbers::pi / kSpeedOfLight);
}

double free_space_pathloss(double distance_m, double carrier_hz) {
  return db_to_linear(free_space_pathloss_db(distance_m, carrier_hz));
}

double winner_b1_pathloss_db(double distance_m, double carrier_hz,
                             double antenna_height_tx_m,
                             double antenna_height_rx_m) {
  if (!(distance_m > 0)) throw std::invalid_argument("distance must be > 0");
  const double h_tx = antenna_height_tx_m - 1.0;
  const double h_rx = antenna_height_rx_m - 1.0;
  const double breakpoint_m = 4.0 * h_tx * h_rx * carrier_hz / kSpeedOfLight;
  const double f_term = std::log10(carrier_hz / 1e9 / 5.0);
  const double d = std::max(distance_m, 3.0);
  if (d <= breakpoint_m) {
    return 22.7 * std::log10(d) + 41.0 + 20.0 * f_term;
  }
  return 40.0 * std::log10(d) + 9.45 - 17.3 * std::log10(h_tx) -
         17.3 * std::log10(h_rx) + 2.7 * f_term;
}

double winner_b1_pathloss(double distance_m, double carrier_hz,
                          double antenna_height_tx_m, double antenna_height_rx_m) {
  return db_to_linear(winner_b1_pathloss_db(distance_m, carrier_hz,
                                            antenna_height_tx_m,
                                            antenna_height_rx_m));
}

double effective_pathloss_db(double distance_m, const ChannelConfig& cfg) {
  return std::max(
      free_space_pathloss_db(distance_m, cfg.carrier_frequency_hz),
      winner_b1_pathloss_db(distance_m, cfg.carrier_frequency_hz,
                            cfg.antenna_height_tx_m, cfg.antenna_height_rx_m));
}

double effective_pathloss(double distance_m, const ChannelConfig& cfg) {
  return db_to_linear(effective_pathloss_db(distance_m, cfg));
}

double shadowing_sample(LinkShadowState& state, Position a, Position b,
                        double sigma_db, double corr_distance_m, RngStream& rng) {
  if (!state.initialized) {
    state.value_db = rng.next_normal(sigma_db);
    state.initialized = true;
  } else {
    const double delta_m = distance(a, state.last_a) + distance(b, state.last_b);
    if (delta_m > 0.0) {
      const double rho = std::exp(-delta_m / corr_distance_m);
      state.value_db = rho * state.value_db +
                       std::sqrt(1.0 - rho * rho) * rng.next_normal(sigma_db);
    }
  }
  state.last_a = a;
  state.last_b = b;
  return state.value_db;
}

double ibe_factor(int interferer_sub_band, int target_sub_band,
                  const ChannelConfig& cfg) {
  const int offset = std::abs(interferer_sub_band - target_sub_band);
  if (offset >= static_cast<int>(cfg.ibe_vector.size())) {
    throw std::out_of_range("ibe_vector has no entry for sub-band offset " +
                            std::to_string(offset));
  }
  return cfg.ibe_vector[offset];
}

double received_rb_power(const ChannelConfig& cfg, double pathloss_linear,
                         double shadow_db, int interferer_sub_band,
                         int target_sub_band) {
  const double gains = db_to_linear(cfg.antenna_gain_tx_db + cfg.antenna_gain_rx_db);
  return ibe_factor(interferer_sub_band, target_sub_band, cfg) *
         cfg.tx_power_per_rb_mw * gains /
         (db_to_linear(shadow_db) * pathloss_linear);
}

std::vector<double> sense_subframe(bool receiver_transmitted,
                                   std::span<const TransmitterSample> transmitters,
                                   const ChannelConfig& cfg, int sub_bands) {
  if (receiver_transmitted) {
    return std::vector<double>(sub_bands, kSaturatedPower);
  }
  std::vector<double> sensed(sub_bands, cfg.noise_floor_per_rb_mw());
  for (const TransmitterSample& tx : transmitters) {
    const double pl = effective_pathloss(tx.distance_m, cfg);
    for (int f = 1; f <= sub_bands; ++f) {
      sensed[f - 1] += received_rb_power(cfg, pl, tx.shadow_db, tx.sub_band, f);
    }
  }
  return sensed;
}

double decode_threshold_db(double rho_bps_hz, double lambda) {
  if (!(rho_bps_hz > 0)) throw std::invalid_argument("rho must be > 0");
  if (!(lambda > 0 && lambda <= 1))
    throw std::invalid_argument("lambda must be in (0, 1]");
  return 10.0 * std::log10(std::exp2(rho_bps_hz / lambda) - 1.0);
}

SinrBreakdown sinr_breakdown(const ChannelConfig& cfg,
                             const TransmitterSample& target,
                             std::span<const TransmitterSample> others) {
  SinrBreakdown out;
  out.noise_mw = cfg.noise_floor_per_rb_mw();
  const double target_pl = effective_pathloss(target.distance_m, cfg);
  out.signal_mw = received_rb_power(cfg, target_pl, target.shadow_db,
                                    target.sub_band, target.sub_band);
  for (const TransmitterSample& tx : others) {
    const double pl = effective_pathloss(tx.distance_m, cfg);
    const double p = received_rb_power(cfg, pl, tx.shadow_db, tx.sub_band,
                                       target.sub_band);
    if (tx.sub_band == target.sub_band) {
      out.cci_mw += p;
    } else {
      out.ibe_mw += p;
    }
  }
  return out;
}

SensedPowerGrid::SensedPowerGrid(int sub_bands, int subframes, double fill_mw)
    : sub_bands_(sub_bands),
      subframes_(subframes),
      values_(static_cast<std::size_t>(sub_bands) * subframes, fill_mw) {}

void SensedPowerGrid::saturate_subframe(int subframe) {
  for (int f = 1; f <= sub_bands_; ++f) at(f, subframe) = kSaturatedPower;
}

bool SensedPowerGrid::subframe_saturated(int subframe) const {
  for (int f = 1; f <= sub_bands_; ++f) {
    if (!is_saturated(at(f, subframe))) return false;
  }
  return sub_bands_ > 0;
}

}  // namespace cv2x
