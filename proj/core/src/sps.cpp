#include "cv2x/sps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cv2x/units.hpp"

namespace cv2x {

std::string to_string(SelectionPolicy policy) {
  switch (policy) {
    case SelectionPolicy::standard: return "standard";
    case SelectionPolicy::greedy: return "greedy";
    case SelectionPolicy::random_uniform: return "random";
  }
  return "?";
}

SelectionPolicy selection_policy_from_string(const std::string& name) {
  if (name == "standard") return SelectionPolicy::standard;
  if (name == "greedy") return SelectionPolicy::greedy;
  if (name == "random") return SelectionPolicy::random_uniform;
  throw std::invalid_argument("unknown policy '" + name +
                              "' (expected standard, greedy or random)");
}

std::vector<int> default_t_sps_set_ms() {
  std::vector<int> set(11);
  std::generate(set.begin(), set.end(),
                [v = 500]() mutable { return std::exchange(v, v + 100); });
  return set;
}

void validate(const SpsPolicyConfig& cfg, const GridConfig& grid) {
  if (!(cfg.alpha > 0 && cfg.alpha <= 1))
    throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(cfg.p_keep >= 0 && cfg.p_keep < 1))
    throw std::invalid_argument("p_keep must be in [0, 1)");
  if (!std::isfinite(cfg.rsrp_threshold_dbm))
    throw std::invalid_argument("gamma_rsrp_dbm must be finite");
  if (!(cfg.threshold_step_db > 0))
    throw std::invalid_argument("threshold_step_db must be > 0");
  if (!(cfg.candidate_floor_fraction > 0 && cfg.candidate_floor_fraction <= 1))
    throw std::invalid_argument("candidate_floor_fraction must be in (0, 1]");
  if (!(cfg.selection_pool_fraction > 0 && cfg.selection_pool_fraction <= 1))
    throw std::invalid_argument("selection_pool_fraction must be in (0, 1]");
  if (cfg.t_sps_set_ms.empty())
    throw std::invalid_argument("t_sps_set must not be empty");
  for (int t : cfg.t_sps_set_ms) {
    if (t <= 0 || t % grid.window_ms != 0)
      throw std::invalid_argument("t_sps_set entries must be positive multiples of window_ms");
  }
}

void SensingHistory::push(SensedPowerGrid snapshot) {
  ring_.push_front(std::move(snapshot));
  if (static_cast<int>(ring_.size()) > window_count_) ring_.pop_back();
}

double weighted_average(std::span<const double> most_recent_first, double alpha) {
  if (!(alpha > 0 && alpha <= 1))
    throw std::invalid_argument("alpha must be in (0, 1]");
  if (most_recent_first.empty())
    throw std::invalid_argument("weighted_average needs at least one sample");
  double weight = 1.0;
  double weight_sum = 0.0;
  double acc = 0.0;
  for (double sample : most_recent_first) {
    if (is_saturated(sample)) return kSaturatedPower;
    weight *= alpha;  // weight for lag l is alpha^l
    weight_sum += weight;
    acc += weight * sample;
  }
  return acc / weight_sum;
}

std::pair<SensedPowerGrid, SensedPowerGrid> average_grids(
    const SensingHistory& history, double alpha) {
  if (!history.full())
    throw std::logic_error("average_grids requires a full sensing history");
  const int lags = history.window_count();
  const SensedPowerGrid& head = history.rsrp(1);
  SensedPowerGrid avg_rsrp(head.sub_bands(), head.subframes(), 0.0);
  SensedPowerGrid avg_rssi(head.sub_bands(), head.subframes(), 0.0);
  std::vector<double> samples(lags);
  for (int f = 1; f <= head.sub_bands(); ++f) {
    for (int k = 1; k <= head.subframes(); ++k) {
      for (int l = 1; l <= lags; ++l) samples[l - 1] = history.rsrp(l).at(f, k);
      avg_rsrp.at(f, k) = weighted_average(samples, alpha);
      for (int l = 1; l <= lags; ++l) samples[l - 1] = history.rssi(l).at(f, k);
      avg_rssi.at(f, k) = weighted_average(samples, alpha);
    }
  }
  return {std::move(avg_rsrp), std::move(avg_rssi)};
}

namespace {

int candidate_floor(const SpsPolicyConfig& cfg, const GridConfig& grid) {
  return static_cast<int>(
      std::ceil(cfg.candidate_floor_fraction * total_subchannels(grid)));
}

int selection_pool_size(const SpsPolicyConfig& cfg, const GridConfig& grid) {
  return static_cast<int>(
      std::ceil(cfg.selection_pool_fraction * total_subchannels(grid)));
}

}  // namespace

std::vector<SubchannelId> stage2_candidates(const SensedPowerGrid& avg_rsrp,
                                            const SpsPolicyConfig& cfg,
                                            const GridConfig& grid) {
  int finite_count = 0;
  for (int f = 1; f <= grid.sub_bands; ++f)
    for (int k = 1; k <= grid.subframes_per_window; ++k)
      if (!is_saturated(avg_rsrp.at(f, k))) ++finite_count;

  const int floor = std::min(candidate_floor(cfg, grid), finite_count);
  double gamma_dbm = cfg.rsrp_threshold_dbm;
  std::vector<SubchannelId> candidates;
  for (;;) {
    candidates.clear();
    const double gamma_mw = dbm_to_mw(gamma_dbm);
    for (int f = 1; f <= grid.sub_bands; ++f) {
      for (int k = 1; k <= grid.subframes_per_window; ++k) {
        const double v = avg_rsrp.at(f, k);
        if (!is_saturated(v) && v < gamma_mw) candidates.push_back({f, k});
      }
    }
    if (static_cast<int>(candidates.size()) >= floor) return candidates;
    gamma_dbm += cfg.threshold_step_db;
  }
}

SubchannelId stage3_select(std::span<const SubchannelId> candidates,
                           const SensedPowerGrid& avg_rssi, const GridConfig& grid,
                           const SpsPolicyConfig& cfg, RngStream& rng) {
  if (candidates.empty())
    throw std::invalid_argument("stage3_select needs a non-empty candidate set");
  std::vector<SubchannelId> ranked(candidates.begin(), candidates.end());
  std::sort(ranked.begin(), ranked.end(), [&](SubchannelId a, SubchannelId b) {
    const double ra = avg_rssi.at(a);
    const double rb = avg_rssi.at(b);
    if (ra != rb) return ra < rb;
    return linear_index(a, grid) < linear_index(b, grid);
  });
  const auto pool = std::min<std::size_t>(selection_pool_size(cfg, grid), ranked.size());
  return ranked[rng.next_below(static_cast<std::uint32_t>(pool))];
}

int draw_tsps(const SpsPolicyConfig& cfg, RngStream& rng) {
  return cfg.t_sps_set_ms[rng.next_below(
      static_cast<std::uint32_t>(cfg.t_sps_set_ms.size()))];
}

SubchannelId baseline_select(SelectionPolicy policy, const SensedPowerGrid& avg_rssi,
                             const GridConfig& grid, RngStream& rng) {
  std::vector<SubchannelId> open;
  open.reserve(total_subchannels(grid));
  for (int f = 1; f <= grid.sub_bands; ++f)
    for (int k = 1; k <= grid.subframes_per_window; ++k)
      if (!is_saturated(avg_rssi.at(f, k))) open.push_back({f, k});
  if (open.empty())
    throw std::invalid_argument("baseline_select: every subchannel is saturated");

  if (policy == SelectionPolicy::random_uniform) {
    return open[rng.next_below(static_cast<std::uint32_t>(open.size()))];
  }
  if (policy == SelectionPolicy::greedy) {
    return *std::min_element(open.begin(), open.end(),
                             [&](SubchannelId a, SubchannelId b) {
                               const double ra = avg_rssi.at(a);
                               const double rb = avg_rssi.at(b);
                               if (ra != rb) return ra < rb;
                               return linear_index(a, grid) < linear_index(b, grid);
                             });
  }
  throw std::invalid_argument("baseline_select handles greedy and random only");
}

ReselectOutcome maybe_reselect(const Reservation& expired,
                               const SensingHistory& history,
                               const SpsPolicyConfig& cfg, const GridConfig& grid,
                               RngStream& rng) {
  ReselectOutcome out;
  if (rng.next_double() < cfg.p_keep) {
    out.kept = true;
    out.reservation.subchannel = expired.subchannel;  // skip re-scheduling
  } else if (cfg.policy == SelectionPolicy::standard) {
    const auto [avg_rsrp, avg_rssi] = average_grids(history, cfg.alpha);
    const auto candidates = stage2_candidates(avg_rsrp, cfg, grid);
    out.reservation.subchannel = stage3_select(candidates, avg_rssi, grid, cfg, rng);
  } else {
    const auto [avg_rsrp, avg_rssi] = average_grids(history, cfg.alpha);
    out.reservation.subchannel = baseline_select(cfg.policy, avg_rssi, grid, rng);
  }
  out.reservation.t_sps_ms = draw_tsps(cfg, rng);
  out.reservation.windows_remaining = out.reservation.t_sps_ms / grid.window_ms;
  return out;
}

}  // namespace cv2x
