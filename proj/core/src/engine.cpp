#include "cv2x/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cv2x/config.hpp"

namespace cv2x {

void validate(const SimConfig& cfg) {
  validate(cfg.grid);
  validate(cfg.channel, cfg.grid.sub_bands);
  validate(cfg.sps, cfg.grid);
  validate(cfg.freeway);
  if (cfg.duration_ms < cfg.warmup_ms)
    throw std::invalid_argument("duration_ms must be >= warmup_ms");
  if (cfg.duration_ms % cfg.grid.window_ms != 0 || cfg.warmup_ms % cfg.grid.window_ms != 0)
    throw std::invalid_argument("duration_ms and warmup_ms must be multiples of window_ms");
  if (cfg.awareness_distances_m.empty())
    throw std::invalid_argument("awareness_distances_m must not be empty");
  for (double d : cfg.awareness_distances_m)
    if (!(d > 0)) throw std::invalid_argument("awareness distances must be > 0");
  if (!(cfg.rho_bps_hz > 0)) throw std::invalid_argument("rho_bps_hz must be > 0");
  if (!(cfg.lambda > 0 && cfg.lambda <= 1))
    throw std::invalid_argument("lambda must be in (0, 1]");
  if (cfg.cam_size_bytes <= 0)
    throw std::invalid_argument("cam_size_bytes must be > 0");
  if (cfg.trace_path && cfg.trace_path->empty())
    throw std::invalid_argument("trace_path must not be empty for trace scenarios");
}

namespace {

std::uint64_t pair_key(int a, int b) {
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

double wrap_delta(double dx, double length) {
  dx = std::fmod(dx, length);
  if (dx > length / 2) dx -= length;
  if (dx < -length / 2) dx += length;
  return dx;
}

/// Planar distance; on the wraparound freeway the longitudinal axis is
/// periodic, so the shorter way around is used.
double link_distance(const WorldState& state, const SimConfig& cfg, Position a,
                     Position b) {
  double dx = a.x_m - b.x_m;
  if (!state.use_trace && cfg.freeway.wraparound && cfg.freeway.road_length_m > 0)
    dx = wrap_delta(dx, cfg.freeway.road_length_m);
  return std::hypot(dx, a.y_m - b.y_m);
}

/// Shadowing for an unordered pair, advanced lazily once per window. The RNG
/// substream is keyed on (pair, window), so the value does not depend on
/// which direction touches the pair first.
double shadow_for(WorldState& state, const SimConfig& cfg, const VehicleRuntime& va,
                  const VehicleRuntime& vb) {
  const std::uint64_t key = pair_key(va.vehicle.id, vb.vehicle.id);
  ShadowEntry& entry = state.shadow_states[key];
  if (entry.window == state.window) return entry.state.value_db;

  const VehicleRuntime& lo = va.vehicle.id < vb.vehicle.id ? va : vb;
  const VehicleRuntime& hi = va.vehicle.id < vb.vehicle.id ? vb : va;
  Position pa = lo.vehicle.position;
  Position pb = hi.vehicle.position;
  if (!state.use_trace && cfg.freeway.wraparound && entry.state.initialized) {
    // keep the stored coordinates continuous across the wrap seam so the
    // displacement seen by the correlation update stays physical
    const double length = cfg.freeway.road_length_m;
    pa.x_m = entry.state.last_a.x_m + wrap_delta(pa.x_m - entry.state.last_a.x_m, length);
    pb.x_m = entry.state.last_b.x_m + wrap_delta(pb.x_m - entry.state.last_b.x_m, length);
  }
  RngStream rng(substream_seed(cfg.seed, rng_purpose::kShadowing, key,
                               static_cast<std::uint64_t>(state.window)));
  const double value = shadowing_sample(entry.state, pa, pb, cfg.channel.shadow_sigma_db,
                                        cfg.channel.shadow_corr_distance_m, rng);
  entry.window = state.window;
  return value;
}

Reservation draw_initial_reservation(const SimConfig& cfg, int vehicle_id,
                                     std::int64_t window, const EngineHooks& hooks) {
  if (hooks.initial_reservation) {
    if (auto forced = hooks.initial_reservation(vehicle_id)) return *forced;
  }
  RngStream rng(substream_seed(cfg.seed, rng_purpose::kInitReservation,
                               static_cast<std::uint64_t>(vehicle_id),
                               static_cast<std::uint64_t>(window)));
  Reservation res;
  res.subchannel = from_linear(
      static_cast<int>(rng.next_below(
          static_cast<std::uint32_t>(total_subchannels(cfg.grid)))),
      cfg.grid);
  res.t_sps_ms = draw_tsps(cfg.sps, rng);
  // residual counter drawn uniformly in [1 .. T_SPS/T_w] to decorrelate the
  // expiry phases of the initial population
  res.windows_remaining =
      1 + static_cast<int>(rng.next_below(
              static_cast<std::uint32_t>(res.t_sps_ms / cfg.grid.window_ms)));
  return res;
}

VehicleRuntime make_runtime(const SimConfig& cfg, const Vehicle& v, std::int64_t window,
                            const EngineHooks& hooks) {
  VehicleRuntime rt{v, draw_initial_reservation(cfg, v.id, window, hooks),
                    SensingHistory(10), {}};
  return rt;
}

/// Uniform redraw used while the sensing history is still filling: any
/// subchannel outside the subframes the vehicle transmitted in so far.
Reservation warmup_redraw(const SimConfig& cfg, const VehicleRuntime& rt,
                          const std::vector<char>& blocked, RngStream& rng) {
  std::vector<SubchannelId> open;
  open.reserve(total_subchannels(cfg.grid));
  for (int f = 1; f <= cfg.grid.sub_bands; ++f)
    for (int k = 1; k <= cfg.grid.subframes_per_window; ++k)
      if (!blocked[k]) open.push_back({f, k});
  Reservation res;
  res.subchannel = open.empty()
                       ? rt.reservation.subchannel
                       : open[rng.next_below(static_cast<std::uint32_t>(open.size()))];
  res.t_sps_ms = draw_tsps(cfg.sps, rng);
  res.windows_remaining = res.t_sps_ms / cfg.grid.window_ms;
  return res;
}

void sync_trace_vehicles(WorldState& state, const SimConfig& cfg,
                         const EngineHooks& hooks) {
  const std::vector<Vehicle>* frame =
      state.trace.empty() ? nullptr
                          : state.trace.frame(state.window * cfg.grid.window_ms);
  static const std::vector<Vehicle> kEmpty;
  const std::vector<Vehicle>& now = frame ? *frame : kEmpty;

  std::vector<VehicleRuntime> next;
  next.reserve(now.size());
  auto old_it = state.vehicles.begin();
  for (const Vehicle& v : now) {
    while (old_it != state.vehicles.end() && old_it->vehicle.id < v.id) ++old_it;
    if (old_it != state.vehicles.end() && old_it->vehicle.id == v.id) {
      next.push_back(std::move(*old_it));
      next.back().vehicle = v;
      ++old_it;
    } else {
      next.push_back(make_runtime(cfg, v, state.window, hooks));
    }
  }
  state.vehicles = std::move(next);
}

}  // namespace

WorldState init_world(const SimConfig& cfg, const EngineHooks& hooks) {
  WorldState state;
  if (cfg.trace_path) {
    state.use_trace = true;
    state.trace = load_trace(*cfg.trace_path, cfg.grid.window_ms);
    sync_trace_vehicles(state, cfg, hooks);
  } else {
    RngStream rng(substream_seed(cfg.seed, rng_purpose::kScenario));
    for (const Vehicle& v : generate_freeway(cfg.freeway, rng))
      state.vehicles.push_back(make_runtime(cfg, v, 0, hooks));
  }
  return state;
}

std::vector<ReceptionEvent> step_window(WorldState& state, const SimConfig& cfg,
                                        const EngineHooks& hooks) {
  const int sub_bands = cfg.grid.sub_bands;
  const int subframes = cfg.grid.subframes_per_window;
  const double noise_mw = cfg.channel.noise_floor_per_rb_mw();
  const double gains = db_to_linear(cfg.channel.antenna_gain_tx_db +
                                    cfg.channel.antenna_gain_rx_db);
  const double threshold_db = cfg.decode_threshold();
  const double max_awareness = *std::max_element(cfg.awareness_distances_m.begin(),
                                                 cfg.awareness_distances_m.end());
  const int vehicle_count = static_cast<int>(state.vehicles.size());

  std::vector<SensedPowerGrid> snapshots(
      vehicle_count, SensedPowerGrid(sub_bands, subframes, noise_mw));
  std::vector<std::vector<int>> by_subframe(subframes + 1);
  for (int vi = 0; vi < vehicle_count; ++vi) {
    const VehicleRuntime& rt = state.vehicles[vi];
    by_subframe[rt.reservation.subchannel.subframe].push_back(vi);
    if (hooks.on_transmit)
      hooks.on_transmit(rt.vehicle.id, state.window, rt.reservation.subchannel);
  }

  std::vector<ReceptionEvent> events;
  std::vector<double> base;      // per-transmitter received power, IBE aside
  std::vector<double> distance_to;
  std::vector<double> band_sum(sub_bands);

  for (int k = 1; k <= subframes; ++k) {
    const std::vector<int>& txs = by_subframe[k];
    if (txs.empty()) continue;  // nothing to sense: the column stays at noise
    for (int vi = 0; vi < vehicle_count; ++vi) {
      VehicleRuntime& rx = state.vehicles[vi];
      const bool rx_transmitted = rx.reservation.subchannel.subframe == k;

      base.assign(txs.size(), 0.0);
      distance_to.assign(txs.size(), 0.0);
      std::fill(band_sum.begin(), band_sum.end(), 0.0);
      for (std::size_t t = 0; t < txs.size(); ++t) {
        if (txs[t] == vi) continue;
        const VehicleRuntime& tx = state.vehicles[txs[t]];
        const double d = std::max(
            link_distance(state, cfg, rx.vehicle.position, tx.vehicle.position), 1e-3);
        distance_to[t] = d;
        const double shadow_db = shadow_for(state, cfg, rx, tx);
        const double pl = effective_pathloss(d, cfg.channel);
        base[t] = cfg.channel.tx_power_per_rb_mw * gains /
                  (db_to_linear(shadow_db) * pl);
        band_sum[tx.reservation.subchannel.sub_band - 1] += base[t];
      }

      if (rx_transmitted) {
        snapshots[vi].saturate_subframe(k);
      } else {
        for (int f = 1; f <= sub_bands; ++f) {
          double sum = noise_mw;
          for (int b = 1; b <= sub_bands; ++b)
            sum += cfg.channel.ibe_vector[std::abs(b - f)] * band_sum[b - 1];
          snapshots[vi].at(f, k) = sum;
        }
      }

      for (std::size_t t = 0; t < txs.size(); ++t) {
        if (txs[t] == vi || distance_to[t] > max_awareness) continue;
        const VehicleRuntime& tx = state.vehicles[txs[t]];
        const int p = tx.reservation.subchannel.sub_band;
        SinrBreakdown sinr;
        sinr.noise_mw = noise_mw;
        sinr.signal_mw = base[t];
        sinr.cci_mw = band_sum[p - 1] - base[t];
        for (int b = 1; b <= sub_bands; ++b)
          if (b != p) sinr.ibe_mw += cfg.channel.ibe_vector[std::abs(b - p)] *
                                     band_sum[b - 1];
        ReceptionEvent event;
        event.window = state.window;
        event.tx_id = tx.vehicle.id;
        event.rx_id = rx.vehicle.id;
        event.distance_m = distance_to[t];
        event.subchannel = tx.reservation.subchannel;
        event.sinr = sinr;
        event.rx_transmit_subchannel = rx.reservation.subchannel;
        event.verdict = classify(sinr, event.subchannel, event.rx_transmit_subchannel,
                                 threshold_db);
        events.push_back(event);
      }
    }
  }

  // window end: histories first, then expiry handling at the generation
  // instance of the expiring window, then kinematics
  for (int vi = 0; vi < vehicle_count; ++vi) {
    VehicleRuntime& rt = state.vehicles[vi];
    rt.history.push(std::move(snapshots[vi]));
    rt.recent_tx_subframes.push_front(rt.reservation.subchannel.subframe);
    if (static_cast<int>(rt.recent_tx_subframes.size()) > rt.history.window_count())
      rt.recent_tx_subframes.pop_back();
    --rt.reservation.windows_remaining;
  }
  for (VehicleRuntime& rt : state.vehicles) {
    if (rt.reservation.windows_remaining > 0) continue;
    std::vector<char> blocked(subframes + 1, 0);
    for (int k : rt.recent_tx_subframes) blocked[k] = 1;
    RngStream rng(substream_seed(cfg.seed, rng_purpose::kReselect,
                                 static_cast<std::uint64_t>(rt.vehicle.id),
                                 static_cast<std::uint64_t>(state.window)));
    bool kept = false;
    const bool warmed = rt.history.full();
    if (warmed) {
      const ReselectOutcome outcome =
          maybe_reselect(rt.reservation, rt.history, cfg.sps, cfg.grid, rng);
      rt.reservation = outcome.reservation;
      kept = outcome.kept;
    } else {
      rt.reservation = warmup_redraw(cfg, rt, blocked, rng);
    }
    if (hooks.on_reselect)
      hooks.on_reselect(rt.vehicle.id, state.window, rt.reservation, blocked, kept,
                        warmed);
  }

  ++state.window;
  if (state.use_trace) {
    sync_trace_vehicles(state, cfg, hooks);
  } else {
    std::vector<Vehicle> positions;
    positions.reserve(state.vehicles.size());
    for (VehicleRuntime& rt : state.vehicles) positions.push_back(rt.vehicle);
    advance(positions, cfg.grid.window_ms / 1000.0, cfg.freeway);
    if (positions.size() == state.vehicles.size()) {
      for (std::size_t i = 0; i < positions.size(); ++i)
        state.vehicles[i].vehicle = positions[i];
    } else {
      // off-segment vehicles were removed (non-wraparound freeway)
      std::vector<VehicleRuntime> next;
      next.reserve(positions.size());
      auto it = state.vehicles.begin();
      for (const Vehicle& v : positions) {
        while (it->vehicle.id != v.id) ++it;
        next.push_back(std::move(*it));
        next.back().vehicle = v;
        ++it;
      }
      state.vehicles = std::move(next);
    }
  }
  return events;
}

SimulationReport run(const SimConfig& cfg, const EngineHooks& hooks) {
  validate(cfg);
  WorldState state = init_world(cfg, hooks);
  const std::int64_t total_windows = cfg.duration_ms / cfg.grid.window_ms;
  const std::int64_t warmup_windows = cfg.warmup_ms / cfg.grid.window_ms;
  PrrAccumulator acc(cfg.awareness_distances_m);
  for (std::int64_t w = 0; w < total_windows; ++w) {
    std::vector<ReceptionEvent> events = step_window(state, cfg, hooks);
    if (w < warmup_windows) continue;
    for (const ReceptionEvent& e : events) {
      acc.add(e);
      if (hooks.on_event) hooks.on_event(e);
    }
  }
  SimulationReport report;
  report.seed = cfg.seed;
  report.windows_measured = total_windows - warmup_windows;
  report.total_events = acc.events();
  report.config_echo = echo_config(cfg);
  report.table = acc.table();
  return report;
}

}  // namespace cv2x
