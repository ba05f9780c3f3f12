#include "cv2x/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cv2x/units.hpp"

namespace cv2x {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::decoded: return "decoded";
    case Verdict::hd_sc: return "hd_sc";
    case Verdict::hd_sf: return "hd_sf";
    case Verdict::propagation: return "propagation";
    case Verdict::cci: return "cci";
    case Verdict::ibe: return "ibe";
  }
  return "?";
}

Verdict classify(const SinrBreakdown& sinr, SubchannelId tx_subchannel,
                 std::optional<SubchannelId> rx_transmit_subchannel,
                 double threshold_db) {
  if (rx_transmit_subchannel && same_subframe(*rx_transmit_subchannel, tx_subchannel)) {
    return *rx_transmit_subchannel == tx_subchannel ? Verdict::hd_sc : Verdict::hd_sf;
  }
  // Interference terms are added incrementally; the first level that drops
  // the ratio below threshold names the loss.
  const double threshold = db_to_linear(threshold_db);
  if (sinr.signal_mw < threshold * sinr.noise_mw) return Verdict::propagation;
  if (sinr.signal_mw < threshold * (sinr.noise_mw + sinr.cci_mw)) return Verdict::cci;
  if (sinr.signal_mw < threshold * (sinr.noise_mw + sinr.cci_mw + sinr.ibe_mw))
    return Verdict::ibe;
  return Verdict::decoded;
}

void ClassCounts::add(Verdict v) {
  switch (v) {
    case Verdict::decoded: ++decoded; break;
    case Verdict::hd_sf: ++hd_sf; break;
    case Verdict::hd_sc: ++hd_sc; break;
    case Verdict::propagation: ++propagation; break;
    case Verdict::cci: ++cci; break;
    case Verdict::ibe: ++ibe; break;
  }
}

PrrAccumulator::PrrAccumulator(std::span<const double> awareness_distances_m) {
  table_.reserve(awareness_distances_m.size());
  for (double d : awareness_distances_m) table_.push_back(DistanceBin{d, {}, {}});
  std::sort(table_.begin(), table_.end(),
            [](const DistanceBin& a, const DistanceBin& b) { return a.d_x_m < b.d_x_m; });
}

void PrrAccumulator::add(const ReceptionEvent& event) {
  ++events_;
  for (DistanceBin& bin : table_) {
    if (event.distance_m <= bin.d_x_m) {
      bin.disk.add(event.verdict);
      if (event.distance_m > bin.d_x_m - 50.0) bin.ring.add(event.verdict);
    }
  }
}

void PrrAccumulator::merge(const PrrAccumulator& other) {
  if (other.table_.size() != table_.size())
    throw std::invalid_argument("cannot merge accumulators with different bins");
  events_ += other.events_;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    auto add_counts = [](ClassCounts& into, const ClassCounts& from) {
      into.decoded += from.decoded;
      into.hd_sf += from.hd_sf;
      into.hd_sc += from.hd_sc;
      into.propagation += from.propagation;
      into.cci += from.cci;
      into.ibe += from.ibe;
    };
    add_counts(table_[i].disk, other.table_[i].disk);
    add_counts(table_[i].ring, other.table_[i].ring);
  }
}

double prr(std::span<const ReceptionEvent> events, double d_x_m, RadiusMode mode,
           std::span<const double> awareness_distances_m) {
  if (std::find(awareness_distances_m.begin(), awareness_distances_m.end(), d_x_m) ==
      awareness_distances_m.end()) {
    throw std::invalid_argument("d_x " + std::to_string(d_x_m) +
                                " is not a configured awareness distance");
  }
  std::uint64_t total = 0;
  std::uint64_t decoded = 0;
  for (const ReceptionEvent& e : events) {
    const bool in = mode == RadiusMode::disk
                        ? e.distance_m <= d_x_m
                        : e.distance_m > d_x_m - 50.0 && e.distance_m <= d_x_m;
    if (!in) continue;
    ++total;
    if (e.verdict == Verdict::decoded) ++decoded;
  }
  return total == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : static_cast<double>(decoded) / static_cast<double>(total);
}

PrrTable aggregate(std::span<const ReceptionEvent> events,
                   std::span<const double> awareness_distances_m) {
  PrrAccumulator acc(awareness_distances_m);
  for (const ReceptionEvent& e : events) acc.add(e);
  return acc.table();
}

namespace {

std::string pct(std::uint64_t count, std::uint64_t total) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f",
                100.0 * static_cast<double>(count) / static_cast<double>(total));
  return buf;
}

const char* variant_name(RadiusMode mode) {
  return mode == RadiusMode::disk ? "disk" : "ring";
}

nlohmann::json counts_to_json(const ClassCounts& c) {
  return nlohmann::json{{"decoded", c.decoded},   {"hd_sf", c.hd_sf},
                        {"hd_sc", c.hd_sc},       {"propagation", c.propagation},
                        {"cci", c.cci},           {"ibe", c.ibe}};
}

ClassCounts counts_from_json(const nlohmann::json& j) {
  ClassCounts c;
  c.decoded = j.at("decoded").get<std::uint64_t>();
  c.hd_sf = j.at("hd_sf").get<std::uint64_t>();
  c.hd_sc = j.at("hd_sc").get<std::uint64_t>();
  c.propagation = j.at("propagation").get<std::uint64_t>();
  c.cci = j.at("cci").get<std::uint64_t>();
  c.ibe = j.at("ibe").get<std::uint64_t>();
  return c;
}

nlohmann::json percentages_to_json(const ClassCounts& c) {
  if (c.total() == 0) return nullptr;
  const double t = static_cast<double>(c.total());
  auto p = [&](std::uint64_t n) { return 100.0 * static_cast<double>(n) / t; };
  return nlohmann::json{{"prr", p(c.decoded)},          {"hd_sf", p(c.hd_sf)},
                        {"hd_sc", p(c.hd_sc)},          {"propagation", p(c.propagation)},
                        {"cci", p(c.cci)},              {"ibe", p(c.ibe)}};
}

}  // namespace

std::string serialize_csv(const SimulationReport& report) {
  std::string out =
      "d_x_m,variant,prr_pct,hd_sf_pct,hd_sc_pct,propagation_pct,cci_pct,ibe_pct\n";
  for (const DistanceBin& bin : report.table) {
    for (RadiusMode mode : {RadiusMode::disk, RadiusMode::ring}) {
      const ClassCounts& c = mode == RadiusMode::disk ? bin.disk : bin.ring;
      char head[64];
      std::snprintf(head, sizeof head, "%g,%s", bin.d_x_m, variant_name(mode));
      out += head;
      if (c.total() == 0) {
        out += ",,,,,,\n";  // empty bin: explicit blank cells, never dropped
        continue;
      }
      for (std::uint64_t n : {c.decoded, c.hd_sf, c.hd_sc, c.propagation, c.cci, c.ibe}) {
        out += ',';
        out += pct(n, c.total());
      }
      out += '\n';
    }
  }
  return out;
}

std::string serialize_json(const SimulationReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const DistanceBin& bin : report.table) {
    for (RadiusMode mode : {RadiusMode::disk, RadiusMode::ring}) {
      const ClassCounts& c = mode == RadiusMode::disk ? bin.disk : bin.ring;
      rows.push_back(nlohmann::json{{"d_x_m", bin.d_x_m},
                                    {"variant", variant_name(mode)},
                                    {"counts", counts_to_json(c)},
                                    {"percent", percentages_to_json(c)}});
    }
  }
  const nlohmann::json j{{"seed", report.seed},
                         {"windows_measured", report.windows_measured},
                         {"total_events", report.total_events},
                         {"config", report.config_echo},
                         {"table", rows}};
  return j.dump(2) + "\n";
}

SimulationReport parse_report_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SimulationReport report;
  report.seed = j.at("seed").get<std::uint64_t>();
  report.windows_measured = j.at("windows_measured").get<std::int64_t>();
  report.total_events = j.at("total_events").get<std::uint64_t>();
  report.config_echo = j.at("config").get<std::string>();
  for (const nlohmann::json& row : j.at("table")) {
    const double d = row.at("d_x_m").get<double>();
    if (report.table.empty() || report.table.back().d_x_m != d)
      report.table.push_back(DistanceBin{d, {}, {}});
    ClassCounts& c = row.at("variant").get<std::string>() == "disk"
                         ? report.table.back().disk
                         : report.table.back().ring;
    c = counts_from_json(row.at("counts"));
  }
  return report;
}

}  // namespace cv2x
