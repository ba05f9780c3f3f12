#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cv2x/channel.hpp"
#include "cv2x/grid.hpp"

namespace cv2x {

/// Outcome of one transmitter->receiver packet. Losses fall into five
/// mutually exclusive classes, checked in this order:
///   hd_sc       receiver transmitted on the same subchannel this window
///   hd_sf       receiver transmitted in the same subframe, other sub-band
///   propagation signal/noise below threshold even with zero interference
///   cci         co-channel interference pushes it below threshold
///   ibe         in-band emissions push it below threshold
enum class Verdict : std::uint8_t { decoded, hd_sc, hd_sf, propagation, cci, ibe };

std::string to_string(Verdict v);

Verdict classify(const SinrBreakdown& sinr, SubchannelId tx_subchannel,
                 std::optional<SubchannelId> rx_transmit_subchannel,
                 double threshold_db);

struct ReceptionEvent {
  std::int64_t window = 0;
  int tx_id = 0;
  int rx_id = 0;
  double distance_m = 0.0;
  SubchannelId subchannel{};
  SinrBreakdown sinr{};
  std::optional<SubchannelId> rx_transmit_subchannel;
  Verdict verdict = Verdict::decoded;
};

enum class RadiusMode { disk, ring };

/// Event counts for one (distance, variant) bin. Half-duplex losses count in
/// the denominator like any other loss.
struct ClassCounts {
  std::uint64_t decoded = 0;
  std::uint64_t hd_sf = 0;
  std::uint64_t hd_sc = 0;
  std::uint64_t propagation = 0;
  std::uint64_t cci = 0;
  std::uint64_t ibe = 0;

  void add(Verdict v);
  std::uint64_t total() const {
    return decoded + hd_sf + hd_sc + propagation + cci + ibe;
  }

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct DistanceBin {
  double d_x_m = 0.0;
  ClassCounts disk;  // distance <= d_x
  ClassCounts ring;  // d_x - 50 < distance <= d_x

  friend bool operator==(const DistanceBin&, const DistanceBin&) = default;
};

using PrrTable = std::vector<DistanceBin>;

/// Streaming aggregator; counts are the only state, so shards merge
/// associatively.
class PrrAccumulator {
 public:
  explicit PrrAccumulator(std::span<const double> awareness_distances_m);

  void add(const ReceptionEvent& event);
  void merge(const PrrAccumulator& other);

  const PrrTable& table() const { return table_; }
  std::uint64_t events() const { return events_; }

 private:
  PrrTable table_;
  std::uint64_t events_ = 0;
};

/// Fraction of decoded packets among events within the disk of radius d_x
/// (or the 50 m ring below it). d_x must be one of the configured distances.
double prr(std::span<const ReceptionEvent> events, double d_x_m, RadiusMode mode,
           std::span<const double> awareness_distances_m);

PrrTable aggregate(std::span<const ReceptionEvent> events,
                   std::span<const double> awareness_distances_m);

struct SimulationReport {
  std::uint64_t seed = 0;
  std::int64_t windows_measured = 0;
  std::uint64_t total_events = 0;
  std::string config_echo;  // canonical key=value form of the run config
  PrrTable table;

  friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

/// Long-form CSV, one row per (distance, variant), columns in the order
/// PRR, HD-SF, HD-SC, Propagation, CCI, IBE as percentages with 4 decimals.
/// Bins with no events serialize with empty value cells.
std::string serialize_csv(const SimulationReport& report);

/// JSON mirror of the CSV fields plus raw counts, the config echo and the
/// seed. Empty bins serialize as nulls.
std::string serialize_json(const SimulationReport& report);

SimulationReport parse_report_json(const std::string& text);

}  // namespace cv2x
