#include "cv2x/metrics.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "cv2x/rng.hpp"
#include "cv2x/units.hpp"

using namespace cv2x;

namespace {

constexpr double kThresholdDb = 3.0102999566398120;  // ratio of exactly 2

ReceptionEvent make_event(double distance, Verdict verdict) {
  ReceptionEvent e;
  e.distance_m = distance;
  e.verdict = verdict;
  return e;
}

const std::vector<double> kDistances{50, 100, 150, 200, 250, 300};

}  // namespace

TEST_CASE("loss classification hierarchy") {
  // threshold ratio 2: noise 1 mW makes the arithmetic readable
  SinrBreakdown strong{100.0, 0.0, 0.0, 1.0};

  SUBCASE("half-duplex subchannel beats everything") {
    CHECK(classify(strong, {2, 30}, SubchannelId{2, 30}, kThresholdDb) ==
          Verdict::hd_sc);
  }

  SUBCASE("half-duplex subframe: same k, other sub-band") {
    CHECK(classify(strong, {2, 30}, SubchannelId{1, 30}, kThresholdDb) ==
          Verdict::hd_sf);
  }

  SUBCASE("receiver transmitting elsewhere does not block") {
    CHECK(classify(strong, {2, 30}, SubchannelId{2, 31}, kThresholdDb) ==
          Verdict::decoded);
    CHECK(classify(strong, {2, 30}, std::nullopt, kThresholdDb) == Verdict::decoded);
  }

  SUBCASE("propagation: below threshold with zero interference") {
    const SinrBreakdown b{1.9, 50.0, 50.0, 1.0};  // s/n = 1.9 < 2
    CHECK(classify(b, {1, 1}, std::nullopt, kThresholdDb) == Verdict::propagation);
  }

  SUBCASE("cci: s/n passes, s/(n+cci) fails") {
    const SinrBreakdown b{3.0, 1.0, 0.0, 1.0};  // 3 >= 2, 1.5 < 2
    CHECK(classify(b, {1, 1}, std::nullopt, kThresholdDb) == Verdict::cci);
  }

  SUBCASE("ibe: survives cci, fails with leakage added") {
    const SinrBreakdown b{3.0, 0.0, 1.0, 1.0};  // 3 >= 2, 3 >= 2, 1.5 < 2
    CHECK(classify(b, {1, 1}, std::nullopt, kThresholdDb) == Verdict::ibe);
  }

  SUBCASE("decoded at the threshold boundary") {
    const SinrBreakdown b{2.0, 0.0, 0.0, 1.0};  // exactly the ratio: decoded
    CHECK(classify(b, {1, 1}, std::nullopt, kThresholdDb) == Verdict::decoded);
  }

  SUBCASE("decoded iff the full SINR clears the threshold (fuzz)") {
    RngStream rng(3);
    for (int i = 0; i < 2000; ++i) {
      const SinrBreakdown b{std::exp(8.0 * rng.next_double()),
                            rng.next_double() < 0.3 ? 0.0 : std::exp(4 * rng.next_double()),
                            rng.next_double() < 0.3 ? 0.0 : std::exp(4 * rng.next_double()),
                            1.0};
      const Verdict v = classify(b, {1, 1}, std::nullopt, kThresholdDb);
      const bool decodable = b.sinr_db() >= kThresholdDb;
      CHECK((v == Verdict::decoded) == decodable);
    }
  }
}

TEST_CASE("prr computation") {
  SUBCASE("all decoded is 1.0") {
    std::vector<ReceptionEvent> events;
    for (int i = 1; i <= 20; ++i)
      events.push_back(make_event(10.0 * i, Verdict::decoded));
    CHECK(prr(events, 200, RadiusMode::disk, kDistances) == 1.0);
    CHECK(prr(events, 200, RadiusMode::ring, kDistances) == 1.0);
  }

  SUBCASE("disk(50) equals ring(50)") {
    RngStream rng(5);
    std::vector<ReceptionEvent> events;
    for (int i = 0; i < 5000; ++i)
      events.push_back(make_event(300.0 * rng.next_double() + 0.01,
                                  rng.next_double() < 0.8 ? Verdict::decoded
                                                          : Verdict::cci));
    CHECK(prr(events, 50, RadiusMode::disk, kDistances) ==
          prr(events, 50, RadiusMode::ring, kDistances));
  }

  SUBCASE("disk decomposes into rings") {
    RngStream rng(7);
    std::vector<ReceptionEvent> events;
    for (int i = 0; i < 5000; ++i)
      events.push_back(make_event(300.0 * rng.next_double() + 0.01,
                                  rng.next_double() < 0.7 ? Verdict::decoded
                                                          : Verdict::propagation));
    const PrrTable table = aggregate(events, kDistances);
    ClassCounts sum;
    for (const DistanceBin& bin : table) {
      sum.decoded += bin.ring.decoded;
      sum.hd_sf += bin.ring.hd_sf;
      sum.hd_sc += bin.ring.hd_sc;
      sum.propagation += bin.ring.propagation;
      sum.cci += bin.ring.cci;
      sum.ibe += bin.ring.ibe;
    }
    CHECK(sum == table.back().disk);
  }

  SUBCASE("unconfigured distance is rejected") {
    std::vector<ReceptionEvent> events{make_event(10, Verdict::decoded)};
    CHECK_THROWS_AS(prr(events, 75, RadiusMode::disk, kDistances),
                    std::invalid_argument);
  }
}

TEST_CASE("aggregation") {
  SUBCASE("known synthetic counts come out exactly") {
    std::vector<ReceptionEvent> events;
    for (int i = 0; i < 60; ++i) events.push_back(make_event(40, Verdict::decoded));
    for (int i = 0; i < 25; ++i) events.push_back(make_event(40, Verdict::cci));
    for (int i = 0; i < 10; ++i) events.push_back(make_event(40, Verdict::hd_sf));
    for (int i = 0; i < 5; ++i) events.push_back(make_event(40, Verdict::ibe));
    const PrrTable table = aggregate(events, kDistances);
    CHECK(table[0].d_x_m == 50);
    CHECK(table[0].disk.decoded == 60);
    CHECK(table[0].disk.cci == 25);
    CHECK(table[0].disk.hd_sf == 10);
    CHECK(table[0].disk.ibe == 5);
    CHECK(table[0].disk.total() == 100);
    CHECK(table[0].disk == table[0].ring);
    // the events also land in every larger disk but no larger ring
    CHECK(table[5].disk.total() == 100);
    CHECK(table[5].ring.total() == 0);
  }

  SUBCASE("empty input keeps bins empty, not dropped") {
    const PrrTable table = aggregate({}, kDistances);
    REQUIRE(table.size() == 6);
    for (const DistanceBin& bin : table) {
      CHECK(bin.disk.total() == 0);
      CHECK(bin.ring.total() == 0);
    }
  }

  SUBCASE("partition property under fuzzing") {
    RngStream rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<ReceptionEvent> events;
      const int n = 100 + static_cast<int>(rng.next_below(2000));
      for (int i = 0; i < n; ++i) {
        const Verdict v = static_cast<Verdict>(rng.next_below(6));
        events.push_back(make_event(0.01 + 320.0 * rng.next_double(), v));
      }
      const PrrTable table = aggregate(events, kDistances);
      for (const DistanceBin& bin : table) {
        for (const ClassCounts& c : {bin.disk, bin.ring}) {
          if (c.total() == 0) continue;
          const double t = static_cast<double>(c.total());
          const double sum = (c.decoded + c.hd_sf + c.hd_sc + c.propagation + c.cci +
                              c.ibe) / t;
          CHECK(std::abs(sum - 1.0) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("report serialization") {
  SimulationReport report;
  report.seed = 42;
  report.windows_measured = 200;
  report.config_echo = "alpha = 1\n";
  PrrAccumulator acc(kDistances);
  RngStream rng(13);
  for (int i = 0; i < 5000; ++i) {
    ReceptionEvent e = make_event(0.01 + 300.0 * rng.next_double(),
                                  static_cast<Verdict>(rng.next_below(6)));
    acc.add(e);
  }
  report.total_events = acc.events();
  report.table = acc.table();

  SUBCASE("csv shape and formatting") {
    const std::string csv = serialize_csv(report);
    CHECK(csv.starts_with(
        "d_x_m,variant,prr_pct,hd_sf_pct,hd_sc_pct,propagation_pct,cci_pct,ibe_pct\n"));
    // one header plus 12 rows (6 distances x 2 variants)
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  }

  SUBCASE("percentages carry 4 decimals in table column order") {
    SimulationReport small;
    small.seed = 1;
    std::vector<ReceptionEvent> events;
    for (int i = 0; i < 3; ++i) events.push_back(make_event(40, Verdict::decoded));
    events.push_back(make_event(40, Verdict::cci));
    small.table = aggregate(events, kDistances);
    small.total_events = events.size();
    const std::string csv = serialize_csv(small);
    CHECK(csv.find("50,disk,75.0000,0.0000,0.0000,0.0000,25.0000,0.0000\n") !=
          std::string::npos);
  }

  SUBCASE("json round-trips to an equal report") {
    const std::string json = serialize_json(report);
    const SimulationReport parsed = parse_report_json(json);
    CHECK(parsed == report);
  }

  SUBCASE("empty bins serialize as nulls and blank cells") {
    SimulationReport empty;
    empty.seed = 1;
    empty.windows_measured = 0;
    empty.config_echo = "";
    empty.table = aggregate({}, kDistances);
    const std::string csv = serialize_csv(empty);
    CHECK(csv.find("50,disk,,,,,,\n") != std::string::npos);
    const std::string json = serialize_json(empty);
    CHECK(json.find("\"percent\": null") != std::string::npos);
    CHECK(parse_report_json(json) == empty);
  }
}
