#include "cv2x/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

using namespace cv2x;

TEST_CASE("freeway generation") {
  const FreewayConfig cfg;  // 1.5 km, 100 veh/km, 6 lanes

  SUBCASE("mean count matches the Poisson intensity") {
    double total = 0;
    const int seeds = 300;
    for (int s = 0; s < seeds; ++s) {
      RngStream rng(substream_seed(s, rng_purpose::kScenario));
      total += static_cast<double>(generate_freeway(cfg, rng).size());
    }
    const double expected = cfg.density_per_km * cfg.road_length_m / 1000.0;  // 150
    const double tol = 3.0 * std::sqrt(expected / seeds);
    CHECK(std::abs(total / seeds - expected) < tol);
  }

  SUBCASE("per-lane gaps are exponential (KS at 5%)") {
    std::vector<double> gaps;
    for (int s = 0; gaps.size() < 10000; ++s) {
      RngStream rng(substream_seed(1000 + s, rng_purpose::kScenario));
      const auto vehicles = generate_freeway(cfg, rng);
      for (int lane = 0; lane < cfg.lane_count(); ++lane) {
        std::vector<double> xs;
        for (const Vehicle& v : vehicles)
          if (v.lane == lane) xs.push_back(v.position.x_m);
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 1; i < xs.size(); ++i) gaps.push_back(xs[i] - xs[i - 1]);
      }
    }
    gaps.resize(10000);
    std::sort(gaps.begin(), gaps.end());
    const double rate = cfg.density_per_km / 1000.0 / cfg.lane_count();
    double ks = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      const double cdf = 1.0 - std::exp(-rate * gaps[i]);
      ks = std::max(ks, std::abs(cdf - static_cast<double>(i + 1) / gaps.size()));
      ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / gaps.size()));
    }
    CHECK(ks < 1.358 / std::sqrt(10000.0));  // 5% critical value
  }

  SUBCASE("zero-length road yields no vehicles") {
    FreewayConfig empty = cfg;
    empty.road_length_m = 0;
    RngStream rng(1);
    CHECK(generate_freeway(empty, rng).empty());
  }

  SUBCASE("lane geometry and speed signs") {
    RngStream rng(substream_seed(7, rng_purpose::kScenario));
    const auto vehicles = generate_freeway(cfg, rng);
    REQUIRE(!vehicles.empty());
    for (const Vehicle& v : vehicles) {
      CHECK(v.lane >= 0);
      CHECK(v.lane < 6);
      const bool forward = v.lane < 3;
      CHECK(v.position.y_m == lane_center_y(cfg, v.lane));
      CHECK((forward ? v.position.y_m > 0 : v.position.y_m < 0));
      CHECK((forward ? v.speed_mps > 0 : v.speed_mps < 0));
      CHECK(std::abs(v.speed_mps) >= cfg.speed_min_mps());
      CHECK(std::abs(v.speed_mps) <= cfg.speed_max_mps());
      CHECK(v.position.x_m >= 0);
      CHECK(v.position.x_m < cfg.road_length_m);
    }
    // ids unique
    std::vector<int> ids;
    for (const Vehicle& v : vehicles) ids.push_back(v.id);
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
  }
}

TEST_CASE("kinematics") {
  const FreewayConfig cfg;
  std::vector<Vehicle> vehicles{{0, {100.0, 5.75}, 0, 30.0}};

  SUBCASE("dt = 0 is the identity") {
    auto copy = vehicles;
    advance(copy, 0.0, cfg);
    CHECK(copy == vehicles);
  }

  SUBCASE("position advances by speed * dt") {
    advance(vehicles, 0.1, cfg);
    CHECK(vehicles[0].position.x_m == doctest::Approx(103.0).epsilon(1e-12));
  }

  SUBCASE("wraparound folds modulo the road length") {
    vehicles[0].position.x_m = cfg.road_length_m - 1.0;
    advance(vehicles, 0.1, cfg);
    CHECK(vehicles[0].position.x_m == doctest::Approx(2.0).epsilon(1e-9));
  }

  SUBCASE("without wraparound leaving vehicles are removed") {
    FreewayConfig open = cfg;
    open.wraparound = false;
    vehicles[0].position.x_m = open.road_length_m - 1.0;
    advance(vehicles, 0.1, open);
    CHECK(vehicles.empty());
  }
}

TEST_CASE("trace ingestion") {
  SUBCASE("empty file is an empty scenario") {
    const Trace trace = parse_trace("", 100);
    CHECK(trace.empty());
  }

  SUBCASE("hand-written file round-trips exactly") {
    const std::string text =
        "t_ms,vehicle_id,x_m,y_m,speed_mps\n"
        "0,1,10.5,2,27.5\n"
        "0,2,50,-2,-30\n"
        "100,1,13.25,2,27.5\n"
        "100,2,47,-2,-30\n"
        "200,1,16,2,27.5\n"
        "200,2,44,-2,-30\n";
    const Trace trace = parse_trace(text, 100);
    REQUIRE(trace.frame(0) != nullptr);
    REQUIRE(trace.frame(100) != nullptr);
    REQUIRE(trace.frame(200) != nullptr);
    CHECK(trace.frame(300) == nullptr);
    const auto& f0 = *trace.frame(0);
    REQUIRE(f0.size() == 2);
    CHECK(f0[0].id == 1);
    CHECK(f0[0].position.x_m == 10.5);
    CHECK(f0[0].position.y_m == 2.0);
    CHECK(f0[0].speed_mps == 27.5);
    CHECK(f0[1].id == 2);
    CHECK(trace.frame(200)->at(0).position.x_m == 16.0);
    CHECK(trace.first_t_ms() == 0);
    CHECK(trace.last_t_ms() == 200);
  }

  SUBCASE("missing column names the row and column") {
    const std::string text =
        "t_ms,vehicle_id,x_m,y_m,speed_mps\n"
        "0,1,10.5,2,27.5\n"
        "100,1,13.25,2\n";
    try {
      parse_trace(text, 100);
      FAIL("expected TraceError");
    } catch (const TraceError& e) {
      const std::string what = e.what();
      CHECK(what.find("row 3") != std::string::npos);
      CHECK(what.find("speed_mps") != std::string::npos);
    }
  }

  SUBCASE("non-monotonic timestamps rejected") {
    const std::string text =
        "t_ms,vehicle_id,x_m,y_m,speed_mps\n"
        "100,1,1,0,0\n"
        "0,1,1,0,0\n";
    CHECK_THROWS_WITH_AS(parse_trace(text, 100), doctest::Contains("row 3"),
                         TraceError);
  }

  SUBCASE("duplicate (t, id) rejected") {
    const std::string text =
        "t_ms,vehicle_id,x_m,y_m,speed_mps\n"
        "0,5,1,0,0\n"
        "0,5,2,0,0\n";
    CHECK_THROWS_WITH_AS(parse_trace(text, 100), doctest::Contains("duplicate"),
                         TraceError);
  }

  SUBCASE("timestamps must align to the window") {
    const std::string text =
        "t_ms,vehicle_id,x_m,y_m,speed_mps\n"
        "50,1,1,0,0\n";
    CHECK_THROWS_AS(parse_trace(text, 100), TraceError);
  }

  SUBCASE("garbage numbers rejected with the column name") {
    const std::string text =
        "t_ms,vehicle_id,x_m,y_m,speed_mps\n"
        "0,1,abc,0,0\n";
    CHECK_THROWS_WITH_AS(parse_trace(text, 100), doctest::Contains("x_m"), TraceError);
  }
}
