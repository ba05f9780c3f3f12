#include "cv2x/grid.hpp"

#include <doctest.h>

using namespace cv2x;

TEST_CASE("total subchannel count") {
  CHECK(total_subchannels({3, 100, 30, 100}) == 300);
  CHECK(total_subchannels({1, 1, 30, 1}) == 1);
  CHECK(total_subchannels({4, 100, 30, 100}) == 400);
}

TEST_CASE("linear index corners") {
  const GridConfig cfg;
  CHECK(linear_index({1, 1}, cfg) == 0);
  CHECK(linear_index({cfg.sub_bands, cfg.subframes_per_window}, cfg) ==
        total_subchannels(cfg) - 1);
  CHECK_THROWS_AS(linear_index({0, 1}, cfg), std::out_of_range);
  CHECK_THROWS_AS(linear_index({1, cfg.subframes_per_window + 1}, cfg),
                  std::out_of_range);
  CHECK_THROWS_AS(from_linear(-1, cfg), std::out_of_range);
  CHECK_THROWS_AS(from_linear(total_subchannels(cfg), cfg), std::out_of_range);
}

TEST_CASE("flat index is a bijection over the full default grid") {
  const GridConfig cfg;
  std::vector<bool> seen(total_subchannels(cfg), false);
  for (int f = 1; f <= cfg.sub_bands; ++f) {
    for (int k = 1; k <= cfg.subframes_per_window; ++k) {
      const SubchannelId id{f, k};
      const int idx = linear_index(id, cfg);
      CHECK(!seen[idx]);
      seen[idx] = true;
      CHECK(from_linear(idx, cfg) == id);
    }
  }
}

TEST_CASE("same_subframe matches the k coordinate") {
  CHECK(same_subframe({1, 7}, {3, 7}));
  CHECK(!same_subframe({2, 7}, {2, 8}));
}

TEST_CASE("grid validation") {
  CHECK_NOTHROW(validate(GridConfig{}));
  CHECK_THROWS_AS(validate(GridConfig{0, 100, 30, 100}), std::invalid_argument);
  CHECK_THROWS_AS(validate(GridConfig{3, 100, 30, 200}), std::invalid_argument);
}
