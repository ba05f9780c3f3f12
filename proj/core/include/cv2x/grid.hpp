#pragma once

#include <compare>

namespace cv2x {

/// Time/frequency layout of one scheduling window: F sub-bands by K
/// subframes, one subchannel per cell. With 1 ms subframes K equals
/// window_ms numerically.
struct GridConfig {
  int sub_bands = 3;             // F
  int subframes_per_window = 100;  // K
  int rbs_per_subchannel = 30;
  int window_ms = 100;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// Subchannel coordinate. Indices are 1-based (f in [1..F], k in [1..K]);
/// only the flat-index plumbing below is 0-based.
struct SubchannelId {
  int sub_band = 1;  // f
  int subframe = 1;  // k

  friend bool operator==(const SubchannelId&, const SubchannelId&) = default;
  friend auto operator<=>(const SubchannelId&, const SubchannelId&) = default;
};

int total_subchannels(const GridConfig& cfg);

bool in_bounds(SubchannelId id, const GridConfig& cfg);

/// Flat index in [0, F*K); sub-band major, subframe varying fastest.
/// Throws std::out_of_range for ids outside the grid.
int linear_index(SubchannelId id, const GridConfig& cfg);
SubchannelId from_linear(int index, const GridConfig& cfg);

inline bool same_subframe(SubchannelId a, SubchannelId b) {
  return a.subframe == b.subframe;
}

void validate(const GridConfig& cfg);

}  // namespace cv2x
