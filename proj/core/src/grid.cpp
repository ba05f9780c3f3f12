#include "cv2x/grid.hpp"

#include <stdexcept>
#include <string>

namespace cv2x {

int total_subchannels(const GridConfig& cfg) {
  return cfg.sub_bands * cfg.subframes_per_window;
}

bool in_bounds(SubchannelId id, const GridConfig& cfg) {
  return id.sub_band >= 1 && id.sub_band <= cfg.sub_bands && id.subframe >= 1 &&
         id.subframe <= cfg.subframes_per_window;
}

int linear_index(SubchannelId id, const GridConfig& cfg) {
  if (!in_bounds(id, cfg)) {
    throw std::out_of_range("subchannel (" + std::to_string(id.sub_band) + "," +
                            std::to_string(id.subframe) + ") outside " +
                            std::to_string(cfg.sub_bands) + "x" +
                            std::to_string(cfg.subframes_per_window) + " grid");
  }
  return (id.sub_band - 1) * cfg.subframes_per_window + (id.subframe - 1);
}

SubchannelId from_linear(int index, const GridConfig& cfg) {
  if (index < 0 || index >= total_subchannels(cfg)) {
    throw std::out_of_range("flat subchannel index " + std::to_string(index) +
                            " outside [0," +
                            std::to_string(total_subchannels(cfg)) + ")");
  }
  return SubchannelId{index / cfg.subframes_per_window + 1,
                      index % cfg.subframes_per_window + 1};
}

void validate(const GridConfig& cfg) {
  if (cfg.sub_bands < 1) throw std::invalid_argument("sub_bands must be >= 1");
  if (cfg.subframes_per_window < 1)
    throw std::invalid_argument("subframes_per_window must be >= 1");
  if (cfg.rbs_per_subchannel < 1)
    throw std::invalid_argument("rbs_per_subchannel must be >= 1");
  if (cfg.window_ms != cfg.subframes_per_window)
    throw std::invalid_argument(
        "window_ms must equal subframes_per_window (1 ms subframes)");
}

}  // namespace cv2x
