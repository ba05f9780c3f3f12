#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cv2x/engine.hpp"

namespace cv2x {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the flat `key = value` config format ('#' comments, lists
/// comma-separated). Keys are named after the usual simulation-parameter
/// symbols (alpha, p_keep, gamma_rsrp_dbm, t_sps_set, ...); an empty file
/// yields the defaults. Unknown keys and invariant violations raise
/// ConfigError with named diagnostics.
SimConfig parse_config_text(std::string_view text,
                            const std::string& source_name = "<config>");
SimConfig parse_config_file(const std::filesystem::path& path);

/// Canonical serialization of a config: every key, fixed order, shortest
/// round-trip number formatting. parse(echo(cfg)) == cfg.
std::string echo_config(const SimConfig& cfg);

}  // namespace cv2x
