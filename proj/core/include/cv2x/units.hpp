#pragma once

#include <cmath>
#include <limits>

namespace cv2x {

/// Marker for per-RB power that could not be sensed (half-duplex blocked
/// subframes). Propagates through sums and averages and compares above any
/// finite power, which is exactly the exclusion semantics the selection
/// stages rely on.
inline constexpr double kSaturatedPower = std::numeric_limits<double>::infinity();

inline bool is_saturated(double power_mw) { return std::isinf(power_mw); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

}  // namespace cv2x
