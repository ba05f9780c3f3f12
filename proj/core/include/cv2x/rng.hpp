#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cv2x {

/// splitmix64 output function. Good mixing, trivially seedable, and fully
/// portable, which keeps simulation results byte-identical across platforms
/// (the standard library distributions are implementation-defined).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives the initial state of an independent substream from the root seed
/// and up to three key components (purpose, entity id, window). Streams are
/// a pure function of their key, so evaluation order never matters.
constexpr std::uint64_t substream_seed(std::uint64_t root, std::uint64_t purpose,
                                       std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = mix64(root ^ 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ purpose);
  s = mix64(s ^ a);
  s = mix64(s ^ b);
  return s;
}

namespace rng_purpose {
inline constexpr std::uint64_t kScenario = 1;
inline constexpr std::uint64_t kInitReservation = 2;
inline constexpr std::uint64_t kReselect = 3;
inline constexpr std::uint64_t kShadowing = 4;
}  // namespace rng_purpose

/// Deterministic splitmix64 stream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n). Modulo bias is below 2^-32 for any n that fits here.
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(next_u64() % n);
  }

  /// N(0, sigma^2) via Box-Muller; consumes two uniforms per call.
  double next_normal(double sigma) {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Exp(rate) via inversion.
  double next_exponential(double rate) {
    return -std::log(1.0 - next_double()) / rate;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cv2x
