#pragma once

#include <cstdint>
#include <string_view>

namespace domlab {

// Counter-based generator: every draw is a pure function of (seed, stream
// label, index).  Sampling loops address draws by index, so the parallel
// schedule and the thread count cannot change any value drawn.  The stream id
// recorded in reports must change if this scheme ever changes.
inline constexpr const char* kRngId = "splitmix64-counter/1";

namespace rngdetail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace rngdetail

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label)
      : key_(rngdetail::mix64(rngdetail::mix64(seed + rngdetail::kGolden) ^
                              rngdetail::fnv1a(label))) {}

  // Independent child stream, e.g. one per Monte Carlo sample.
  RngStream derive(std::uint64_t salt) const {
    return RngStream(rngdetail::mix64(key_ ^ rngdetail::mix64(salt + 0x51ED2701)));
  }

  std::uint64_t bits(std::uint64_t index) const {
    return rngdetail::mix64(rngdetail::mix64(key_ + rngdetail::kGolden * (index + 1)));
  }

  // Uniform in [0,1), 53-bit resolution.
  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

  // Uniform in [-1,1).
  double symmetric(std::uint64_t index) const { return 2.0 * uniform(index) - 1.0; }

 private:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
};

}  // namespace domlab
