#pragma once

// Splittable counter-based random stream.  Output j of a stream is a
// pure function of (key, j), and child streams derive their key from
// (parent key, child index), so any tree of logical tasks draws
// identical numbers regardless of execution order or thread count.

#include <cstdint>

namespace zistats {

namespace detail {

// SplitMix64 finalizer; bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed)
      : key_(detail::mix64(seed ^ 0x9E3779B97F4A7C15ULL)) {}

  // Independent stream for logical sub-task `index`.
  RandomStream child(std::uint64_t index) const {
    RandomStream c(0);
    c.key_ = detail::mix64(detail::mix64(key_ + 0xD1B54A32D192ED03ULL * (index + 1)) ^
                           0x8BB84B93962EACC9ULL);
    c.ctr_ = 0;
    return c;
  }

  std::uint64_t next_u64() {
    ctr_ += 1;
    return detail::mix64(key_ + 0x9E3779B97F4A7C15ULL * ctr_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace zistats
