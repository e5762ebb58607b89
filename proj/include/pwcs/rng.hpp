#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pwcs {

// Splittable stream generator: every consumer derives its stream from
// (master seed, label path), so draws never depend on scheduling order.
// The underlying sequence is splitmix64 (Steele et al.), a counter-based
// generator: output i is a bijective mix of state0 + i*gamma.

namespace detail {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) : state_(detail::mix64(seed)) {}

  /// Stream for (seed, label path), e.g. RngStream(seed, {kBatch, trial}).
  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : RngStream(seed) {
    for (auto label : path) state_ = detail::mix64(state_ ^ (detail::mix64(label) + detail::kGamma));
  }

  /// Independent child stream; does not advance this stream.
  RngStream child(std::uint64_t label) const {
    RngStream s(*this);
    s.state_ = detail::mix64(state_ ^ (detail::mix64(label) + detail::kGamma));
    return s;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    state_ += detail::kGamma;
    return detail::mix64(state_);
  }

  double normal() { return std::normal_distribution<double>{}(*this); }

  /// Uniform on [0,1).
  double uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>{0, n - 1}(*this);
  }

 private:
  std::uint64_t state_;
};

// Labels for the top-level stream split; keeping them in one place avoids
// accidental stream collisions between modules.
namespace stream {
inline constexpr std::uint64_t kDictionary = 1;
inline constexpr std::uint64_t kPhi0 = 2;
inline constexpr std::uint64_t kBatch = 3;
inline constexpr std::uint64_t kNoise = 4;
inline constexpr std::uint64_t kDesign = 5;
}  // namespace stream

}  // namespace pwcs
