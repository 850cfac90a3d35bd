#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace sdcl {

/// SplitMix64: a 64-bit counter-based generator. The state is a counter
/// advanced by the golden-ratio increment; each output is a bijective mix of
/// the counter. Output sequences are fully specified by the seed and are
/// identical on every platform, which the standard distributions are not.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kIncrement = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() noexcept {
    state_ += kIncrement;
    return mix(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); unbiased via rejection. n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

  /// Standard normal via Box-Muller (one draw per call, second value discarded).
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

/// Independent stream for (seed, tags...). Distinct tag tuples give
/// unrelated sequences; used so e.g. epoch shuffles never share state with
/// weight initialization.
SplitMix64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

/// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> random_permutation(std::size_t n, SplitMix64& rng);

// Stream tags. Fixed forever: changing one changes every artifact digest.
namespace stream_tag {
inline constexpr std::uint64_t kInit = 0x1;
inline constexpr std::uint64_t kEpochOrder = 0x2;
inline constexpr std::uint64_t kPlanted = 0x3;
inline constexpr std::uint64_t kSplit = 0x4;
inline constexpr std::uint64_t kKFold = 0x5;
inline constexpr std::uint64_t kCScore = 0x6;
inline constexpr std::uint64_t kRandomOrdering = 0x7;
}  // namespace stream_tag

}  // namespace sdcl
