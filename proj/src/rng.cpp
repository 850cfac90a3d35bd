#include "sdcl/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

namespace sdcl {

std::uint64_t SplitMix64::below(std::uint64_t n) noexcept {
  // Reject the low residue class that would bias r % n.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

double SplitMix64::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SplitMix64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = SplitMix64::mix(seed + SplitMix64::kIncrement);
  for (std::uint64_t tag : tags) {
    s = SplitMix64::mix(s ^ (tag + SplitMix64::kIncrement));
  }
  return SplitMix64(s);
}

std::vector<std::size_t> random_permutation(std::size_t n, SplitMix64& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace sdcl
