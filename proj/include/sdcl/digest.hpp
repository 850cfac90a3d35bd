#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace sdcl {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                                std::uint64_t h = kFnvOffset) noexcept {
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

constexpr std::uint64_t fnv1a64(std::string_view text, std::uint64_t h = kFnvOffset) noexcept {
  for (char c : text) {
    h ^= static_cast<std::uint8_t>(c);
    h *= kFnvPrime;
  }
  return h;
}

/// 16 lowercase hex digits.
std::string to_hex(std::uint64_t v);

/// Content digest of a text blob, as used for artifact directory names.
inline std::string digest_of(std::string_view text) { return to_hex(fnv1a64(text)); }

}  // namespace sdcl
