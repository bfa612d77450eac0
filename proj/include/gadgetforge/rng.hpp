#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace gforge {

using BigInt = boost::multiprecision::cpp_int;

/// Counter-based deterministic generator. Every random draw in the tool is a
/// pure function of (seed, label chain, counter), so a run is reproducible
/// from its recorded seed alone. Child generators are derived by label; the
/// stream of a child is independent of how much of the parent was consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ kRootSalt)) {}

  /// Derive a sub-generator for a named sampling step.
  Rng child(std::string_view label) const {
    Rng r(0);
    r.key_ = mix(key_ ^ fnv1a(label));
    r.counter_ = 0;
    return r;
  }

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform in [0, bound), bound > 0. Rejection sampling, unbiased.
  std::uint64_t uniform(std::uint64_t bound);

  /// Uniform in [0, bound) for arbitrary-size bound > 0.
  BigInt uniform_big(const BigInt& bound);

  /// Uniform over bit patterns of length `bits` (used as raw digit source).
  bool next_bool() { return next_u64() & 1u; }

 private:
  static constexpr std::uint64_t kRootSalt = 0x67616467666f7267ULL;

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return h;
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// FNV-1a digest of a byte string, reported as 16 hex digits. Used to tie
/// reduction reports to their inputs.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace gforge
