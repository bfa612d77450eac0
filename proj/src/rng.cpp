#include "gadgetforge/rng.hpp"

#include <stdexcept>

namespace gforge {

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::uniform: bound must be positive");
  // Reject draws from the final partial block so every value is equally likely.
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  for (;;) {
    std::uint64_t x = next_u64();
    if (x < limit) return x % bound;
  }
}

BigInt Rng::uniform_big(const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::uniform_big: bound must be positive");
  if (bound <= (std::numeric_limits<std::uint64_t>::max)()) {
    return BigInt(uniform(static_cast<std::uint64_t>(bound)));
  }
  const std::size_t bits = msb(bound) + 1;
  const std::size_t words = (bits + 63) / 64;
  for (;;) {
    BigInt x = 0;
    for (std::size_t i = 0; i < words; ++i) {
      x <<= 64;
      x |= BigInt(next_u64());
    }
    x >>= (words * 64 - bits);
    if (x < bound) return x;
  }
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace gforge
