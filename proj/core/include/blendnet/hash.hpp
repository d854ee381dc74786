#pragma once

#include <cstdint>
#include <string_view>

namespace blendnet {

// 64-bit FNV-1a over a little-endian canonical byte encoding. Fingerprints
// and atom codes must be bit-identical across platforms, so all multi-byte
// values are fed low byte first regardless of host endianness.
class Fnv1a64 {
 public:
  static constexpr std::uint64_t kOffset = 1469598103934665603ULL;
  static constexpr std::uint64_t kPrime = 1099511628211ULL;

  Fnv1a64& add_u8(std::uint8_t v) {
    state_ = (state_ ^ v) * kPrime;
    return *this;
  }

  Fnv1a64& add_u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) add_u8(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }

  Fnv1a64& add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) add_u8(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }

  Fnv1a64& add_i32(std::int32_t v) { return add_u32(static_cast<std::uint32_t>(v)); }

  Fnv1a64& add_bytes(std::string_view bytes) {
    for (char c : bytes) add_u8(static_cast<std::uint8_t>(c));
    return *this;
  }

  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = kOffset;
};

}  // namespace blendnet
