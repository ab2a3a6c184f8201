#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string_view>

namespace hasard {

/// FNV-1a over explicitly fed fields; used for replay checkpoints and
/// determinism checks, never for security.
class Hasher {
public:
  void bytes(std::span<const std::uint8_t> data) {
    for (std::uint8_t b : data) {
      h_ ^= b;
      h_ *= 0x100000001B3ULL;
    }
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xFF;
      h_ *= 0x100000001B3ULL;
    }
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void boolean(bool b) { u64(b ? 1 : 0); }
  void str(std::string_view s) {
    for (char c : s) {
      h_ ^= static_cast<std::uint8_t>(c);
      h_ *= 0x100000001B3ULL;
    }
  }

  std::uint64_t value() const { return h_; }

private:
  std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

}  // namespace hasard
