#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace mdst {

/// FNV-1a variant that folds whole 64-bit words (plus a xor-shift so high
/// bits reach the low bits). Stable across platforms and runs.
class Digest {
 public:
  Digest& add(std::uint64_t x) {
    h_ ^= x;
    h_ *= 0x100000001b3ULL;
    h_ ^= h_ >> 29;
    return *this;
  }
  Digest& add(std::int64_t x) { return add(static_cast<std::uint64_t>(x)); }
  Digest& add(int x) { return add(static_cast<std::uint64_t>(static_cast<std::int64_t>(x))); }
  Digest& add(std::uint32_t x) { return add(static_cast<std::uint64_t>(x)); }
  Digest& add(bool x) { return add(static_cast<std::uint64_t>(x ? 1 : 0)); }
  Digest& add(double x) { return add(std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x)); }
  Digest& add(std::string_view s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
    return add(static_cast<std::uint64_t>(s.size()));
  }
  [[nodiscard]] std::uint64_t value() const { return h_; }
  [[nodiscard]] std::string hex() const { return to_hex(h_); }

  static std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace mdst
