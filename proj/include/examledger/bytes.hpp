#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace examledger {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

using Hash256 = std::array<std::uint8_t, 32>;

// Hashes and addresses print as 0x-prefixed lowercase hex everywhere.
std::string to_hex(ByteSpan data);
std::string to_hex0x(ByteSpan data);
std::optional<Bytes> from_hex(std::string_view hex);  // accepts optional 0x prefix

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

inline std::string to_string(ByteSpan b) {
  return std::string(b.begin(), b.end());
}

// 20-byte account identifier. The all-zero address is reserved and never
// assigned to an actor.
struct Address {
  std::array<std::uint8_t, 20> value{};

  static Address zero() { return Address{}; }
  bool is_zero() const {
    for (auto b : value)
      if (b != 0) return false;
    return true;
  }

  auto operator<=>(const Address&) const = default;

  std::string hex() const { return to_hex0x(ByteSpan(value.data(), value.size())); }
  static std::optional<Address> parse(std::string_view hex);
};

inline std::string hash_hex(const Hash256& h) {
  return to_hex0x(ByteSpan(h.data(), h.size()));
}
std::optional<Hash256> parse_hash(std::string_view hex);

}  // namespace examledger
