#pragma once

// Keccak-256 with the original multi-rate padding (domain byte 0x01), the
// variant used by Ethereum. Not SHA3-256, which pads with 0x06.

#include "examledger/bytes.hpp"

namespace examledger {

Hash256 keccak256(ByteSpan data);

inline Hash256 keccak256(const Bytes& data) {
  return keccak256(ByteSpan(data.data(), data.size()));
}

inline Hash256 keccak256(std::string_view s) {
  return keccak256(ByteSpan(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

}  // namespace examledger
