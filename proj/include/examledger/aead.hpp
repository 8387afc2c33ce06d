#pragma once

// AES-256-GCM, thin wrapper over OpenSSL EVP. open() returns nullopt on any
// authentication failure — callers decide how to surface it.

#include <array>
#include <optional>

#include "examledger/bytes.hpp"

namespace examledger::aead {

inline constexpr std::size_t kKeyLen = 32;
inline constexpr std::size_t kNonceLen = 12;
inline constexpr std::size_t kTagLen = 16;

struct Sealed {
  Bytes ciphertext;
  std::array<std::uint8_t, kTagLen> tag{};
};

Sealed seal(ByteSpan key, ByteSpan nonce, ByteSpan plaintext);
std::optional<Bytes> open(ByteSpan key, ByteSpan nonce, ByteSpan ciphertext,
                          ByteSpan tag);

}  // namespace examledger::aead
