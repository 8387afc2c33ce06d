#include "examledger/aead.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace examledger::aead {

namespace {

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

void check(int ok, const char* what) {
  if (ok != 1) throw std::runtime_error(std::string("openssl: ") + what);
}

}  // namespace

Sealed seal(ByteSpan key, ByteSpan nonce, ByteSpan plaintext) {
  if (key.size() != kKeyLen) throw std::invalid_argument("aead key must be 32 bytes");
  if (nonce.size() != kNonceLen) throw std::invalid_argument("aead nonce must be 12 bytes");

  CtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("openssl: ctx alloc");
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                           nonce.data()),
        "encrypt init");

  Sealed out;
  out.ciphertext.resize(plaintext.size());
  int len = 0;
  if (!plaintext.empty()) {
    check(EVP_EncryptUpdate(ctx.get(), out.ciphertext.data(), &len,
                            plaintext.data(), static_cast<int>(plaintext.size())),
          "encrypt update");
  }
  int final_len = 0;
  check(EVP_EncryptFinal_ex(ctx.get(), out.ciphertext.data() + len, &final_len),
        "encrypt final");
  out.ciphertext.resize(static_cast<std::size_t>(len + final_len));
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagLen,
                            out.tag.data()),
        "get tag");
  return out;
}

std::optional<Bytes> open(ByteSpan key, ByteSpan nonce, ByteSpan ciphertext,
                          ByteSpan tag) {
  if (key.size() != kKeyLen || nonce.size() != kNonceLen || tag.size() != kTagLen) {
    return std::nullopt;
  }

  CtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("openssl: ctx alloc");
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                         nonce.data()) != 1) {
    return std::nullopt;
  }

  Bytes plain(ciphertext.size());
  int len = 0;
  if (!ciphertext.empty()) {
    if (EVP_DecryptUpdate(ctx.get(), plain.data(), &len, ciphertext.data(),
                          static_cast<int>(ciphertext.size())) != 1) {
      return std::nullopt;
    }
  }
  // GCM: the tag check happens in DecryptFinal; failure means tampering.
  Bytes tag_copy(tag.begin(), tag.end());
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagLen,
                          tag_copy.data()) != 1) {
    return std::nullopt;
  }
  int final_len = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + len, &final_len) != 1) {
    return std::nullopt;
  }
  plain.resize(static_cast<std::size_t>(len + final_len));
  return plain;
}

}  // namespace examledger::aead
