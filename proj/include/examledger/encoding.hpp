#pragma once

// Canonical byte encoding used for transaction payloads, stored records, and
// chain hashing: fields concatenated in declaration order, integers big-endian
// fixed-width, variable-length data length-prefixed with u32. Equal logical
// values always encode to identical bytes.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "examledger/bytes.hpp"

namespace examledger {

struct DecodeError : std::runtime_error {
  DecodeError() : std::runtime_error("malformed encoding") {}
  explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

class Encoder {
 public:
  Encoder& u8(std::uint8_t v) {
    buf_.push_back(v);
    return *this;
  }
  Encoder& u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  Encoder& u64(std::uint64_t v) {
    for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  Encoder& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  Encoder& raw(ByteSpan b) {
    buf_.insert(buf_.end(), b.begin(), b.end());
    return *this;
  }
  Encoder& address(const Address& a) { return raw(ByteSpan(a.value.data(), a.value.size())); }
  Encoder& hash(const Hash256& h) { return raw(ByteSpan(h.data(), h.size())); }
  Encoder& bytes(ByteSpan b) {
    u32(static_cast<std::uint32_t>(b.size()));
    return raw(b);
  }
  Encoder& str(std::string_view s) {
    return bytes(ByteSpan(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }
  Encoder& i64_list(const std::vector<std::int64_t>& vs) {
    u32(static_cast<std::uint32_t>(vs.size()));
    for (auto v : vs) i64(v);
    return *this;
  }

  Bytes take() { return std::move(buf_); }
  const Bytes& view() const { return buf_; }

 private:
  Bytes buf_;
};

class Decoder {
 public:
  explicit Decoder(ByteSpan data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  Address address() {
    need(20);
    Address a;
    std::copy(data_.begin() + pos_, data_.begin() + pos_ + 20, a.value.begin());
    pos_ += 20;
    return a;
  }
  Hash256 hash() {
    need(32);
    Hash256 h;
    std::copy(data_.begin() + pos_, data_.begin() + pos_ + 32, h.begin());
    pos_ += 32;
    return h;
  }
  Bytes bytes() {
    auto n = u32();
    need(n);
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
  }
  std::string str() {
    auto b = bytes();
    return std::string(b.begin(), b.end());
  }
  std::vector<std::int64_t> i64_list() {
    auto n = u32();
    std::vector<std::int64_t> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(i64());
    return out;
  }

  bool done() const { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) throw DecodeError{};
  }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw DecodeError{};
  }
  ByteSpan data_;
  std::size_t pos_ = 0;
};

}  // namespace examledger
