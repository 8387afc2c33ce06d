#include "examledger/state_store.hpp"

#include <stdexcept>

#include "examledger/keccak.hpp"

namespace examledger {

std::optional<Bytes> StateStore::get(TargetModule m, ByteSpan key) const {
  SlotKey k{m, Bytes(key.begin(), key.end())};
  auto it = slots_.find(k);
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

bool StateStore::contains(TargetModule m, ByteSpan key) const {
  SlotKey k{m, Bytes(key.begin(), key.end())};
  return slots_.find(k) != slots_.end();
}

bool StateStore::put(TargetModule m, ByteSpan key, Bytes value) {
  SlotKey k{m, Bytes(key.begin(), key.end())};
  auto it = slots_.find(k);
  bool fresh = (it == slots_.end());
  if (frame_active_) {
    journal_.push_back({k, fresh ? std::nullopt : std::optional<Bytes>(it->second)});
  }
  raw_set(k, std::move(value));
  return fresh;
}

void StateStore::begin_frame() {
  if (frame_active_) throw std::logic_error("state frame already active");
  frame_active_ = true;
  journal_.clear();
}

void StateStore::commit_frame() {
  if (!frame_active_) throw std::logic_error("no active state frame");
  frame_active_ = false;
  journal_.clear();
}

void StateStore::rollback_frame() {
  if (!frame_active_) throw std::logic_error("no active state frame");
  // Undo newest-first so a slot touched twice lands on its pre-frame value.
  for (auto it = journal_.rbegin(); it != journal_.rend(); ++it) {
    if (it->prior.has_value()) {
      raw_set(it->key, std::move(*it->prior));
    } else {
      raw_erase(it->key);
    }
  }
  frame_active_ = false;
  journal_.clear();
}

Hash256 StateStore::recompute_root() const {
  Hash256 acc{};
  for (const auto& [k, v] : slots_) {
    Hash256 d = slot_digest(k, v);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= d[i];
  }
  return acc;
}

void StateStore::for_each(
    const std::function<void(TargetModule, ByteSpan, ByteSpan)>& fn) const {
  for (const auto& [k, v] : slots_) {
    fn(k.module, ByteSpan(k.key), ByteSpan(v));
  }
}

Hash256 StateStore::slot_digest(const SlotKey& k, const Bytes& value) const {
  Bytes preimage;
  preimage.reserve(1 + k.key.size() + value.size());
  preimage.push_back(static_cast<std::uint8_t>(k.module));
  preimage.insert(preimage.end(), k.key.begin(), k.key.end());
  preimage.insert(preimage.end(), value.begin(), value.end());
  return keccak256(preimage);
}

void StateStore::xor_root(const Hash256& h) {
  for (std::size_t i = 0; i < root_.size(); ++i) root_[i] ^= h[i];
}

void StateStore::raw_set(const SlotKey& k, Bytes value) {
  auto it = slots_.find(k);
  if (it != slots_.end()) {
    xor_root(slot_digest(k, it->second));
    it->second = std::move(value);
    xor_root(slot_digest(k, it->second));
  } else {
    xor_root(slot_digest(k, value));
    slots_.emplace(k, std::move(value));
  }
}

void StateStore::raw_erase(const SlotKey& k) {
  auto it = slots_.find(k);
  if (it == slots_.end()) return;
  xor_root(slot_digest(k, it->second));
  slots_.erase(it);
}

}  // namespace examledger
