#pragma once

// Journaled key-value state shared by all ledger modules. Keys are namespaced
// by module. The store keeps a 32-byte state root incrementally: the XOR of
// keccak256(module || key || value) over all live slots. XOR folding makes
// every update O(1) and keeps the root order-independent, so it can be
// recomputed from a full scan and compared in tests.
//
// Writes inside a transaction frame are journaled; rollback_frame() restores
// every touched slot (and the root) to its pre-frame value.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "examledger/bytes.hpp"
#include "examledger/types.hpp"

namespace examledger {

struct SlotKey {
  TargetModule module;
  Bytes key;

  auto operator<=>(const SlotKey&) const = default;
};

class StateStore {
 public:
  std::optional<Bytes> get(TargetModule m, ByteSpan key) const;
  bool contains(TargetModule m, ByteSpan key) const;

  // Returns true when the slot did not exist before (fresh write).
  bool put(TargetModule m, ByteSpan key, Bytes value);

  void begin_frame();
  void commit_frame();
  void rollback_frame();
  bool in_frame() const { return frame_active_; }

  const Hash256& root() const { return root_; }
  Hash256 recompute_root() const;  // full scan; for verification only

  std::size_t slot_count() const { return slots_.size(); }
  void for_each(const std::function<void(TargetModule, ByteSpan, ByteSpan)>& fn) const;

 private:
  Hash256 slot_digest(const SlotKey& k, const Bytes& value) const;
  void xor_root(const Hash256& h);
  void raw_set(const SlotKey& k, Bytes value);
  void raw_erase(const SlotKey& k);

  std::map<SlotKey, Bytes> slots_;
  Hash256 root_{};

  struct JournalEntry {
    SlotKey key;
    std::optional<Bytes> prior;  // nullopt: slot did not exist before the frame
  };
  std::vector<JournalEntry> journal_;
  bool frame_active_ = false;
};

}  // namespace examledger
