#pragma once

// Per-transaction execution context handed to module handlers. All storage
// access, event emission and hashing performed by a handler goes through
// here so gas is metered uniformly:
//
//   slots(v)       = max(1, ceil(len(v) / 32))
//   storage read   = sload * slots(stored value), or sload for a miss
//   storage write  = sstore_new * slots (fresh key) | sstore_update * slots
//   event          = log_base + log_topic * |topics| + log_byte * len(data)
//   keccak256      = hash_word * ceil(len / 32)
//
// The trace records how many role/enrollment guard checks ran and whether
// any write happened before the first one; tests use it to show every
// mutating operation is guarded before it touches state.

#include <cstdint>
#include <string>
#include <vector>

#include "examledger/bytes.hpp"
#include "examledger/state_store.hpp"
#include "examledger/types.hpp"

namespace examledger {

struct GasMeter {
  std::uint64_t used = 0;
  void charge(std::uint64_t amount) { used += amount; }
};

struct TxTrace {
  std::uint64_t guard_checks = 0;
  std::uint64_t writes_total = 0;
  std::uint64_t writes_before_first_guard = 0;
};

inline std::uint64_t storage_slots(std::size_t value_len) {
  if (value_len == 0) return 1;
  return (static_cast<std::uint64_t>(value_len) + 31) / 32;
}

class ExecutionContext {
 public:
  ExecutionContext(const Transaction& tx, StateStore& store, GasMeter& meter,
                   const EngineConfig& config, std::vector<Event>& events,
                   TxTrace& trace)
      : tx_(tx),
        store_(store),
        meter_(meter),
        config_(config),
        schedule_(config.gas),
        events_(events),
        trace_(trace) {}

  const Address& sender() const { return tx_.sender; }
  std::uint64_t seq() const { return tx_.seq; }
  std::uint64_t timestamp() const { return tx_.timestamp; }

  std::optional<Bytes> sget(TargetModule m, ByteSpan key) {
    auto v = store_.get(m, key);
    meter_.charge(schedule_.sload * (v ? storage_slots(v->size()) : 1));
    return v;
  }

  bool scontains(TargetModule m, ByteSpan key) {
    meter_.charge(schedule_.sload);
    return store_.contains(m, key);
  }

  void sput(TargetModule m, ByteSpan key, Bytes value) {
    std::uint64_t slots = storage_slots(value.size());
    bool fresh = store_.put(m, key, std::move(value));
    meter_.charge((fresh ? schedule_.sstore_new : schedule_.sstore_update) * slots);
    trace_.writes_total++;
    if (trace_.guard_checks == 0) trace_.writes_before_first_guard++;
  }

  void emit(std::string name, std::vector<Hash256> topics, Bytes data) {
    meter_.charge(schedule_.log_base + schedule_.log_topic * topics.size() +
                  schedule_.log_byte * data.size());
    events_.push_back(Event{std::move(name), std::move(topics), std::move(data)});
  }

  Hash256 keccak(ByteSpan data);
  Hash256 keccak(std::string_view s) {
    return keccak(ByteSpan(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }

  void note_guard_check() { trace_.guard_checks++; }

  const GasSchedule& schedule() const { return schedule_; }
  const EngineConfig& config() const { return config_; }
  GasMeter& meter() { return meter_; }

 private:
  const Transaction& tx_;
  StateStore& store_;
  GasMeter& meter_;
  const EngineConfig& config_;
  const GasSchedule& schedule_;
  std::vector<Event>& events_;
  TxTrace& trace_;
};

}  // namespace examledger
