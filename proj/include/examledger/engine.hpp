#pragma once

// The ledger engine: an append-only, hash-chained transaction log over a
// journaled state store. Every submitted transaction executes atomically —
// either all of its writes commit, or on revert none do — and always appends
// exactly one entry:
//
//   entry_hash = keccak256(prev_entry_hash || enc(tx) || enc(receipt))
//
// with 32 zero bytes standing in for the predecessor of entry 0. A chain can
// be dumped to JSONL, parsed back, and replayed through a fresh engine;
// replay re-executes every transaction and fails loudly if any receipt or
// entry hash diverges from the stored one.

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "examledger/exam_lifecycle.hpp"
#include "examledger/execution.hpp"
#include "examledger/hash_registry.hpp"
#include "examledger/result_audit.hpp"
#include "examledger/state_store.hpp"
#include "examledger/types.hpp"
#include "examledger/zkp_eligibility.hpp"

namespace examledger {

struct VerifyResult {
  bool valid = true;
  std::uint64_t first_bad_seq = 0;  // meaningful only when !valid
};

struct ModuleGas {
  std::uint64_t tx_count = 0;
  std::uint64_t gas = 0;
};

struct GasReport {
  std::map<TargetModule, ModuleGas> workflow;  // per module, deployments excluded
  std::uint64_t workflow_tx = 0;
  std::uint64_t workflow_gas = 0;
  std::uint64_t deployment_count = 0;
  std::uint64_t deployment_gas = 0;
  std::uint64_t failed_tx = 0;  // REVERTED workflow transactions
  std::uint64_t total_tx = 0;
  std::uint64_t total_gas = 0;
};

class Engine {
 public:
  explicit Engine(EngineConfig config = EngineConfig{});

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Appends the four synthetic contract-deployment entries. Only valid on an
  // empty chain; each entry carries the configured fixed deployment gas.
  void deploy_contracts();

  // Executes a fully formed transaction. tx.seq must equal the current chain
  // length. Never throws on guard violations — those come back as REVERTED
  // receipts; throws only on malformed engine usage (bad seq).
  Receipt submit(const Transaction& tx);

  // Builds a transaction (next seq, clock timestamp) and submits it.
  Receipt call(const Address& sender, TargetModule module, std::string op_name,
               Bytes payload);

  // --- typed transaction helpers -----------------------------------------
  Receipt grant_role(const Address& sender, const Address& target, Role role);
  Receipt revoke_role(const Address& sender, const Address& target);
  Receipt rbac_enroll_student(const Address& sender, std::uint64_t exam_id,
                              const Address& student);
  Receipt create_exam(const Address& sender, std::uint64_t exam_id,
                      const std::string& title);
  Receipt advance_exam_state(const Address& sender, std::uint64_t exam_id,
                             ExamState target);
  Receipt enroll(const Address& sender, std::uint64_t exam_id,
                 const Address& student);
  Receipt register_script(const Address& sender, std::uint64_t exam_id,
                          const std::string& script_id,
                          const Hash256& content_hash, const Address& student);
  Receipt submit_marks(const Address& sender, std::uint64_t exam_id,
                       const std::string& script_id, std::int64_t marks);
  Receipt revise_marks(const Address& sender, std::uint64_t exam_id,
                       const std::string& script_id, std::int64_t new_marks,
                       const std::string& justification);
  Receipt publish_result(const Address& sender, std::uint64_t exam_id,
                         const std::string& script_id);
  Receipt zkp_commit(const Address& sender, const Address& student,
                     const zkp::AcademicRecord& record, const Hash256& salt);
  Receipt zkp_post_criteria(const Address& sender, const zkp::CriteriaSet& c);
  Receipt zkp_prove(const Address& sender, const Address& student,
                    std::uint64_t criteria_id, const zkp::AcademicRecord& record,
                    const Hash256& salt);

  // --- views (no gas, no ledger entries) ----------------------------------
  Role role_of(const Address& who) const;
  bool has_role(const Address& who, Role role) const;
  bool is_student_enrolled(std::uint64_t exam_id, const Address& student) const;
  ExamState exam_state(std::uint64_t exam_id) const;
  lifecycle::ExamInfo exam_info(std::uint64_t exam_id) const;
  bool script_exists(const std::string& script_id) const;
  Hash256 script_hash(const std::string& script_id) const;
  registry::ScriptRecord script_record(const std::string& script_id) const;
  std::vector<std::string> scripts_for_exam(std::uint64_t exam_id) const;
  audit::ResultView result(const std::string& script_id) const;
  std::vector<audit::AuditEntryView> audit_trail(const std::string& script_id) const;
  std::string grade_sheet_csv(std::uint64_t exam_id) const;
  std::optional<Hash256> commitment_of(const Address& student) const;
  zkp::CriteriaSet criteria_of(std::uint64_t criteria_id) const;
  bool eligibility_outcome(std::uint64_t criteria_id, const Address& student) const;

  // --- chain ---------------------------------------------------------------
  const std::vector<ChainEntry>& chain() const { return chain_; }
  VerifyResult verify_chain() const { return verify_entries(chain_); }
  static VerifyResult verify_entries(const std::vector<ChainEntry>& entries);
  GasReport gas_report() const;

  void dump_jsonl(std::ostream& os) const;
  static std::vector<ChainEntry> parse_jsonl(std::istream& is);
  // Re-executes entries on this (empty) engine; throws std::runtime_error on
  // the first receipt or hash divergence.
  void replay(const std::vector<ChainEntry>& entries);

  // Canonical byte encodings used for entry hashing.
  static Bytes encode_tx(const Transaction& tx);
  static Bytes encode_receipt(const Receipt& r);

  // --- introspection -------------------------------------------------------
  const EngineConfig& config() const { return config_; }
  const StateStore& state() const { return store_; }
  Hash256 state_root() const { return store_.root(); }
  Hash256 recompute_state_root() const { return store_.recompute_root(); }
  const TxTrace& last_trace() const { return last_trace_; }
  void set_clock(std::function<std::uint64_t()> clock) { clock_ = std::move(clock); }

 private:
  void dispatch(ExecutionContext& ctx, const Transaction& tx);
  Receipt execute(const Transaction& tx);

  EngineConfig config_;
  StateStore store_;
  std::vector<ChainEntry> chain_;
  std::function<std::uint64_t()> clock_;
  TxTrace last_trace_{};
};

}  // namespace examledger
