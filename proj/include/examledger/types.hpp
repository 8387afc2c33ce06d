#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "examledger/bytes.hpp"

namespace examledger {

// ---------------------------------------------------------------------------
// Actors and lifecycle
// ---------------------------------------------------------------------------

enum class Role : std::uint8_t { NONE = 0, ADMIN, EXAMINER, SCRUTINIZER, STUDENT };

enum class ExamState : std::uint8_t {
  CREATED = 0,
  ACTIVE,
  SUBMITTED,
  SCRUTINIZED,
  COMPLETED,
};

enum class MarkStatus : std::uint8_t { SUBMITTED = 0, REVISED, PUBLISHED };

enum class TargetModule : std::uint8_t {
  RBAC = 0,
  EXAM_LIFECYCLE,
  HASH_REGISTRY,
  RESULT_AUDIT,
  ZKP,
};

std::string_view to_string(Role r);
std::string_view to_string(ExamState s);
std::string_view to_string(MarkStatus s);
std::string_view to_string(TargetModule m);
std::optional<Role> parse_role(std::string_view s);
std::optional<ExamState> parse_exam_state(std::string_view s);
std::optional<TargetModule> parse_module(std::string_view s);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Every guard violation inside a transaction handler maps to one of these;
// the revert reason string is what the receipt and the CLI print.
enum class Err {
  // generic dispatch
  UnknownModule,
  UnknownOp,
  // rbac
  NotAdmin,
  InvalidAddress,
  OnlyAdminEnrolls,
  NotStudent,
  // exam lifecycle
  DuplicateExam,
  UnknownExam,
  IllegalTransition,
  WrongState,
  // hash registry
  DuplicateScriptId,
  NotEnrolled,
  UnknownScript,
  InvalidScriptId,
  // result audit
  NotExaminer,
  NotScrutinizer,
  AlreadySubmitted,
  MarksOutOfRange,
  EmptyJustification,
  AlreadyPublished,
  UnknownMarkRecord,
  NotFinalized,
  // zkp eligibility
  LengthMismatch,
  DuplicateCommitment,
  DuplicateCriteria,
  NegativeThreshold,
  UnknownCommitment,
  UnknownCriteria,
  CommitmentMismatch,
  NotProofOwner,
  AlreadyProven,
  NoOutcome,
  // blob store
  EmptyInput,
  BadKeyLength,
  UnknownBlob,
  HashMismatch,
  AuthFailure,
  // engine bootstrap
  AlreadyDeployed,
  // analysis helpers
  TooFewPoints,
};

std::string_view reason(Err e);

// Thrown by transaction handlers; the engine converts it into a REVERTED
// receipt and rolls back all state written by the handler.
struct Revert : std::runtime_error {
  Err code;
  explicit Revert(Err e) : std::runtime_error(std::string(reason(e))), code(e) {}
};

// Thrown by view operations and off-chain services (no receipt involved).
struct QueryError : std::runtime_error {
  Err code;
  explicit QueryError(Err e) : std::runtime_error(std::string(reason(e))), code(e) {}
};

// ---------------------------------------------------------------------------
// Ledger records
// ---------------------------------------------------------------------------

struct Transaction {
  std::uint64_t seq = 0;
  Address sender;
  TargetModule target_module = TargetModule::RBAC;
  std::string op_name;
  Bytes payload;               // canonical argument encoding
  std::uint64_t timestamp = 0;  // milliseconds
};

struct Event {
  std::string name;
  std::vector<Hash256> topics;
  Bytes data;

  bool operator==(const Event&) const = default;
};

enum class TxStatus : std::uint8_t { SUCCESS = 0, REVERTED };

struct Receipt {
  std::uint64_t tx_seq = 0;
  TxStatus status = TxStatus::SUCCESS;
  std::string revert_reason;  // non-empty iff REVERTED
  std::uint64_t gas_used = 0;
  std::vector<Event> events;
  Hash256 state_root_hash{};
};

struct ChainEntry {
  Transaction tx;
  Receipt receipt;
  Hash256 entry_hash{};  // keccak256(prev_hash || enc(tx) || enc(receipt))
};

// ---------------------------------------------------------------------------
// Gas
// ---------------------------------------------------------------------------

// Defaults approximate EVM costs after the access-list change: fresh slot
// writes dominate, reads are an order of magnitude cheaper.
struct GasSchedule {
  std::uint64_t tx_base = 21'000;
  std::uint64_t sstore_new = 20'000;    // per newly written 32-byte slot
  std::uint64_t sstore_update = 5'000;  // per overwritten slot
  std::uint64_t sload = 2'100;          // per slot read
  std::uint64_t log_base = 375;
  std::uint64_t log_topic = 375;
  std::uint64_t log_byte = 8;
  std::uint64_t hash_word = 6;  // per 32-byte word hashed

  void validate() const;  // throws std::invalid_argument on a non-positive entry
};

struct EngineConfig {
  GasSchedule gas;
  Address deployer;  // bootstrap grant privilege, set once
  std::uint64_t max_marks = 100;
  // Synthetic per-contract deployment gas, charged to the four bootstrap
  // entries so reports can separate deployment cost from workflow cost.
  std::uint64_t deploy_gas_rbac = 1'183'982;
  std::uint64_t deploy_gas_lifecycle = 1'600'000;
  std::uint64_t deploy_gas_registry = 1'800'000;
  std::uint64_t deploy_gas_audit = 3'800'000;

  void validate() const;
};

}  // namespace examledger
