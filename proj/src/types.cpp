#include "examledger/types.hpp"

namespace examledger {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::NONE: return "NONE";
    case Role::ADMIN: return "ADMIN";
    case Role::EXAMINER: return "EXAMINER";
    case Role::SCRUTINIZER: return "SCRUTINIZER";
    case Role::STUDENT: return "STUDENT";
  }
  return "NONE";
}

std::string_view to_string(ExamState s) {
  switch (s) {
    case ExamState::CREATED: return "CREATED";
    case ExamState::ACTIVE: return "ACTIVE";
    case ExamState::SUBMITTED: return "SUBMITTED";
    case ExamState::SCRUTINIZED: return "SCRUTINIZED";
    case ExamState::COMPLETED: return "COMPLETED";
  }
  return "CREATED";
}

std::string_view to_string(MarkStatus s) {
  switch (s) {
    case MarkStatus::SUBMITTED: return "SUBMITTED";
    case MarkStatus::REVISED: return "REVISED";
    case MarkStatus::PUBLISHED: return "PUBLISHED";
  }
  return "SUBMITTED";
}

std::string_view to_string(TargetModule m) {
  switch (m) {
    case TargetModule::RBAC: return "RBAC";
    case TargetModule::EXAM_LIFECYCLE: return "EXAM_LIFECYCLE";
    case TargetModule::HASH_REGISTRY: return "HASH_REGISTRY";
    case TargetModule::RESULT_AUDIT: return "RESULT_AUDIT";
    case TargetModule::ZKP: return "ZKP";
  }
  return "RBAC";
}

std::optional<Role> parse_role(std::string_view s) {
  for (auto r : {Role::NONE, Role::ADMIN, Role::EXAMINER, Role::SCRUTINIZER, Role::STUDENT})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

std::optional<ExamState> parse_exam_state(std::string_view s) {
  for (auto st : {ExamState::CREATED, ExamState::ACTIVE, ExamState::SUBMITTED,
                  ExamState::SCRUTINIZED, ExamState::COMPLETED})
    if (s == to_string(st)) return st;
  return std::nullopt;
}

std::optional<TargetModule> parse_module(std::string_view s) {
  for (auto m : {TargetModule::RBAC, TargetModule::EXAM_LIFECYCLE, TargetModule::HASH_REGISTRY,
                 TargetModule::RESULT_AUDIT, TargetModule::ZKP})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

std::string_view reason(Err e) {
  switch (e) {
    case Err::UnknownModule: return "Unknown module";
    case Err::UnknownOp: return "Unknown operation";
    case Err::NotAdmin: return "Caller is not Admin";
    case Err::InvalidAddress: return "Invalid address";
    case Err::OnlyAdminEnrolls: return "Only Admin can enroll students";
    case Err::NotStudent: return "Address is not a registered Student";
    case Err::DuplicateExam: return "Exam already exists";
    case Err::UnknownExam: return "Unknown exam";
    case Err::IllegalTransition: return "Illegal state transition";
    case Err::WrongState: return "Operation not allowed in current exam state";
    case Err::DuplicateScriptId: return "Script ID already registered";
    case Err::NotEnrolled: return "Student is not enrolled for this exam";
    case Err::UnknownScript: return "Unknown script";
    case Err::InvalidScriptId: return "Invalid script id";
    case Err::NotExaminer: return "Caller is not Examiner";
    case Err::NotScrutinizer: return "Caller is not Scrutinizer";
    case Err::AlreadySubmitted: return "Marks already submitted";
    case Err::MarksOutOfRange: return "Marks out of range";
    case Err::EmptyJustification: return "Justification must not be empty";
    case Err::AlreadyPublished: return "Result already published";
    case Err::UnknownMarkRecord: return "No marks recorded";
    case Err::NotFinalized: return "Results not finalized";
    case Err::LengthMismatch: return "Marks and credits length mismatch";
    case Err::DuplicateCommitment: return "Commitment already exists";
    case Err::DuplicateCriteria: return "Criteria ID already used";
    case Err::NegativeThreshold: return "Criteria thresholds must be non-negative";
    case Err::UnknownCommitment: return "Unknown commitment";
    case Err::UnknownCriteria: return "Unknown criteria";
    case Err::CommitmentMismatch: return "Commitment mismatch";
    case Err::NotProofOwner: return "Prover must be the committed student";
    case Err::AlreadyProven: return "Eligibility already proven";
    case Err::NoOutcome: return "No eligibility outcome recorded";
    case Err::EmptyInput: return "Empty input";
    case Err::BadKeyLength: return "Key must be 32 bytes";
    case Err::UnknownBlob: return "Blob not found in store";
    case Err::HashMismatch: return "Stored content does not match ledger anchor";
    case Err::AuthFailure: return "Ciphertext authentication failed";
    case Err::AlreadyDeployed: return "Contract already deployed";
    case Err::TooFewPoints: return "Too few points for a fit";
  }
  return "Unknown error";
}

void GasSchedule::validate() const {
  for (auto v : {tx_base, sstore_new, sstore_update, sload, log_base, log_topic, log_byte,
                 hash_word}) {
    if (v == 0) throw std::invalid_argument("gas schedule entries must be strictly positive");
  }
}

void EngineConfig::validate() const {
  gas.validate();
  for (auto v : {deploy_gas_rbac, deploy_gas_lifecycle, deploy_gas_registry, deploy_gas_audit}) {
    if (v == 0) throw std::invalid_argument("deployment gas must be strictly positive");
  }
  if (max_marks == 0) throw std::invalid_argument("max_marks must be strictly positive");
}

}  // namespace examledger
