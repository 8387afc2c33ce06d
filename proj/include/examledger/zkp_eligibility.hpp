#pragma once

// Commit-reveal eligibility proofs. An admin commits a student's academic
// record as a single keccak256 hash; the student later reopens the record
// against published criteria and the ledger stores only the boolean outcome.
// Neither the commitment nor the proof ever writes a grade, a CGPA or a
// credit value into state or events — the hash is a hiding proxy for a real
// zero-knowledge circuit, and its binding property comes from collision
// resistance.

#include <string_view>
#include <vector>

#include "examledger/encoding.hpp"
#include "examledger/execution.hpp"

namespace examledger::zkp {

inline constexpr std::string_view kOpCommitRecord = "commitRecord";
inline constexpr std::string_view kOpPostCriteria = "postCriteria";
inline constexpr std::string_view kOpProveEligibility = "proveEligibility";

// CGPA is carried as a scaled integer (value * 100) so all arithmetic is
// exact; 400 means a 4.00 CGPA.
struct AcademicRecord {
  std::int64_t scaled_cgpa = 0;
  std::vector<std::int64_t> marks;
  std::vector<std::int64_t> credits;  // parallel to marks
};

struct CriteriaSet {
  std::uint64_t criteria_id = 0;
  std::int64_t min_scaled_cgpa = 0;
  std::int64_t min_grade_threshold = 0;  // floor for the lowest single mark
  std::int64_t min_total_credits = 0;
  bool require_all_pass = false;
  std::int64_t pass_mark = 0;
};

// keccak256 over the record serialized as 32-byte big-endian words:
//   cgpa || len(marks) || marks... || len(credits) || credits... || salt
Hash256 commitment_hash(const AcademicRecord& record, const Hash256& salt);

// Pure eligibility predicate, shared by the handler and by tests.
bool eligible(const AcademicRecord& record, const CriteriaSet& criteria);

Bytes commitment_key(const Address& student);
Bytes criteria_key(std::uint64_t criteria_id);
Bytes outcome_key(std::uint64_t criteria_id, const Address& student);

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args);

// Payload builders (shared by engine facade and CLI).
Bytes encode_commit(const Address& student, const AcademicRecord& record,
                    const Hash256& salt);
Bytes encode_criteria(const CriteriaSet& criteria);
Bytes encode_prove(const Address& student, std::uint64_t criteria_id,
                   const AcademicRecord& record, const Hash256& salt);

// Uncharged views.
std::optional<Hash256> commitment_of(const StateStore& store,
                                     const Address& student);
CriteriaSet criteria_of(const StateStore& store, std::uint64_t criteria_id);
// Throws QueryError(NoOutcome) when the student never proved against the set.
bool eligibility_outcome(const StateStore& store, std::uint64_t criteria_id,
                         const Address& student);

}  // namespace examledger::zkp
