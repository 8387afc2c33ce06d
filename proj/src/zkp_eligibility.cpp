#include "examledger/zkp_eligibility.hpp"

#include <algorithm>
#include <numeric>

#include "examledger/keccak.hpp"
#include "examledger/rbac.hpp"

namespace examledger::zkp {

namespace {

constexpr TargetModule kModule = TargetModule::ZKP;

void append_word(Bytes& out, std::int64_t v) {
  // 32-byte big-endian word; negative values never reach here (validated).
  out.insert(out.end(), 24, 0);
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

Bytes commitment_preimage(const AcademicRecord& r, const Hash256& salt) {
  Bytes pre;
  pre.reserve(32 * (3 + r.marks.size() + r.credits.size()) + 32);
  append_word(pre, r.scaled_cgpa);
  append_word(pre, static_cast<std::int64_t>(r.marks.size()));
  for (auto m : r.marks) append_word(pre, m);
  append_word(pre, static_cast<std::int64_t>(r.credits.size()));
  for (auto c : r.credits) append_word(pre, c);
  pre.insert(pre.end(), salt.begin(), salt.end());
  return pre;
}

void validate_record_shape(const AcademicRecord& r) {
  if (r.marks.empty() || r.marks.size() != r.credits.size()) {
    throw Revert(Err::LengthMismatch);
  }
}

void commit_record(ExecutionContext& ctx, const Address& student,
                   const AcademicRecord& record, const Hash256& salt) {
  if (!rbac::has_role(ctx, ctx.sender(), Role::ADMIN)) throw Revert(Err::NotAdmin);
  validate_record_shape(record);
  if (ctx.sget(kModule, commitment_key(student))) {
    throw Revert(Err::DuplicateCommitment);
  }
  Hash256 h = ctx.keccak(ByteSpan(commitment_preimage(record, salt)));
  ctx.sput(kModule, commitment_key(student), Bytes(h.begin(), h.end()));
  Encoder data;
  data.address(student).hash(h);
  ctx.emit("CommitmentStored",
           {ctx.keccak(std::string_view("CommitmentStored"))}, data.take());
}

void post_criteria(ExecutionContext& ctx, const CriteriaSet& c) {
  // Anyone may post criteria (a scholarship board, an employer). The role
  // lookup is informational: it records whether an Admin posted, and doubles
  // as the guard check that precedes the write.
  bool admin_posted = rbac::has_role(ctx, ctx.sender(), Role::ADMIN);
  if (c.min_scaled_cgpa < 0 || c.min_grade_threshold < 0 ||
      c.min_total_credits < 0 || c.pass_mark < 0) {
    throw Revert(Err::NegativeThreshold);
  }
  if (ctx.sget(kModule, criteria_key(c.criteria_id))) {
    throw Revert(Err::DuplicateCriteria);
  }
  Encoder v;
  v.i64(c.min_scaled_cgpa)
      .i64(c.min_grade_threshold)
      .i64(c.min_total_credits)
      .u8(c.require_all_pass ? 1 : 0)
      .i64(c.pass_mark);
  ctx.sput(kModule, criteria_key(c.criteria_id), v.take());
  Encoder data;
  data.u64(c.criteria_id)
      .i64(c.min_scaled_cgpa)
      .i64(c.min_grade_threshold)
      .i64(c.min_total_credits)
      .u8(c.require_all_pass ? 1 : 0)
      .i64(c.pass_mark)
      .u8(admin_posted ? 1 : 0);
  ctx.emit("CriteriaPosted", {ctx.keccak(std::string_view("CriteriaPosted"))},
           data.take());
}

CriteriaSet decode_criteria(std::uint64_t id, const Bytes& v) {
  Decoder d{ByteSpan(v)};
  CriteriaSet c;
  c.criteria_id = id;
  c.min_scaled_cgpa = d.i64();
  c.min_grade_threshold = d.i64();
  c.min_total_credits = d.i64();
  c.require_all_pass = d.u8() != 0;
  c.pass_mark = d.i64();
  d.expect_done();
  return c;
}

void prove_eligibility(ExecutionContext& ctx, const Address& student,
                       std::uint64_t criteria_id, const AcademicRecord& record,
                       const Hash256& salt) {
  if (!rbac::has_role(ctx, ctx.sender(), Role::STUDENT)) {
    throw Revert(Err::NotStudent);
  }
  if (ctx.sender() != student) throw Revert(Err::NotProofOwner);
  validate_record_shape(record);
  auto stored = ctx.sget(kModule, commitment_key(student));
  if (!stored) throw Revert(Err::UnknownCommitment);
  auto criteria_raw = ctx.sget(kModule, criteria_key(criteria_id));
  if (!criteria_raw) throw Revert(Err::UnknownCriteria);
  if (ctx.sget(kModule, outcome_key(criteria_id, student))) {
    throw Revert(Err::AlreadyProven);
  }
  Hash256 recomputed = ctx.keccak(ByteSpan(commitment_preimage(record, salt)));
  if (stored->size() != recomputed.size() ||
      !std::equal(recomputed.begin(), recomputed.end(), stored->begin())) {
    throw Revert(Err::CommitmentMismatch);
  }

  CriteriaSet criteria = decode_criteria(criteria_id, *criteria_raw);
  bool outcome = eligible(record, criteria);
  // Only the boolean lands on the ledger; the reopened record stays off-chain.
  ctx.sput(kModule, outcome_key(criteria_id, student),
           Bytes{static_cast<std::uint8_t>(outcome ? 1 : 0)});
  Encoder data;
  data.address(student).u64(criteria_id).u8(outcome ? 1 : 0);
  ctx.emit("EligibilityRecorded",
           {ctx.keccak(std::string_view("EligibilityRecorded"))}, data.take());
}

}  // namespace

Hash256 commitment_hash(const AcademicRecord& record, const Hash256& salt) {
  return keccak256(commitment_preimage(record, salt));
}

bool eligible(const AcademicRecord& record, const CriteriaSet& criteria) {
  if (record.scaled_cgpa < criteria.min_scaled_cgpa) return false;
  std::int64_t total_credits =
      std::accumulate(record.credits.begin(), record.credits.end(),
                      static_cast<std::int64_t>(0));
  if (total_credits < criteria.min_total_credits) return false;
  std::int64_t lowest =
      *std::min_element(record.marks.begin(), record.marks.end());
  if (lowest < criteria.min_grade_threshold) return false;
  if (criteria.require_all_pass && lowest < criteria.pass_mark) return false;
  return true;
}

Bytes commitment_key(const Address& student) {
  Encoder e;
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>("cm:"), 3));
  e.address(student);
  return e.take();
}

Bytes criteria_key(std::uint64_t criteria_id) {
  Encoder e;
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>("cr:"), 3));
  e.u64(criteria_id);
  return e.take();
}

Bytes outcome_key(std::uint64_t criteria_id, const Address& student) {
  Encoder e;
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>("out:"), 4));
  e.u64(criteria_id).address(student);
  return e.take();
}

Bytes encode_commit(const Address& student, const AcademicRecord& record,
                    const Hash256& salt) {
  Encoder e;
  e.address(student)
      .i64(record.scaled_cgpa)
      .i64_list(record.marks)
      .i64_list(record.credits)
      .hash(salt);
  return e.take();
}

Bytes encode_criteria(const CriteriaSet& c) {
  Encoder e;
  e.u64(c.criteria_id)
      .i64(c.min_scaled_cgpa)
      .i64(c.min_grade_threshold)
      .i64(c.min_total_credits)
      .u8(c.require_all_pass ? 1 : 0)
      .i64(c.pass_mark);
  return e.take();
}

Bytes encode_prove(const Address& student, std::uint64_t criteria_id,
                   const AcademicRecord& record, const Hash256& salt) {
  Encoder e;
  e.address(student)
      .u64(criteria_id)
      .i64(record.scaled_cgpa)
      .i64_list(record.marks)
      .i64_list(record.credits)
      .hash(salt);
  return e.take();
}

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args) {
  if (op == kOpCommitRecord) {
    Address student = args.address();
    AcademicRecord r;
    r.scaled_cgpa = args.i64();
    r.marks = args.i64_list();
    r.credits = args.i64_list();
    Hash256 salt = args.hash();
    args.expect_done();
    commit_record(ctx, student, r, salt);
  } else if (op == kOpPostCriteria) {
    CriteriaSet c;
    c.criteria_id = args.u64();
    c.min_scaled_cgpa = args.i64();
    c.min_grade_threshold = args.i64();
    c.min_total_credits = args.i64();
    c.require_all_pass = args.u8() != 0;
    c.pass_mark = args.i64();
    args.expect_done();
    post_criteria(ctx, c);
  } else if (op == kOpProveEligibility) {
    Address student = args.address();
    std::uint64_t criteria_id = args.u64();
    AcademicRecord r;
    r.scaled_cgpa = args.i64();
    r.marks = args.i64_list();
    r.credits = args.i64_list();
    Hash256 salt = args.hash();
    args.expect_done();
    prove_eligibility(ctx, student, criteria_id, r, salt);
  } else {
    throw Revert(Err::UnknownOp);
  }
}

std::optional<Hash256> commitment_of(const StateStore& store,
                                     const Address& student) {
  auto v = store.get(TargetModule::ZKP, commitment_key(student));
  if (!v || v->size() != 32) return std::nullopt;
  Hash256 h;
  std::copy(v->begin(), v->end(), h.begin());
  return h;
}

CriteriaSet criteria_of(const StateStore& store, std::uint64_t criteria_id) {
  auto v = store.get(TargetModule::ZKP, criteria_key(criteria_id));
  if (!v) throw QueryError(Err::UnknownCriteria);
  return decode_criteria(criteria_id, *v);
}

bool eligibility_outcome(const StateStore& store, std::uint64_t criteria_id,
                         const Address& student) {
  auto v = store.get(TargetModule::ZKP, outcome_key(criteria_id, student));
  if (!v) throw QueryError(Err::NoOutcome);
  return (*v)[0] != 0;
}

}  // namespace examledger::zkp
