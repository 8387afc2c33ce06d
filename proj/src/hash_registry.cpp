#include "examledger/hash_registry.hpp"

#include "examledger/exam_lifecycle.hpp"
#include "examledger/rbac.hpp"

namespace examledger::registry {

namespace {

constexpr TargetModule kModule = TargetModule::HASH_REGISTRY;

ScriptRecord decode_record(std::string_view script_id, const Bytes& v) {
  Decoder d{ByteSpan(v)};
  ScriptRecord rec;
  rec.script_id = std::string(script_id);
  rec.exam_id = d.u64();
  rec.content_hash = d.hash();
  rec.registered_by = d.address();
  rec.ledger_seq = d.u64();
  d.expect_done();
  return rec;
}

// register_script(examId, scriptId, contentHash, student)
//
// The student argument is only consulted for the enrollment guard; nothing
// derived from it is written or logged.
void register_script(ExecutionContext& ctx, std::uint64_t exam_id,
                     const std::string& script_id, const Hash256& content_hash,
                     const Address& student) {
  if (!rbac::has_role(ctx, ctx.sender(), Role::ADMIN)) throw Revert(Err::NotAdmin);
  if (!is_valid_script_id(script_id)) throw Revert(Err::InvalidScriptId);
  if (lifecycle::state_of(ctx, exam_id) != ExamState::ACTIVE) {
    throw Revert(Err::WrongState);
  }
  if (!rbac::is_student_enrolled(ctx, exam_id, student)) {
    throw Revert(Err::NotEnrolled);
  }
  if (ctx.sget(kModule, script_key(script_id))) {
    throw Revert(Err::DuplicateScriptId);
  }

  std::uint64_t position = lifecycle::bump_script_count(ctx, exam_id);
  Encoder rec;
  rec.u64(exam_id).hash(content_hash).address(ctx.sender()).u64(ctx.seq());
  ctx.sput(kModule, script_key(script_id), rec.take());
  ctx.sput(kModule, index_key(exam_id, position),
           Encoder{}.str(script_id).take());

  Encoder data;
  data.u64(exam_id).str(script_id).hash(content_hash);
  ctx.emit("HashRegistered",
           {ctx.keccak(std::string_view("HashRegistered")),
            ctx.keccak(std::string_view(script_id))},
           data.take());
}

}  // namespace

bool is_valid_script_id(std::string_view id) {
  if (id.size() != 19) return false;
  if (id.substr(0, 3) != "TS_") return false;
  for (char c : id.substr(3)) {
    bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!hex) return false;
  }
  return true;
}

Bytes script_key(std::string_view script_id) {
  Encoder e;
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>("script:"), 7));
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>(script_id.data()),
                 script_id.size()));
  return e.take();
}

Bytes index_key(std::uint64_t exam_id, std::uint64_t position) {
  Encoder e;
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>("idx:"), 4));
  e.u64(exam_id).u64(position);
  return e.take();
}

ScriptRecord record_of(ExecutionContext& ctx, std::string_view script_id) {
  auto v = ctx.sget(kModule, script_key(script_id));
  if (!v) throw Revert(Err::UnknownScript);
  return decode_record(script_id, *v);
}

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args) {
  if (op == kOpRegisterScript) {
    std::uint64_t exam_id = args.u64();
    std::string script_id = args.str();
    Hash256 content_hash = args.hash();
    Address student = args.address();
    args.expect_done();
    register_script(ctx, exam_id, script_id, content_hash, student);
  } else {
    throw Revert(Err::UnknownOp);
  }
}

bool script_exists(const StateStore& store, std::string_view script_id) {
  return store.contains(kModule, script_key(script_id));
}

Hash256 script_hash(const StateStore& store, std::string_view script_id) {
  return script_record(store, script_id).content_hash;
}

ScriptRecord script_record(const StateStore& store, std::string_view script_id) {
  auto v = store.get(kModule, script_key(script_id));
  if (!v) throw QueryError(Err::UnknownScript);
  return decode_record(script_id, *v);
}

std::vector<std::string> scripts_for_exam(const StateStore& store,
                                          std::uint64_t exam_id) {
  std::vector<std::string> out;
  for (std::uint64_t i = 0;; ++i) {
    auto v = store.get(kModule, index_key(exam_id, i));
    if (!v) break;
    Decoder d{ByteSpan(*v)};
    out.push_back(d.str());
  }
  return out;
}

}  // namespace examledger::registry
