#include "examledger/exam_lifecycle.hpp"

#include "examledger/rbac.hpp"

namespace examledger::lifecycle {

namespace {

constexpr TargetModule kModule = TargetModule::EXAM_LIFECYCLE;

Bytes prefixed_key(const char* tag, std::size_t tag_len, std::uint64_t exam_id) {
  Encoder e;
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>(tag), tag_len));
  e.u64(exam_id);
  return e.take();
}

ExamState decode_state_byte(const Bytes& v) {
  if (v.size() != 1 || v[0] > static_cast<std::uint8_t>(ExamState::COMPLETED)) {
    throw std::logic_error("corrupt exam state slot");
  }
  return static_cast<ExamState>(v[0]);
}

void create_exam(ExecutionContext& ctx, std::uint64_t exam_id,
                 const std::string& title) {
  if (!rbac::has_role(ctx, ctx.sender(), Role::ADMIN)) throw Revert(Err::NotAdmin);
  if (ctx.sget(kModule, state_key(exam_id))) throw Revert(Err::DuplicateExam);
  Encoder meta;
  meta.str(title).address(ctx.sender());
  ctx.sput(kModule, meta_key(exam_id), meta.take());
  ctx.sput(kModule, state_key(exam_id),
           Bytes{static_cast<std::uint8_t>(ExamState::CREATED)});
  ctx.sput(kModule, script_count_key(exam_id), Encoder{}.u64(0).take());
  Encoder data;
  data.u64(exam_id).str(title).address(ctx.sender());
  ctx.emit("ExamCreated", {ctx.keccak(std::string_view("ExamCreated"))},
           data.take());
}

void advance_state(ExecutionContext& ctx, std::uint64_t exam_id,
                   ExamState target) {
  if (!rbac::has_role(ctx, ctx.sender(), Role::ADMIN)) throw Revert(Err::NotAdmin);
  ExamState cur = state_of(ctx, exam_id);
  // Single forward step only; no skips, no backward moves, no self-loops.
  if (static_cast<std::uint8_t>(target) !=
      static_cast<std::uint8_t>(cur) + 1) {
    throw Revert(Err::IllegalTransition);
  }
  ctx.sput(kModule, state_key(exam_id),
           Bytes{static_cast<std::uint8_t>(target)});
  Encoder data;
  data.u64(exam_id)
      .u8(static_cast<std::uint8_t>(cur))
      .u8(static_cast<std::uint8_t>(target));
  ctx.emit("ExamStateAdvanced",
           {ctx.keccak(std::string_view("ExamStateAdvanced"))}, data.take());
}

void enroll(ExecutionContext& ctx, std::uint64_t exam_id,
            const Address& student) {
  ExamState cur = state_of(ctx, exam_id);
  if (cur != ExamState::CREATED && cur != ExamState::ACTIVE) {
    throw Revert(Err::WrongState);
  }
  // Role checks (admin sender, student target) live in the rbac module.
  rbac::enroll_student(ctx, exam_id, student);
}

}  // namespace

Bytes state_key(std::uint64_t exam_id) { return prefixed_key("state:", 6, exam_id); }
Bytes meta_key(std::uint64_t exam_id) { return prefixed_key("meta:", 5, exam_id); }
Bytes script_count_key(std::uint64_t exam_id) {
  return prefixed_key("scripts:", 8, exam_id);
}

ExamState state_of(ExecutionContext& ctx, std::uint64_t exam_id) {
  auto v = ctx.sget(kModule, state_key(exam_id));
  if (!v) throw Revert(Err::UnknownExam);
  return decode_state_byte(*v);
}

bool exam_exists(ExecutionContext& ctx, std::uint64_t exam_id) {
  return ctx.scontains(kModule, state_key(exam_id));
}

std::uint64_t bump_script_count(ExecutionContext& ctx, std::uint64_t exam_id) {
  auto v = ctx.sget(kModule, script_count_key(exam_id));
  std::uint64_t count = 0;
  if (v) count = Decoder(ByteSpan(*v)).u64();
  ctx.sput(kModule, script_count_key(exam_id), Encoder{}.u64(count + 1).take());
  return count;
}

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args) {
  if (op == kOpCreateExam) {
    std::uint64_t exam_id = args.u64();
    std::string title = args.str();
    args.expect_done();
    create_exam(ctx, exam_id, title);
  } else if (op == kOpAdvanceState) {
    std::uint64_t exam_id = args.u64();
    auto state_byte = args.u8();
    args.expect_done();
    if (state_byte > static_cast<std::uint8_t>(ExamState::COMPLETED)) {
      throw DecodeError("exam state byte out of range");
    }
    advance_state(ctx, exam_id, static_cast<ExamState>(state_byte));
  } else if (op == kOpEnroll) {
    std::uint64_t exam_id = args.u64();
    Address student = args.address();
    args.expect_done();
    enroll(ctx, exam_id, student);
  } else {
    throw Revert(Err::UnknownOp);
  }
}

bool exam_exists(const StateStore& store, std::uint64_t exam_id) {
  return store.contains(TargetModule::EXAM_LIFECYCLE, state_key(exam_id));
}

ExamState exam_state(const StateStore& store, std::uint64_t exam_id) {
  auto v = store.get(TargetModule::EXAM_LIFECYCLE, state_key(exam_id));
  if (!v) throw QueryError(Err::UnknownExam);
  return decode_state_byte(*v);
}

ExamInfo exam_info(const StateStore& store, std::uint64_t exam_id) {
  auto state = store.get(TargetModule::EXAM_LIFECYCLE, state_key(exam_id));
  if (!state) throw QueryError(Err::UnknownExam);
  ExamInfo info;
  info.exam_id = exam_id;
  info.state = decode_state_byte(*state);
  auto meta = store.get(TargetModule::EXAM_LIFECYCLE, meta_key(exam_id));
  if (meta) {
    Decoder d{ByteSpan(*meta)};
    info.title = d.str();
    info.created_by = d.address();
  }
  auto count = store.get(TargetModule::EXAM_LIFECYCLE, script_count_key(exam_id));
  if (count) info.script_count = Decoder(ByteSpan(*count)).u64();
  return info;
}

}  // namespace examledger::lifecycle
