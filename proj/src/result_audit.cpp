#include "examledger/result_audit.hpp"

#include <algorithm>

#include "examledger/exam_lifecycle.hpp"
#include "examledger/hash_registry.hpp"
#include "examledger/rbac.hpp"

namespace examledger::audit {

namespace {

constexpr TargetModule kModule = TargetModule::RESULT_AUDIT;

Bytes sid_key(const char* tag, std::size_t tag_len, std::string_view sid) {
  Encoder e;
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>(tag), tag_len));
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>(sid.data()), sid.size()));
  return e.take();
}

bool justification_is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

struct RecordMeta {
  std::uint64_t exam_id = 0;
  Address submitted_by;
};

std::optional<RecordMeta> read_meta(ExecutionContext& ctx, std::string_view sid) {
  auto v = ctx.sget(kModule, record_key(sid));
  if (!v) return std::nullopt;
  Decoder d{ByteSpan(*v)};
  RecordMeta m;
  m.exam_id = d.u64();
  m.submitted_by = d.address();
  return m;
}

std::int64_t read_marks(ExecutionContext& ctx, std::string_view sid) {
  auto v = ctx.sget(kModule, marks_key(sid));
  if (!v) throw std::logic_error("mark record missing marks slot");
  return Decoder(ByteSpan(*v)).i64();
}

MarkStatus read_status(ExecutionContext& ctx, std::string_view sid) {
  auto v = ctx.sget(kModule, status_key(sid));
  if (!v) throw std::logic_error("mark record missing status slot");
  return static_cast<MarkStatus>((*v)[0]);
}

std::uint64_t append_trail_entry(ExecutionContext& ctx, std::string_view sid,
                                 std::optional<std::int64_t> old_marks,
                                 std::int64_t new_marks,
                                 std::string_view justification) {
  auto cnt = ctx.sget(kModule, trail_count_key(sid));
  std::uint64_t index = cnt ? Decoder(ByteSpan(*cnt)).u64() : 0;
  Encoder e;
  e.u8(old_marks.has_value() ? 1 : 0);
  if (old_marks) e.i64(*old_marks);
  e.i64(new_marks).address(ctx.sender()).str(justification).u64(ctx.seq());
  ctx.sput(kModule, trail_entry_key(sid, index), e.take());
  ctx.sput(kModule, trail_count_key(sid), Encoder{}.u64(index + 1).take());
  return index;
}

void submit_marks(ExecutionContext& ctx, std::uint64_t exam_id,
                  const std::string& sid, std::int64_t marks,
                  std::uint64_t max_marks) {
  if (!rbac::has_role(ctx, ctx.sender(), Role::EXAMINER)) {
    throw Revert(Err::NotExaminer);
  }
  if (lifecycle::state_of(ctx, exam_id) != ExamState::SUBMITTED) {
    throw Revert(Err::WrongState);
  }
  auto script = registry::record_of(ctx, sid);  // reverts UnknownScript
  if (script.exam_id != exam_id) throw Revert(Err::UnknownScript);
  if (ctx.sget(kModule, record_key(sid))) throw Revert(Err::AlreadySubmitted);
  if (marks < 0 || marks > static_cast<std::int64_t>(max_marks)) {
    throw Revert(Err::MarksOutOfRange);
  }

  Encoder meta;
  meta.u64(exam_id).address(ctx.sender());
  ctx.sput(kModule, record_key(sid), meta.take());
  ctx.sput(kModule, marks_key(sid), Encoder{}.i64(marks).take());
  ctx.sput(kModule, status_key(sid),
           Bytes{static_cast<std::uint8_t>(MarkStatus::SUBMITTED)});
  append_trail_entry(ctx, sid, std::nullopt, marks, "");

  Encoder data;
  data.u64(exam_id).str(sid).i64(marks);
  ctx.emit("MarksSubmitted",
           {ctx.keccak(std::string_view("MarksSubmitted")),
            ctx.keccak(std::string_view(sid))},
           data.take());
}

void revise_marks(ExecutionContext& ctx, std::uint64_t exam_id,
                  const std::string& sid, std::int64_t new_marks,
                  const std::string& justification, std::uint64_t max_marks) {
  if (!rbac::has_role(ctx, ctx.sender(), Role::SCRUTINIZER)) {
    throw Revert(Err::NotScrutinizer);
  }
  auto meta = read_meta(ctx, sid);
  if (!meta || meta->exam_id != exam_id) throw Revert(Err::UnknownMarkRecord);
  // Publication finality outranks the lifecycle check: a revise attempt on a
  // published script reports AlreadyPublished even though the exam has moved
  // to COMPLETED by then.
  if (read_status(ctx, sid) == MarkStatus::PUBLISHED) {
    throw Revert(Err::AlreadyPublished);
  }
  if (lifecycle::state_of(ctx, exam_id) != ExamState::SCRUTINIZED) {
    throw Revert(Err::WrongState);
  }
  if (justification_is_blank(justification)) {
    throw Revert(Err::EmptyJustification);
  }
  if (new_marks < 0 || new_marks > static_cast<std::int64_t>(max_marks)) {
    throw Revert(Err::MarksOutOfRange);
  }

  std::int64_t old_marks = read_marks(ctx, sid);
  ctx.sput(kModule, marks_key(sid), Encoder{}.i64(new_marks).take());
  ctx.sput(kModule, status_key(sid),
           Bytes{static_cast<std::uint8_t>(MarkStatus::REVISED)});
  append_trail_entry(ctx, sid, old_marks, new_marks, justification);

  Encoder data;
  data.u64(exam_id).str(sid).i64(old_marks).i64(new_marks).str(justification);
  ctx.emit("MarksRevised",
           {ctx.keccak(std::string_view("MarksRevised")),
            ctx.keccak(std::string_view(sid))},
           data.take());
}

void publish_result(ExecutionContext& ctx, std::uint64_t exam_id,
                    const std::string& sid) {
  if (!rbac::has_role(ctx, ctx.sender(), Role::ADMIN)) throw Revert(Err::NotAdmin);
  if (lifecycle::state_of(ctx, exam_id) != ExamState::COMPLETED) {
    throw Revert(Err::WrongState);
  }
  auto meta = read_meta(ctx, sid);
  if (!meta || meta->exam_id != exam_id) throw Revert(Err::UnknownMarkRecord);
  if (read_status(ctx, sid) == MarkStatus::PUBLISHED) {
    throw Revert(Err::AlreadyPublished);
  }

  ctx.sput(kModule, status_key(sid),
           Bytes{static_cast<std::uint8_t>(MarkStatus::PUBLISHED)});

  Encoder data;
  data.u64(exam_id).str(sid).i64(read_marks(ctx, sid));
  ctx.emit("ResultPublished",
           {ctx.keccak(std::string_view("ResultPublished")),
            ctx.keccak(std::string_view(sid))},
           data.take());
}

}  // namespace

Bytes record_key(std::string_view sid) { return sid_key("mk:", 3, sid); }
Bytes marks_key(std::string_view sid) { return sid_key("marks:", 6, sid); }
Bytes status_key(std::string_view sid) { return sid_key("st:", 3, sid); }
Bytes trail_count_key(std::string_view sid) { return sid_key("acnt:", 5, sid); }

Bytes trail_entry_key(std::string_view sid, std::uint64_t index) {
  Encoder e;
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>("ae:"), 3));
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>(sid.data()), sid.size()));
  e.u64(index);
  return e.take();
}

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args) {
  std::uint64_t max_marks = ctx.config().max_marks;
  if (op == kOpSubmitMarks) {
    std::uint64_t exam_id = args.u64();
    std::string sid = args.str();
    std::int64_t marks = args.i64();
    args.expect_done();
    submit_marks(ctx, exam_id, sid, marks, max_marks);
  } else if (op == kOpReviseMarks) {
    std::uint64_t exam_id = args.u64();
    std::string sid = args.str();
    std::int64_t new_marks = args.i64();
    std::string justification = args.str();
    args.expect_done();
    revise_marks(ctx, exam_id, sid, new_marks, justification, max_marks);
  } else if (op == kOpPublishResult) {
    std::uint64_t exam_id = args.u64();
    std::string sid = args.str();
    args.expect_done();
    publish_result(ctx, exam_id, sid);
  } else {
    throw Revert(Err::UnknownOp);
  }
}

bool has_record(const StateStore& store, std::string_view sid) {
  return store.contains(kModule, record_key(sid));
}

ResultView result(const StateStore& store, std::string_view sid) {
  auto meta = store.get(kModule, record_key(sid));
  if (!meta) throw QueryError(Err::UnknownMarkRecord);
  Decoder d{ByteSpan(*meta)};
  ResultView r;
  r.script_id = std::string(sid);
  r.exam_id = d.u64();
  r.submitted_by = d.address();
  auto marks = store.get(kModule, marks_key(sid));
  r.marks = Decoder(ByteSpan(*marks)).i64();
  auto status = store.get(kModule, status_key(sid));
  r.status = static_cast<MarkStatus>((*status)[0]);
  auto cnt = store.get(kModule, trail_count_key(sid));
  std::uint64_t entries = cnt ? Decoder(ByteSpan(*cnt)).u64() : 0;
  r.revision_count = entries > 0 ? entries - 1 : 0;  // first entry = submission
  return r;
}

std::vector<AuditEntryView> audit_trail(const StateStore& store,
                                        std::string_view sid) {
  if (!has_record(store, sid)) throw QueryError(Err::UnknownMarkRecord);
  auto cnt = store.get(kModule, trail_count_key(sid));
  std::uint64_t entries = cnt ? Decoder(ByteSpan(*cnt)).u64() : 0;
  std::vector<AuditEntryView> out;
  out.reserve(entries);
  for (std::uint64_t i = 0; i < entries; ++i) {
    auto v = store.get(kModule, trail_entry_key(sid, i));
    if (!v) throw std::logic_error("audit trail entry missing");
    Decoder d{ByteSpan(*v)};
    AuditEntryView e;
    e.index = i;
    if (d.u8() != 0) e.old_marks = d.i64();
    e.new_marks = d.i64();
    e.actor = d.address();
    e.justification = d.str();
    e.ledger_seq = d.u64();
    d.expect_done();
    out.push_back(std::move(e));
  }
  return out;
}

std::string render_grade_sheet(const StateStore& store, std::uint64_t exam_id) {
  if (!lifecycle::exam_exists(store, exam_id)) {
    throw QueryError(Err::UnknownExam);
  }
  std::string csv = "script_id,marks,status,revision_count\n";
  for (const auto& sid : registry::scripts_for_exam(store, exam_id)) {
    if (!has_record(store, sid)) throw QueryError(Err::NotFinalized);
    ResultView r = result(store, sid);
    if (r.status != MarkStatus::PUBLISHED) throw QueryError(Err::NotFinalized);
    csv += sid;
    csv += ',';
    csv += std::to_string(r.marks);
    csv += ',';
    csv += to_string(r.status);
    csv += ',';
    csv += std::to_string(r.revision_count);
    csv += '\n';
  }
  return csv;
}

}  // namespace examledger::audit
