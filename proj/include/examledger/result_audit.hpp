#pragma once

// Marks, revisions and publication, with a per-script append-only audit
// trail. Every revision must carry a justification; published results are
// final — no mutating operation succeeds on a published script.

#include <optional>
#include <string_view>
#include <vector>

#include "examledger/encoding.hpp"
#include "examledger/execution.hpp"

namespace examledger::audit {

inline constexpr std::string_view kOpSubmitMarks = "submitMarks";
inline constexpr std::string_view kOpReviseMarks = "reviseMarks";
inline constexpr std::string_view kOpPublishResult = "publishResult";

struct ResultView {
  std::string script_id;
  std::uint64_t exam_id = 0;
  std::int64_t marks = 0;
  MarkStatus status = MarkStatus::SUBMITTED;
  std::uint64_t revision_count = 0;
  Address submitted_by;
};

struct AuditEntryView {
  std::uint64_t index = 0;
  std::optional<std::int64_t> old_marks;  // empty for the initial submission
  std::int64_t new_marks = 0;
  Address actor;
  std::string justification;  // empty for the initial submission
  std::uint64_t ledger_seq = 0;
};

Bytes record_key(std::string_view script_id);
Bytes marks_key(std::string_view script_id);
Bytes status_key(std::string_view script_id);
Bytes trail_count_key(std::string_view script_id);
Bytes trail_entry_key(std::string_view script_id, std::uint64_t index);

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args);

// Uncharged views. result/audit_trail throw QueryError(UnknownMarkRecord)
// when no marks were ever submitted for the script.
bool has_record(const StateStore& store, std::string_view script_id);
ResultView result(const StateStore& store, std::string_view script_id);
std::vector<AuditEntryView> audit_trail(const StateStore& store,
                                        std::string_view script_id);

// CSV grade sheet for one exam: header plus one row per registered script in
// registration order. Throws QueryError(UnknownExam) for a missing exam and
// QueryError(NotFinalized) unless every script's result is PUBLISHED.
std::string render_grade_sheet(const StateStore& store, std::uint64_t exam_id);

}  // namespace examledger::audit
