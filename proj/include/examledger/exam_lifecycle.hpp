#pragma once

// Exam records and their state machine:
//   CREATED -> ACTIVE -> SUBMITTED -> SCRUTINIZED -> COMPLETED
// Transitions only ever advance one step; everything else reverts.

#include <string_view>

#include "examledger/encoding.hpp"
#include "examledger/execution.hpp"

namespace examledger::lifecycle {

inline constexpr std::string_view kOpCreateExam = "createExam";
inline constexpr std::string_view kOpAdvanceState = "advanceState";
inline constexpr std::string_view kOpEnroll = "enroll";

struct ExamInfo {
  std::uint64_t exam_id = 0;
  std::string title;
  Address created_by;
  ExamState state = ExamState::CREATED;
  std::uint64_t script_count = 0;
};

Bytes state_key(std::uint64_t exam_id);
Bytes meta_key(std::uint64_t exam_id);
Bytes script_count_key(std::uint64_t exam_id);

// Charged reads used across modules. state_of reverts with UnknownExam when
// the exam does not exist.
ExamState state_of(ExecutionContext& ctx, std::uint64_t exam_id);
bool exam_exists(ExecutionContext& ctx, std::uint64_t exam_id);
// Registry hook: bumps the exam's script counter and returns the
// pre-increment value (used as the index of the new script).
std::uint64_t bump_script_count(ExecutionContext& ctx, std::uint64_t exam_id);

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args);

// Uncharged views. exam_state/exam_info throw QueryError(UnknownExam).
bool exam_exists(const StateStore& store, std::uint64_t exam_id);
ExamState exam_state(const StateStore& store, std::uint64_t exam_id);
ExamInfo exam_info(const StateStore& store, std::uint64_t exam_id);

}  // namespace examledger::lifecycle
