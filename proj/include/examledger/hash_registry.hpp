#pragma once

// On-chain anchors for off-chain answer scripts. A script record binds a
// script id to an exam and a keccak256 content hash — and deliberately NOT
// to the student. Enrollment is checked at registration time and then
// forgotten on-chain; the script-to-student mapping lives only in the
// encrypted off-chain manifest, which is what keeps evaluation anonymous.

#include <string_view>
#include <vector>

#include "examledger/encoding.hpp"
#include "examledger/execution.hpp"

namespace examledger::registry {

inline constexpr std::string_view kOpRegisterScript = "registerScript";

// Script ids look like "TS_" + 16 lowercase hex chars (a topsheet code with
// no relation to any student identifier).
bool is_valid_script_id(std::string_view id);

struct ScriptRecord {
  std::string script_id;
  std::uint64_t exam_id = 0;
  Hash256 content_hash{};
  Address registered_by;      // the admin that anchored it, never a student
  std::uint64_t ledger_seq = 0;
};

Bytes script_key(std::string_view script_id);
Bytes index_key(std::uint64_t exam_id, std::uint64_t position);

// Charged read for the audit module: reverts UnknownScript when absent.
ScriptRecord record_of(ExecutionContext& ctx, std::string_view script_id);

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args);

// Uncharged views; script_hash/script_record throw QueryError(UnknownScript).
bool script_exists(const StateStore& store, std::string_view script_id);
Hash256 script_hash(const StateStore& store, std::string_view script_id);
ScriptRecord script_record(const StateStore& store, std::string_view script_id);
std::vector<std::string> scripts_for_exam(const StateStore& store,
                                          std::uint64_t exam_id);

}  // namespace examledger::registry
