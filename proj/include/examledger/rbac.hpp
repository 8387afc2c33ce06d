#pragma once

// Role-based access control. One role per address (granting overwrites),
// plus per-exam student enrollment flags. The deployer address is written
// into storage when the engine is constructed and may bootstrap the first
// Admin grants.

#include <string_view>

#include "examledger/encoding.hpp"
#include "examledger/execution.hpp"

namespace examledger::rbac {

inline constexpr std::string_view kOpGrantRole = "grantRole";
inline constexpr std::string_view kOpRevokeRole = "revokeRole";
inline constexpr std::string_view kOpEnrollStudent = "enrollStudent";

// Storage keys (module namespace RBAC).
Bytes role_key(const Address& who);
Bytes enrollment_key(std::uint64_t exam_id, const Address& student);
Bytes deployer_key();

// Charged checks used by handlers (theirs and other modules'). Both count as
// guard checks in the transaction trace.
bool has_role(ExecutionContext& ctx, const Address& who, Role role);
bool is_student_enrolled(ExecutionContext& ctx, std::uint64_t exam_id,
                         const Address& student);
Role role_of(ExecutionContext& ctx, const Address& who);
// Admin check that also accepts the deployer; used by grant_role only.
bool is_admin_or_deployer(ExecutionContext& ctx, const Address& who);

// Enrollment entry point shared with the exam lifecycle module: performs the
// sender/target role checks, records the enrollment and emits StudentEnrolled.
void enroll_student(ExecutionContext& ctx, std::uint64_t exam_id,
                    const Address& student);

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args);

// Uncharged views.
Role role_of(const StateStore& store, const Address& who);
bool has_role(const StateStore& store, const Address& who, Role role);
bool is_student_enrolled(const StateStore& store, std::uint64_t exam_id,
                         const Address& student);
Address deployer_of(const StateStore& store);

}  // namespace examledger::rbac
