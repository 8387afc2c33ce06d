#include "examledger/rbac.hpp"

namespace examledger::rbac {

namespace {

constexpr TargetModule kModule = TargetModule::RBAC;

Role decode_role_byte(const Bytes& v) {
  if (v.size() != 1 || v[0] > static_cast<std::uint8_t>(Role::STUDENT)) {
    throw std::logic_error("corrupt role slot");
  }
  return static_cast<Role>(v[0]);
}

void grant_role(ExecutionContext& ctx, const Address& target, Role role) {
  if (!is_admin_or_deployer(ctx, ctx.sender())) throw Revert(Err::NotAdmin);
  if (target.is_zero()) throw Revert(Err::InvalidAddress);
  ctx.sput(kModule, role_key(target), Bytes{static_cast<std::uint8_t>(role)});
  Encoder data;
  data.address(target).u8(static_cast<std::uint8_t>(role)).address(ctx.sender());
  ctx.emit("RoleGranted", {ctx.keccak(std::string_view("RoleGranted"))},
           data.take());
}

void revoke_role(ExecutionContext& ctx, const Address& target) {
  if (!has_role(ctx, ctx.sender(), Role::ADMIN)) throw Revert(Err::NotAdmin);
  ctx.sput(kModule, role_key(target),
           Bytes{static_cast<std::uint8_t>(Role::NONE)});
  Encoder data;
  data.address(target).address(ctx.sender());
  ctx.emit("RoleRevoked", {ctx.keccak(std::string_view("RoleRevoked"))},
           data.take());
}

}  // namespace

Bytes role_key(const Address& who) {
  Bytes k;
  k.reserve(5 + who.value.size());
  const char* tag = "role:";
  k.insert(k.end(), tag, tag + 5);
  k.insert(k.end(), who.value.begin(), who.value.end());
  return k;
}

Bytes enrollment_key(std::uint64_t exam_id, const Address& student) {
  Encoder e;
  e.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>("enr:"), 4));
  e.u64(exam_id).address(student);
  return e.take();
}

Bytes deployer_key() {
  const char* tag = "deployer";
  return Bytes(tag, tag + 8);
}

bool has_role(ExecutionContext& ctx, const Address& who, Role role) {
  return role_of(ctx, who) == role;
}

Role role_of(ExecutionContext& ctx, const Address& who) {
  ctx.note_guard_check();
  auto v = ctx.sget(kModule, role_key(who));
  return v ? decode_role_byte(*v) : Role::NONE;
}

bool is_admin_or_deployer(ExecutionContext& ctx, const Address& who) {
  if (role_of(ctx, who) == Role::ADMIN) return true;
  auto dep = ctx.sget(kModule, deployer_key());
  return dep && dep->size() == 20 &&
         std::equal(dep->begin(), dep->end(), who.value.begin());
}

bool is_student_enrolled(ExecutionContext& ctx, std::uint64_t exam_id,
                         const Address& student) {
  ctx.note_guard_check();
  return ctx.scontains(kModule, enrollment_key(exam_id, student));
}

void enroll_student(ExecutionContext& ctx, std::uint64_t exam_id,
                    const Address& student) {
  if (!has_role(ctx, ctx.sender(), Role::ADMIN)) {
    throw Revert(Err::OnlyAdminEnrolls);
  }
  if (!has_role(ctx, student, Role::STUDENT)) throw Revert(Err::NotStudent);
  ctx.sput(kModule, enrollment_key(exam_id, student), Bytes{1});
  Encoder data;
  data.u64(exam_id).address(student);
  ctx.emit("StudentEnrolled", {ctx.keccak(std::string_view("StudentEnrolled"))},
           data.take());
}

void handle(ExecutionContext& ctx, std::string_view op, Decoder& args) {
  if (op == kOpGrantRole) {
    Address target = args.address();
    auto role_byte = args.u8();
    args.expect_done();
    if (role_byte > static_cast<std::uint8_t>(Role::STUDENT)) {
      throw DecodeError("role byte out of range");
    }
    grant_role(ctx, target, static_cast<Role>(role_byte));
  } else if (op == kOpRevokeRole) {
    Address target = args.address();
    args.expect_done();
    revoke_role(ctx, target);
  } else if (op == kOpEnrollStudent) {
    std::uint64_t exam_id = args.u64();
    Address student = args.address();
    args.expect_done();
    enroll_student(ctx, exam_id, student);
  } else {
    throw Revert(Err::UnknownOp);
  }
}

Role role_of(const StateStore& store, const Address& who) {
  auto v = store.get(TargetModule::RBAC, role_key(who));
  return v ? decode_role_byte(*v) : Role::NONE;
}

bool has_role(const StateStore& store, const Address& who, Role role) {
  return role_of(store, who) == role;
}

bool is_student_enrolled(const StateStore& store, std::uint64_t exam_id,
                         const Address& student) {
  return store.contains(TargetModule::RBAC, enrollment_key(exam_id, student));
}

Address deployer_of(const StateStore& store) {
  auto v = store.get(TargetModule::RBAC, deployer_key());
  Address a{};
  if (v && v->size() == 20) std::copy(v->begin(), v->end(), a.value.begin());
  return a;
}

}  // namespace examledger::rbac
