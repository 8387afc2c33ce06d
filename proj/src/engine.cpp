#include "examledger/engine.hpp"

#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>

#include "examledger/chain_json.hpp"
#include "examledger/keccak.hpp"
#include "examledger/rbac.hpp"

namespace examledger {

namespace {

constexpr std::string_view kOpDeploy = "deploy";

Bytes deploy_marker_key() {
  const char* tag = "deployed";
  return Bytes(tag, tag + 8);
}

std::uint64_t wall_clock_ms() {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
}

}  // namespace

Engine::Engine(EngineConfig config)
    : config_(std::move(config)), clock_(wall_clock_ms) {
  config_.validate();
  // The deployer is part of genesis state: it bootstraps the first Admin
  // grants before any role exists.
  store_.put(TargetModule::RBAC, rbac::deployer_key(),
             Bytes(config_.deployer.value.begin(), config_.deployer.value.end()));
}

void Engine::deploy_contracts() {
  if (!chain_.empty()) {
    throw std::logic_error("deploy_contracts requires an empty chain");
  }
  for (auto m : {TargetModule::RBAC, TargetModule::EXAM_LIFECYCLE,
                 TargetModule::HASH_REGISTRY, TargetModule::RESULT_AUDIT}) {
    Receipt r = call(config_.deployer, m, std::string(kOpDeploy), {});
    if (r.status != TxStatus::SUCCESS) {
      throw std::logic_error("bootstrap deployment reverted: " + r.revert_reason);
    }
  }
}

Receipt Engine::submit(const Transaction& tx) {
  if (tx.seq != chain_.size()) {
    throw std::invalid_argument("transaction seq must equal chain length");
  }
  Receipt receipt = execute(tx);

  Hash256 prev{};
  if (!chain_.empty()) prev = chain_.back().entry_hash;
  Bytes preimage;
  Bytes tx_bytes = encode_tx(tx);
  Bytes receipt_bytes = encode_receipt(receipt);
  preimage.reserve(prev.size() + tx_bytes.size() + receipt_bytes.size());
  preimage.insert(preimage.end(), prev.begin(), prev.end());
  preimage.insert(preimage.end(), tx_bytes.begin(), tx_bytes.end());
  preimage.insert(preimage.end(), receipt_bytes.begin(), receipt_bytes.end());

  chain_.push_back(ChainEntry{tx, receipt, keccak256(preimage)});
  return receipt;
}

Receipt Engine::execute(const Transaction& tx) {
  GasMeter meter;
  meter.charge(config_.gas.tx_base);
  std::vector<Event> events;
  last_trace_ = TxTrace{};

  store_.begin_frame();
  TxStatus status = TxStatus::SUCCESS;
  std::string revert_reason;

  ExecutionContext ctx(tx, store_, meter, config_, events, last_trace_);
  try {
    dispatch(ctx, tx);
  } catch (const Revert& r) {
    status = TxStatus::REVERTED;
    revert_reason = r.what();
  } catch (const DecodeError&) {
    status = TxStatus::REVERTED;
    revert_reason = "Malformed payload";
  }

  if (status == TxStatus::REVERTED) {
    store_.rollback_frame();
    events.clear();  // reverted transactions emit nothing
  } else {
    store_.commit_frame();
  }

  Receipt receipt;
  receipt.tx_seq = tx.seq;
  receipt.status = status;
  receipt.revert_reason = revert_reason;
  receipt.gas_used = meter.used;
  receipt.events = std::move(events);
  receipt.state_root_hash = store_.root();
  return receipt;
}

void Engine::dispatch(ExecutionContext& ctx, const Transaction& tx) {
  if (tx.op_name == kOpDeploy) {
    if (ctx.sget(tx.target_module, deploy_marker_key())) {
      throw Revert(Err::AlreadyDeployed);
    }
    std::uint64_t gas = 0;
    switch (tx.target_module) {
      case TargetModule::RBAC: gas = config_.deploy_gas_rbac; break;
      case TargetModule::EXAM_LIFECYCLE: gas = config_.deploy_gas_lifecycle; break;
      case TargetModule::HASH_REGISTRY: gas = config_.deploy_gas_registry; break;
      case TargetModule::RESULT_AUDIT: gas = config_.deploy_gas_audit; break;
      case TargetModule::ZKP: throw Revert(Err::UnknownOp);
    }
    ctx.sput(tx.target_module, deploy_marker_key(), Bytes{1});
    Encoder data;
    data.str(to_string(tx.target_module));
    ctx.emit("ContractDeployed",
             {ctx.keccak(std::string_view("ContractDeployed"))}, data.take());
    // Deployment cost is modeled, not metered: the configured figure stands
    // in for compiling and shipping the contract bytecode.
    ctx.meter().used = gas;
    return;
  }

  Decoder args{ByteSpan(tx.payload)};
  switch (tx.target_module) {
    case TargetModule::RBAC:
      rbac::handle(ctx, tx.op_name, args);
      return;
    case TargetModule::EXAM_LIFECYCLE:
      lifecycle::handle(ctx, tx.op_name, args);
      return;
    case TargetModule::HASH_REGISTRY:
      registry::handle(ctx, tx.op_name, args);
      return;
    case TargetModule::RESULT_AUDIT:
      audit::handle(ctx, tx.op_name, args);
      return;
    case TargetModule::ZKP:
      zkp::handle(ctx, tx.op_name, args);
      return;
  }
  throw Revert(Err::UnknownModule);
}

Receipt Engine::call(const Address& sender, TargetModule module,
                     std::string op_name, Bytes payload) {
  Transaction tx;
  tx.seq = chain_.size();
  tx.sender = sender;
  tx.target_module = module;
  tx.op_name = std::move(op_name);
  tx.payload = std::move(payload);
  tx.timestamp = clock_();
  return submit(tx);
}

// --- typed helpers ---------------------------------------------------------

Receipt Engine::grant_role(const Address& sender, const Address& target,
                           Role role) {
  Encoder e;
  e.address(target).u8(static_cast<std::uint8_t>(role));
  return call(sender, TargetModule::RBAC, std::string(rbac::kOpGrantRole),
              e.take());
}

Receipt Engine::revoke_role(const Address& sender, const Address& target) {
  Encoder e;
  e.address(target);
  return call(sender, TargetModule::RBAC, std::string(rbac::kOpRevokeRole),
              e.take());
}

Receipt Engine::rbac_enroll_student(const Address& sender, std::uint64_t exam_id,
                                    const Address& student) {
  Encoder e;
  e.u64(exam_id).address(student);
  return call(sender, TargetModule::RBAC, std::string(rbac::kOpEnrollStudent),
              e.take());
}

Receipt Engine::create_exam(const Address& sender, std::uint64_t exam_id,
                            const std::string& title) {
  Encoder e;
  e.u64(exam_id).str(title);
  return call(sender, TargetModule::EXAM_LIFECYCLE,
              std::string(lifecycle::kOpCreateExam), e.take());
}

Receipt Engine::advance_exam_state(const Address& sender, std::uint64_t exam_id,
                                   ExamState target) {
  Encoder e;
  e.u64(exam_id).u8(static_cast<std::uint8_t>(target));
  return call(sender, TargetModule::EXAM_LIFECYCLE,
              std::string(lifecycle::kOpAdvanceState), e.take());
}

Receipt Engine::enroll(const Address& sender, std::uint64_t exam_id,
                       const Address& student) {
  Encoder e;
  e.u64(exam_id).address(student);
  return call(sender, TargetModule::EXAM_LIFECYCLE,
              std::string(lifecycle::kOpEnroll), e.take());
}

Receipt Engine::register_script(const Address& sender, std::uint64_t exam_id,
                                const std::string& script_id,
                                const Hash256& content_hash,
                                const Address& student) {
  Encoder e;
  e.u64(exam_id).str(script_id).hash(content_hash).address(student);
  return call(sender, TargetModule::HASH_REGISTRY,
              std::string(registry::kOpRegisterScript), e.take());
}

Receipt Engine::submit_marks(const Address& sender, std::uint64_t exam_id,
                             const std::string& script_id, std::int64_t marks) {
  Encoder e;
  e.u64(exam_id).str(script_id).i64(marks);
  return call(sender, TargetModule::RESULT_AUDIT,
              std::string(audit::kOpSubmitMarks), e.take());
}

Receipt Engine::revise_marks(const Address& sender, std::uint64_t exam_id,
                             const std::string& script_id,
                             std::int64_t new_marks,
                             const std::string& justification) {
  Encoder e;
  e.u64(exam_id).str(script_id).i64(new_marks).str(justification);
  return call(sender, TargetModule::RESULT_AUDIT,
              std::string(audit::kOpReviseMarks), e.take());
}

Receipt Engine::publish_result(const Address& sender, std::uint64_t exam_id,
                               const std::string& script_id) {
  Encoder e;
  e.u64(exam_id).str(script_id);
  return call(sender, TargetModule::RESULT_AUDIT,
              std::string(audit::kOpPublishResult), e.take());
}

Receipt Engine::zkp_commit(const Address& sender, const Address& student,
                           const zkp::AcademicRecord& record,
                           const Hash256& salt) {
  return call(sender, TargetModule::ZKP, std::string(zkp::kOpCommitRecord),
              zkp::encode_commit(student, record, salt));
}

Receipt Engine::zkp_post_criteria(const Address& sender,
                                  const zkp::CriteriaSet& c) {
  return call(sender, TargetModule::ZKP, std::string(zkp::kOpPostCriteria),
              zkp::encode_criteria(c));
}

Receipt Engine::zkp_prove(const Address& sender, const Address& student,
                          std::uint64_t criteria_id,
                          const zkp::AcademicRecord& record,
                          const Hash256& salt) {
  return call(sender, TargetModule::ZKP, std::string(zkp::kOpProveEligibility),
              zkp::encode_prove(student, criteria_id, record, salt));
}

// --- views -------------------------------------------------------------------

Role Engine::role_of(const Address& who) const { return rbac::role_of(store_, who); }

bool Engine::has_role(const Address& who, Role role) const {
  return rbac::has_role(store_, who, role);
}

bool Engine::is_student_enrolled(std::uint64_t exam_id,
                                 const Address& student) const {
  return rbac::is_student_enrolled(store_, exam_id, student);
}

ExamState Engine::exam_state(std::uint64_t exam_id) const {
  return lifecycle::exam_state(store_, exam_id);
}

lifecycle::ExamInfo Engine::exam_info(std::uint64_t exam_id) const {
  return lifecycle::exam_info(store_, exam_id);
}

bool Engine::script_exists(const std::string& script_id) const {
  return registry::script_exists(store_, script_id);
}

Hash256 Engine::script_hash(const std::string& script_id) const {
  return registry::script_hash(store_, script_id);
}

registry::ScriptRecord Engine::script_record(const std::string& script_id) const {
  return registry::script_record(store_, script_id);
}

std::vector<std::string> Engine::scripts_for_exam(std::uint64_t exam_id) const {
  return registry::scripts_for_exam(store_, exam_id);
}

audit::ResultView Engine::result(const std::string& script_id) const {
  return audit::result(store_, script_id);
}

std::vector<audit::AuditEntryView> Engine::audit_trail(
    const std::string& script_id) const {
  return audit::audit_trail(store_, script_id);
}

std::string Engine::grade_sheet_csv(std::uint64_t exam_id) const {
  return audit::render_grade_sheet(store_, exam_id);
}

std::optional<Hash256> Engine::commitment_of(const Address& student) const {
  return zkp::commitment_of(store_, student);
}

zkp::CriteriaSet Engine::criteria_of(std::uint64_t criteria_id) const {
  return zkp::criteria_of(store_, criteria_id);
}

bool Engine::eligibility_outcome(std::uint64_t criteria_id,
                                 const Address& student) const {
  return zkp::eligibility_outcome(store_, criteria_id, student);
}

// --- chain -------------------------------------------------------------------

Bytes Engine::encode_tx(const Transaction& tx) {
  Encoder e;
  e.u64(tx.seq)
      .address(tx.sender)
      .u8(static_cast<std::uint8_t>(tx.target_module))
      .str(tx.op_name)
      .bytes(ByteSpan(tx.payload))
      .u64(tx.timestamp);
  return e.take();
}

Bytes Engine::encode_receipt(const Receipt& r) {
  Encoder e;
  e.u64(r.tx_seq)
      .u8(static_cast<std::uint8_t>(r.status))
      .str(r.revert_reason)
      .u64(r.gas_used)
      .u32(static_cast<std::uint32_t>(r.events.size()));
  for (const auto& ev : r.events) {
    e.str(ev.name).u32(static_cast<std::uint32_t>(ev.topics.size()));
    for (const auto& t : ev.topics) e.hash(t);
    e.bytes(ByteSpan(ev.data));
  }
  e.hash(r.state_root_hash);
  return e.take();
}

VerifyResult Engine::verify_entries(const std::vector<ChainEntry>& entries) {
  Hash256 prev{};
  for (std::uint64_t i = 0; i < entries.size(); ++i) {
    const ChainEntry& entry = entries[i];
    Bytes preimage;
    Bytes tx_bytes = encode_tx(entry.tx);
    Bytes receipt_bytes = encode_receipt(entry.receipt);
    preimage.reserve(prev.size() + tx_bytes.size() + receipt_bytes.size());
    preimage.insert(preimage.end(), prev.begin(), prev.end());
    preimage.insert(preimage.end(), tx_bytes.begin(), tx_bytes.end());
    preimage.insert(preimage.end(), receipt_bytes.begin(), receipt_bytes.end());
    Hash256 expected = keccak256(preimage);
    if (expected != entry.entry_hash || entry.tx.seq != i) {
      return VerifyResult{false, i};
    }
    prev = entry.entry_hash;
  }
  return VerifyResult{true, 0};
}

GasReport Engine::gas_report() const {
  GasReport report;
  for (const auto& entry : chain_) {
    report.total_tx++;
    report.total_gas += entry.receipt.gas_used;
    if (entry.tx.op_name == kOpDeploy) {
      report.deployment_count++;
      report.deployment_gas += entry.receipt.gas_used;
      continue;
    }
    report.workflow_tx++;
    report.workflow_gas += entry.receipt.gas_used;
    auto& mod = report.workflow[entry.tx.target_module];
    mod.tx_count++;
    mod.gas += entry.receipt.gas_used;
    if (entry.receipt.status == TxStatus::REVERTED) report.failed_tx++;
  }
  return report;
}

void Engine::dump_jsonl(std::ostream& os) const {
  for (const auto& entry : chain_) {
    os << nlohmann::json(entry).dump() << '\n';
  }
}

std::vector<ChainEntry> Engine::parse_jsonl(std::istream& is) {
  std::vector<ChainEntry> entries;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(is, line)) {
    lineno++;
    if (line.empty()) continue;
    try {
      entries.push_back(nlohmann::json::parse(line).get<ChainEntry>());
    } catch (const std::exception& e) {
      throw std::runtime_error("ledger line " + std::to_string(lineno) +
                               ": " + e.what());
    }
  }
  return entries;
}

void Engine::replay(const std::vector<ChainEntry>& entries) {
  if (!chain_.empty()) {
    throw std::logic_error("replay requires an empty chain");
  }
  for (const auto& stored : entries) {
    Receipt computed = submit(stored.tx);
    if (encode_receipt(computed) != encode_receipt(stored.receipt)) {
      throw std::runtime_error(
          "replay divergence at seq " + std::to_string(stored.tx.seq) +
          ": recomputed receipt does not match the stored one");
    }
    if (chain_.back().entry_hash != stored.entry_hash) {
      throw std::runtime_error(
          "replay divergence at seq " + std::to_string(stored.tx.seq) +
          ": recomputed entry hash does not match the stored one");
    }
  }
}

}  // namespace examledger
