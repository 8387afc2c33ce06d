#include "examledger/workload.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "examledger/blob_store.hpp"
#include "examledger/keccak.hpp"
#include "examledger/service.hpp"

namespace examledger::workload {

// ---------------------------------------------------------------------------
// DetRng
// ---------------------------------------------------------------------------

std::uint64_t DetRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("DetRng::below bound must be > 0");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  std::uint64_t v;
  do {
    v = gen_();
  } while (v >= limit);
  return v % bound;
}

std::int64_t DetRng::range_i64(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("DetRng::range_i64 lo > hi");
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(below(span));
}

void DetRng::fill(std::uint8_t* out, std::size_t n) {
  std::size_t i = 0;
  while (i < n) {
    std::uint64_t v = gen_();
    for (int b = 0; b < 8 && i < n; ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(v >> (8 * b));
    }
  }
}

Hash256 DetRng::hash() {
  Hash256 h;
  fill(h.data(), h.size());
  return h;
}

Address address_from_label(std::string_view label) {
  std::string tagged = "addr:";
  tagged += label;
  Hash256 h = keccak256(tagged);
  Address a;
  std::copy(h.begin(), h.begin() + 20, a.value.begin());
  return a;
}

// ---------------------------------------------------------------------------
// ScenarioSpec
// ---------------------------------------------------------------------------

void ScenarioSpec::validate() const {
  if (name.empty()) throw std::invalid_argument("scenario name must not be empty");
  if (exam_count == 0) throw std::invalid_argument("exam_count must be >= 1");
  if (roles.admins == 0) throw std::invalid_argument("need at least one admin");
  if (roles.examiners == 0) throw std::invalid_argument("need at least one examiner");
  if (roles.scrutinizers == 0) {
    throw std::invalid_argument("need at least one scrutinizer");
  }
  if (roles.students == 0) throw std::invalid_argument("need at least one student");
  switch (scripts.kind) {
    case ScriptsPerExam::Kind::Fixed:
      if (scripts.fixed == 0) {
        throw std::invalid_argument("scripts per exam must be >= 1");
      }
      break;
    case ScriptsPerExam::Kind::List:
      if (scripts.list.size() != exam_count) {
        throw std::invalid_argument("script list length must equal exam_count");
      }
      for (auto c : scripts.list) {
        if (c == 0) throw std::invalid_argument("scripts per exam must be >= 1");
      }
      break;
    case ScriptsPerExam::Kind::Total:
      if (scripts.total < exam_count) {
        throw std::invalid_argument("total scripts must cover one per exam");
      }
      break;
  }
  if (revision_fraction.den == 0) {
    throw std::invalid_argument("revision fraction denominator must be > 0");
  }
  if (revision_fraction.num > revision_fraction.den) {
    throw std::invalid_argument("revision fraction must not exceed 1");
  }
  if (zkp_students > roles.students) {
    throw std::invalid_argument("zkp_students exceeds student count");
  }
  if (script_bytes == 0 || script_bytes > (1u << 20)) {
    throw std::invalid_argument("script_bytes must be in [1, 1 MiB]");
  }
}

// The three built-in scenarios model one department's term (small), a faculty
// (medium), and a full institution season (large). The revision fraction is
// identical across them so revision load scales with script volume.
ScenarioSpec ScenarioSpec::small() {
  ScenarioSpec s;
  s.name = "small";
  s.exam_count = 5;
  s.scripts.kind = ScriptsPerExam::Kind::Total;
  s.scripts.total = 43;
  s.roles = RoleCounts{2, 5, 3, 48};
  s.revision_fraction = Fraction{250, 4439};
  s.rng_seed = 1001;
  return s;
}

ScenarioSpec ScenarioSpec::medium() {
  ScenarioSpec s;
  s.name = "medium";
  s.exam_count = 25;
  s.scripts.kind = ScriptsPerExam::Kind::Total;
  s.scripts.total = 605;
  s.roles = RoleCounts{3, 25, 6, 130};
  s.revision_fraction = Fraction{250, 4439};
  s.rng_seed = 2002;
  return s;
}

ScenarioSpec ScenarioSpec::large() {
  ScenarioSpec s;
  s.name = "large";
  s.exam_count = 100;
  s.scripts.kind = ScriptsPerExam::Kind::Total;
  s.scripts.total = 4439;
  s.roles = RoleCounts{4, 100, 16, 300};
  s.revision_fraction = Fraction{250, 4439};
  s.rng_seed = 3003;
  return s;
}

ScenarioSpec ScenarioSpec::builtin(std::string_view name) {
  if (name == "small") return small();
  if (name == "medium") return medium();
  if (name == "large") return large();
  throw std::invalid_argument("unknown built-in scenario: " + std::string(name));
}

ScenarioSpec ScenarioSpec::from_json(const nlohmann::json& j) {
  ScenarioSpec s;
  s.name = j.at("name").get<std::string>();
  s.exam_count = j.at("exam_count").get<std::uint32_t>();

  const auto& sp = j.at("scripts_per_exam");
  auto kind = sp.at("kind").get<std::string>();
  if (kind == "fixed") {
    s.scripts.kind = ScriptsPerExam::Kind::Fixed;
    s.scripts.fixed = sp.at("fixed").get<std::uint64_t>();
  } else if (kind == "list") {
    s.scripts.kind = ScriptsPerExam::Kind::List;
    s.scripts.list = sp.at("list").get<std::vector<std::uint64_t>>();
  } else if (kind == "total") {
    s.scripts.kind = ScriptsPerExam::Kind::Total;
    s.scripts.total = sp.at("total").get<std::uint64_t>();
  } else {
    throw std::invalid_argument("scripts_per_exam.kind must be fixed|list|total");
  }

  const auto& roles = j.at("roles");
  s.roles.admins = roles.at("admins").get<std::uint32_t>();
  s.roles.examiners = roles.at("examiners").get<std::uint32_t>();
  s.roles.scrutinizers = roles.at("scrutinizers").get<std::uint32_t>();
  s.roles.students = roles.at("students").get<std::uint32_t>();

  const auto& fr = j.at("revision_fraction");
  s.revision_fraction.num = fr.at("num").get<std::uint64_t>();
  s.revision_fraction.den = fr.at("den").get<std::uint64_t>();

  s.zkp_students = j.value("zkp_students", 0u);
  s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  s.script_bytes = j.value("script_bytes", std::uint64_t{96});
  s.validate();
  return s;
}

nlohmann::json ScenarioSpec::to_json() const {
  nlohmann::json sp;
  switch (scripts.kind) {
    case ScriptsPerExam::Kind::Fixed:
      sp = {{"kind", "fixed"}, {"fixed", scripts.fixed}};
      break;
    case ScriptsPerExam::Kind::List:
      sp = {{"kind", "list"}, {"list", scripts.list}};
      break;
    case ScriptsPerExam::Kind::Total:
      sp = {{"kind", "total"}, {"total", scripts.total}};
      break;
  }
  return nlohmann::json{
      {"name", name},
      {"exam_count", exam_count},
      {"scripts_per_exam", std::move(sp)},
      {"roles",
       {{"admins", roles.admins},
        {"examiners", roles.examiners},
        {"scrutinizers", roles.scrutinizers},
        {"students", roles.students}}},
      {"revision_fraction",
       {{"num", revision_fraction.num}, {"den", revision_fraction.den}}},
      {"zkp_students", zkp_students},
      {"rng_seed", rng_seed},
      {"script_bytes", script_bytes},
  };
}

std::vector<std::uint64_t> resolve_script_counts(const ScenarioSpec& spec) {
  std::vector<std::uint64_t> counts;
  switch (spec.scripts.kind) {
    case ScriptsPerExam::Kind::Fixed:
      counts.assign(spec.exam_count, spec.scripts.fixed);
      break;
    case ScriptsPerExam::Kind::List:
      counts = spec.scripts.list;
      break;
    case ScriptsPerExam::Kind::Total: {
      // Every exam gets at least one script; the remainder spreads uniformly
      // at random (seeded), which yields the uneven sizes real terms have.
      counts.assign(spec.exam_count, 1);
      DetRng rng(spec.rng_seed ^ 0xa5a5a5a5a5a5a5a5ULL);
      for (std::uint64_t i = spec.exam_count; i < spec.scripts.total; ++i) {
        counts[rng.below(spec.exam_count)]++;
      }
      break;
    }
  }
  return counts;
}

std::uint64_t total_scripts(const ScenarioSpec& spec) {
  auto counts = resolve_script_counts(spec);
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

std::uint64_t revision_count(const ScenarioSpec& spec) {
  // Integer arithmetic keeps the figure exact and platform-independent.
  return spec.revision_fraction.num * total_scripts(spec) /
         spec.revision_fraction.den;
}

// ---------------------------------------------------------------------------
// Scenario generation
// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint64_t> split_revisions(std::uint64_t total_revisions,
                                           const std::vector<std::uint64_t>& counts,
                                           std::uint64_t total) {
  // Largest-remainder apportionment of revisions across exams, proportional
  // to each exam's script count.
  std::vector<std::uint64_t> quota(counts.size(), 0);
  if (total == 0 || total_revisions == 0) return quota;
  std::uint64_t assigned = 0;
  std::vector<std::pair<std::uint64_t, std::size_t>> remainders;
  remainders.reserve(counts.size());
  for (std::size_t e = 0; e < counts.size(); ++e) {
    std::uint64_t product = total_revisions * counts[e];
    quota[e] = product / total;
    assigned += quota[e];
    remainders.emplace_back(product % total, e);
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (std::uint64_t i = 0; i < total_revisions - assigned; ++i) {
    quota[remainders[i % remainders.size()].second]++;
  }
  return quota;
}

std::vector<std::uint32_t> sample_distinct(DetRng& rng, std::uint64_t k,
                                           std::uint32_t n) {
  // Partial Fisher-Yates: first k elements of a random permutation of [0, n).
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) {
    std::uint64_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

std::string fresh_script_id(DetRng& rng, std::set<std::string>& used) {
  for (;;) {
    std::uint8_t raw[8];
    rng.fill(raw, sizeof raw);
    std::string id = "TS_" + to_hex(ByteSpan(raw, sizeof raw));
    if (used.insert(id).second) return id;
  }
}

Bytes script_plaintext(DetRng& rng, std::uint64_t exam_id,
                       const std::string& script_id, std::uint64_t filler) {
  // The content carries the anonymous topsheet code and exam, never any
  // student identifier.
  std::string header =
      "topsheet " + script_id + " exam " + std::to_string(exam_id) + "\n";
  Bytes content(header.begin(), header.end());
  std::size_t start = content.size();
  content.resize(start + filler);
  rng.fill(content.data() + start, filler);
  return content;
}

}  // namespace

ScenarioScript generate_scenario(const ScenarioSpec& spec) {
  spec.validate();
  ScenarioScript plan;
  plan.spec = spec;
  plan.deployer = address_from_label("deployer");

  auto derive_group = [](const char* prefix, std::uint32_t n) {
    std::vector<Address> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      out.push_back(address_from_label(std::string(prefix) + ":" +
                                       std::to_string(i)));
    }
    return out;
  };
  plan.admins = derive_group("admin", spec.roles.admins);
  plan.examiners = derive_group("examiner", spec.roles.examiners);
  plan.scrutinizers = derive_group("scrutinizer", spec.roles.scrutinizers);
  plan.students = derive_group("student", spec.roles.students);

  auto counts = resolve_script_counts(spec);
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  for (auto c : counts) {
    if (c > spec.roles.students) {
      throw std::invalid_argument(
          "an exam needs more distinct students than the roster has");
    }
  }
  std::uint64_t revisions =
      spec.revision_fraction.num * total / spec.revision_fraction.den;
  auto revision_quota = split_revisions(revisions, counts, total);

  DetRng rng(spec.rng_seed);
  std::set<std::string> used_ids;

  auto& ops = plan.ops;

  for (auto m : {TargetModule::RBAC, TargetModule::EXAM_LIFECYCLE,
                 TargetModule::HASH_REGISTRY, TargetModule::RESULT_AUDIT}) {
    PlannedOp op;
    op.kind = OpKind::Deploy;
    op.sender = plan.deployer;
    op.module = m;
    ops.push_back(std::move(op));
  }

  auto grant = [&](const Address& sender, const Address& target, Role role) {
    PlannedOp op;
    op.kind = OpKind::GrantRole;
    op.sender = sender;
    op.target = target;
    op.role = role;
    ops.push_back(std::move(op));
  };
  for (const auto& a : plan.admins) grant(plan.deployer, a, Role::ADMIN);
  for (std::size_t i = 0; i < plan.examiners.size(); ++i) {
    grant(plan.admins[i % plan.admins.size()], plan.examiners[i], Role::EXAMINER);
  }
  for (std::size_t i = 0; i < plan.scrutinizers.size(); ++i) {
    grant(plan.admins[i % plan.admins.size()], plan.scrutinizers[i],
          Role::SCRUTINIZER);
  }
  for (std::size_t i = 0; i < plan.students.size(); ++i) {
    grant(plan.admins[i % plan.admins.size()], plan.students[i], Role::STUDENT);
  }

  // Final per-script marks per student, for the optional eligibility phase.
  std::map<std::uint32_t, std::vector<std::int64_t>> transcript;
  std::uint64_t script_counter = 0;

  for (std::uint32_t e = 0; e < spec.exam_count; ++e) {
    std::uint64_t exam_id = e + 1;
    const Address& admin = plan.admins[e % plan.admins.size()];

    PlannedOp create;
    create.kind = OpKind::CreateExam;
    create.sender = admin;
    create.exam_id = exam_id;
    create.title = "Course " + std::to_string(100 + exam_id) + " term final";
    ops.push_back(std::move(create));

    auto enrolled = sample_distinct(rng, counts[e], spec.roles.students);
    for (auto s : enrolled) {
      PlannedOp op;
      op.kind = OpKind::Enroll;
      op.sender = admin;
      op.exam_id = exam_id;
      op.target = plan.students[s];
      ops.push_back(std::move(op));
    }

    auto advance = [&](ExamState to) {
      PlannedOp op;
      op.kind = OpKind::AdvanceState;
      op.sender = admin;
      op.exam_id = exam_id;
      op.to_state = to;
      ops.push_back(std::move(op));
    };

    advance(ExamState::ACTIVE);

    struct ScriptPlan {
      std::string id;
      std::uint32_t student;
      std::size_t transcript_slot;
    };
    std::vector<ScriptPlan> scripts;
    scripts.reserve(enrolled.size());
    for (auto s : enrolled) {
      PlannedOp op;
      op.kind = OpKind::RegisterScript;
      op.sender = admin;
      op.exam_id = exam_id;
      op.target = plan.students[s];
      op.script_id = fresh_script_id(rng, used_ids);
      op.script_content =
          script_plaintext(rng, exam_id, op.script_id, spec.script_bytes);
      scripts.push_back({op.script_id, s, transcript[s].size()});
      transcript[s].push_back(0);  // placeholder until marks are drawn
      ops.push_back(std::move(op));
    }

    advance(ExamState::SUBMITTED);

    for (const auto& sp : scripts) {
      PlannedOp op;
      op.kind = OpKind::SubmitMarks;
      op.sender = plan.examiners[script_counter % plan.examiners.size()];
      op.exam_id = exam_id;
      op.script_id = sp.id;
      op.marks = rng.range_i64(30, 100);
      transcript[sp.student][sp.transcript_slot] = op.marks;
      script_counter++;
      ops.push_back(std::move(op));
    }

    advance(ExamState::SCRUTINIZED);

    auto revised = sample_distinct(rng, revision_quota[e],
                                   static_cast<std::uint32_t>(scripts.size()));
    for (auto idx : revised) {
      const auto& sp = scripts[idx];
      PlannedOp op;
      op.kind = OpKind::ReviseMarks;
      op.sender = plan.scrutinizers[(script_counter + idx) %
                                    plan.scrutinizers.size()];
      op.exam_id = exam_id;
      op.script_id = sp.id;
      op.marks = rng.range_i64(30, 100);
      op.justification =
          "Scrutiny recheck: totals corrected for " + sp.id;
      transcript[sp.student][sp.transcript_slot] = op.marks;
      ops.push_back(std::move(op));
    }

    advance(ExamState::COMPLETED);

    for (const auto& sp : scripts) {
      PlannedOp op;
      op.kind = OpKind::PublishResult;
      op.sender = admin;
      op.exam_id = exam_id;
      op.script_id = sp.id;
      ops.push_back(std::move(op));
    }

    PlannedOp sheet;
    sheet.kind = OpKind::ExportSheet;
    sheet.sender = admin;
    sheet.exam_id = exam_id;
    sheet.counts_as_tx = false;
    ops.push_back(std::move(sheet));
  }

  std::uint64_t zkp_tx = 0;
  if (spec.zkp_students > 0) {
    PlannedOp post;
    post.kind = OpKind::PostCriteria;
    post.sender = address_from_label("scholarship-board");
    post.criteria = zkp::CriteriaSet{1, 250, 35, 6, true, 40};
    post.criteria_id = 1;
    ops.push_back(std::move(post));
    zkp_tx++;

    // Prefer students who actually sat exams; their transcripts are real.
    std::vector<std::uint32_t> with_scripts;
    for (const auto& [s, marks] : transcript) with_scripts.push_back(s);
    std::uint32_t chosen = 0;
    for (std::uint32_t i = 0; i < with_scripts.size() && chosen < spec.zkp_students;
         ++i, ++chosen) {
      std::uint32_t s = with_scripts[i];
      zkp::AcademicRecord record;
      record.marks = transcript[s];
      record.credits.reserve(record.marks.size());
      std::int64_t weighted = 0;
      std::int64_t credit_sum = 0;
      for (std::size_t k = 0; k < record.marks.size(); ++k) {
        std::int64_t credit = rng.range_i64(2, 4);
        record.credits.push_back(credit);
        weighted += record.marks[k] * 4 * credit;
        credit_sum += credit;
      }
      record.scaled_cgpa = credit_sum > 0 ? weighted / credit_sum : 0;
      Hash256 salt = rng.hash();

      PlannedOp commit;
      commit.kind = OpKind::CommitRecord;
      commit.sender = plan.admins[0];
      commit.target = plan.students[s];
      commit.record = record;
      commit.salt = salt;
      ops.push_back(std::move(commit));

      PlannedOp prove;
      prove.kind = OpKind::ProveEligibility;
      prove.sender = plan.students[s];
      prove.target = plan.students[s];
      prove.criteria_id = 1;
      prove.record = record;
      prove.salt = salt;
      ops.push_back(std::move(prove));
      zkp_tx += 2;
    }
  }

  std::uint64_t grants = spec.roles.admins + spec.roles.examiners +
                         spec.roles.scrutinizers + spec.roles.students;
  plan.expected_tx = 4 + grants + 5ull * spec.exam_count + 4ull * total +
                     revisions + zkp_tx;
  return plan;
}

// ---------------------------------------------------------------------------
// Estimation
// ---------------------------------------------------------------------------

StorageEstimate estimate_storage(std::uint64_t gas, double storage_fraction,
                                 std::uint64_t sstore_new_cost) {
  if (sstore_new_cost == 0) {
    throw std::invalid_argument("sstore cost must be > 0");
  }
  if (storage_fraction < 0.0 || storage_fraction > 1.0) {
    throw std::invalid_argument("storage fraction must be within [0, 1]");
  }
  StorageEstimate est;
  est.sstore_ops = static_cast<std::uint64_t>(
      std::floor(storage_fraction * static_cast<double>(gas) /
                 static_cast<double>(sstore_new_cost)));
  est.kilobytes = static_cast<double>(est.sstore_ops) * 32.0 / 1024.0;
  return est;
}

CostEstimate estimate_cost(std::uint64_t gas, const PricingConfig& pricing) {
  CostEstimate cost;
  cost.eth = static_cast<double>(gas) * pricing.gas_price_gwei * 1e-9;
  cost.usd = cost.eth * pricing.eth_usd;
  return cost;
}

// ---------------------------------------------------------------------------
// Benchmark report
// ---------------------------------------------------------------------------

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

}  // namespace

BenchReport report_from_engine(const Engine& engine, const ScenarioSpec& spec,
                               const PricingConfig& pricing,
                               std::string_view timing_source,
                               double elapsed_seconds) {
  GasReport gas = engine.gas_report();

  BenchReport r;
  r.scenario = spec.name;
  r.timing_source = std::string(timing_source);
  r.exam_count = spec.exam_count;
  r.total_scripts = total_scripts(spec);
  r.revisions = revision_count(spec);

  r.total_tx = gas.total_tx;
  r.workflow_tx = gas.workflow_tx;
  r.failed_tx = gas.failed_tx;
  r.deployment_count = gas.deployment_count;
  r.deployment_gas = gas.deployment_gas;
  r.workflow_gas = gas.workflow_gas;
  r.total_gas = gas.total_gas;
  r.avg_gas_per_workflow_tx =
      gas.workflow_tx > 0
          ? static_cast<double>(gas.workflow_gas) / static_cast<double>(gas.workflow_tx)
          : 0.0;

  r.elapsed_seconds = elapsed_seconds;
  r.tps_total = elapsed_seconds > 0.0 ? gas.total_tx / elapsed_seconds : 0.0;
  r.tps_workflow =
      elapsed_seconds > 0.0 ? gas.workflow_tx / elapsed_seconds : 0.0;

  r.workflow_cost = estimate_cost(gas.workflow_gas, pricing);
  r.avg_cost_usd_per_workflow_tx =
      gas.workflow_tx > 0 ? r.workflow_cost.usd / static_cast<double>(gas.workflow_tx)
                          : 0.0;
  r.storage = estimate_storage(gas.workflow_gas, pricing.storage_fraction,
                               engine.config().gas.sstore_new);
  r.pricing = pricing;

  for (auto m : {TargetModule::RBAC, TargetModule::EXAM_LIFECYCLE,
                 TargetModule::HASH_REGISTRY, TargetModule::RESULT_AUDIT,
                 TargetModule::ZKP}) {
    auto it = gas.workflow.find(m);
    if (it == gas.workflow.end() && m == TargetModule::ZKP) continue;
    ModuleRow row;
    row.module = to_string(m);
    if (it != gas.workflow.end()) {
      row.tx_count = it->second.tx_count;
      row.gas = it->second.gas;
      row.avg_gas = it->second.tx_count > 0
                        ? static_cast<double>(it->second.gas) /
                              static_cast<double>(it->second.tx_count)
                        : 0.0;
      row.share_of_workflow_gas =
          gas.workflow_gas > 0 ? static_cast<double>(it->second.gas) /
                                     static_cast<double>(gas.workflow_gas)
                               : 0.0;
    }
    r.modules.push_back(std::move(row));
  }

  if (r.timing_source == "logical") {
    r.notes.push_back(
        "Timing uses a logical clock that advances 100 ms per transaction; "
        "throughput figures are synthetic and reproducible, not measured.");
  } else {
    r.notes.push_back(
        "Timing uses the wall clock; throughput reflects this host and the "
        "report file is not byte-reproducible.");
  }
  r.notes.push_back(
      "Average cost per workflow transaction is the exact quotient of "
      "workflow cost and workflow transaction count.");
  r.notes.push_back(
      "Storage is estimated as floor(storage_fraction * workflow_gas / "
      "sstore_new) fresh 32-byte slots.");
  return r;
}

nlohmann::json BenchReport::to_json() const {
  nlohmann::json modules_json = nlohmann::json::array();
  for (const auto& m : modules) {
    modules_json.push_back({
        {"module", m.module},
        {"tx_count", m.tx_count},
        {"gas", m.gas},
        {"avg_gas", m.avg_gas},
        {"share_of_workflow_gas", m.share_of_workflow_gas},
    });
  }
  return nlohmann::json{
      {"scenario", scenario},
      {"timing_source", timing_source},
      {"exam_count", exam_count},
      {"total_scripts", total_scripts},
      {"revisions", revisions},
      {"total_tx", total_tx},
      {"workflow_tx", workflow_tx},
      {"failed_tx", failed_tx},
      {"deployment_count", deployment_count},
      {"deployment_gas", deployment_gas},
      {"workflow_gas", workflow_gas},
      {"total_gas", total_gas},
      {"avg_gas_per_workflow_tx", avg_gas_per_workflow_tx},
      {"elapsed_seconds", elapsed_seconds},
      {"tps_total", tps_total},
      {"tps_workflow", tps_workflow},
      {"workflow_cost_eth", workflow_cost.eth},
      {"workflow_cost_usd", workflow_cost.usd},
      {"avg_cost_usd_per_workflow_tx", avg_cost_usd_per_workflow_tx},
      {"estimated_sstore_ops", storage.sstore_ops},
      {"estimated_storage_kb", storage.kilobytes},
      {"pricing",
       {{"gas_price_gwei", pricing.gas_price_gwei},
        {"eth_usd", pricing.eth_usd},
        {"storage_fraction", pricing.storage_fraction}}},
      {"modules", std::move(modules_json)},
      {"notes", notes},
  };
}

std::string BenchReport::to_csv() const {
  std::string csv = "metric,value\n";
  auto row = [&csv](std::string_view metric, const std::string& value) {
    csv += metric;
    csv += ',';
    csv += value;
    csv += '\n';
  };
  row("scenario", scenario);
  row("timing_source", timing_source);
  row("exam_count", std::to_string(exam_count));
  row("total_scripts", std::to_string(total_scripts));
  row("revisions", std::to_string(revisions));
  row("total_transactions", std::to_string(total_tx));
  row("workflow_transactions", std::to_string(workflow_tx));
  row("failed_transactions", std::to_string(failed_tx));
  row("deployment_count", std::to_string(deployment_count));
  row("deployment_gas", std::to_string(deployment_gas));
  row("workflow_gas", std::to_string(workflow_gas));
  row("total_gas", std::to_string(total_gas));
  row("avg_gas_per_workflow_tx", fmt("%.3f", avg_gas_per_workflow_tx));
  row("elapsed_seconds", fmt("%.3f", elapsed_seconds));
  row("tps_total", fmt("%.3f", tps_total));
  row("tps_workflow", fmt("%.3f", tps_workflow));
  row("workflow_cost_eth", fmt("%.6f", workflow_cost.eth));
  row("workflow_cost_usd", fmt("%.2f", workflow_cost.usd));
  row("avg_cost_usd_per_workflow_tx", fmt("%.6f", avg_cost_usd_per_workflow_tx));
  row("estimated_sstore_ops", std::to_string(storage.sstore_ops));
  row("estimated_storage_kb", fmt("%.3f", storage.kilobytes));
  row("gas_price_gwei", fmt("%.6f", pricing.gas_price_gwei));
  row("eth_usd", fmt("%.2f", pricing.eth_usd));
  row("storage_fraction", fmt("%.4f", pricing.storage_fraction));
  for (const auto& m : modules) {
    std::string prefix = "module_" + m.module;
    row(prefix + "_tx", std::to_string(m.tx_count));
    row(prefix + "_gas", std::to_string(m.gas));
    row(prefix + "_avg_gas", fmt("%.3f", m.avg_gas));
    row(prefix + "_gas_share", fmt("%.4f", m.share_of_workflow_gas));
  }
  return csv;
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

BenchReport run_benchmark(const ScenarioSpec& spec, const PricingConfig& pricing,
                          const RunOptions& options) {
  if (options.out_dir.empty()) {
    throw std::invalid_argument("run_benchmark needs an output directory");
  }
  std::filesystem::create_directories(options.out_dir);

  ScenarioScript plan = generate_scenario(spec);

  EngineConfig config;
  config.deployer = plan.deployer;
  Engine engine(config);

  const std::uint64_t base_ms = 1'755'000'000'000ULL;
  std::uint64_t logical_now = base_ms;
  if (options.logical_clock) {
    engine.set_clock([&logical_now] {
      logical_now += 100;
      return logical_now;
    });
  }

  DetRng nonce_rng(spec.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  BlobStore blobs(options.out_dir,
                  [&nonce_rng](std::uint8_t* out, std::size_t n) {
                    nonce_rng.fill(out, n);
                  });
  blobs.set_autosave(false);  // one manifest write at the end, not thousands

  std::string key_label = "bench-key:" + spec.name + ":" +
                          std::to_string(spec.rng_seed);
  Hash256 key_hash = keccak256(key_label);
  ExamService service(engine, blobs, Bytes(key_hash.begin(), key_hash.end()));

  auto wall_start = std::chrono::steady_clock::now();

  for (const auto& op : plan.ops) {
    switch (op.kind) {
      case OpKind::Deploy:
        engine.call(op.sender, op.module, "deploy", {});
        break;
      case OpKind::GrantRole:
        engine.grant_role(op.sender, op.target, op.role);
        break;
      case OpKind::CreateExam:
        engine.create_exam(op.sender, op.exam_id, op.title);
        break;
      case OpKind::Enroll:
        engine.enroll(op.sender, op.exam_id, op.target);
        break;
      case OpKind::AdvanceState:
        engine.advance_exam_state(op.sender, op.exam_id, op.to_state);
        break;
      case OpKind::RegisterScript: {
        auto stored = service.store_script(ByteSpan(op.script_content));
        service.register_script(op.sender, op.exam_id, op.script_id, op.target,
                                stored.cid);
        break;
      }
      case OpKind::SubmitMarks:
        engine.submit_marks(op.sender, op.exam_id, op.script_id, op.marks);
        break;
      case OpKind::ReviseMarks:
        engine.revise_marks(op.sender, op.exam_id, op.script_id, op.marks,
                            op.justification);
        break;
      case OpKind::PublishResult:
        engine.publish_result(op.sender, op.exam_id, op.script_id);
        break;
      case OpKind::ExportSheet:
        service.export_grade_sheet(op.exam_id);
        break;
      case OpKind::PostCriteria:
        engine.zkp_post_criteria(op.sender, op.criteria);
        break;
      case OpKind::CommitRecord:
        service.commit_academic_record(op.sender, op.target, op.record, op.salt);
        break;
      case OpKind::ProveEligibility:
        engine.zkp_prove(op.sender, op.target, op.criteria_id, op.record,
                         op.salt);
        break;
    }
  }

  blobs.save_manifest();

  double elapsed;
  std::string timing_source;
  if (options.logical_clock) {
    elapsed = static_cast<double>(logical_now - base_ms) / 1000.0;
    timing_source = "logical";
  } else {
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            wall_start)
                  .count();
    timing_source = "wall";
  }

  BenchReport report =
      report_from_engine(engine, spec, pricing, timing_source, elapsed);

  if (options.write_ledger) {
    std::ofstream ledger(options.out_dir / "ledger.jsonl",
                         std::ios::binary | std::ios::trunc);
    if (!ledger) throw std::runtime_error("cannot write ledger.jsonl");
    engine.dump_jsonl(ledger);
  }
  if (options.write_reports) {
    std::ofstream js(options.out_dir / "report.json",
                     std::ios::binary | std::ios::trunc);
    if (!js) throw std::runtime_error("cannot write report.json");
    js << report.to_json().dump(2) << '\n';
    std::ofstream csv(options.out_dir / "report.csv",
                      std::ios::binary | std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write report.csv");
    csv << report.to_csv();
  }
  return report;
}

// ---------------------------------------------------------------------------
// Linearity
// ---------------------------------------------------------------------------

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("fit_line needs matching x/y lengths");
  }
  if (x.size() < 3) throw QueryError(Err::TooFewPoints);
  std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 2) throw QueryError(Err::TooFewPoints);

  const double n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  if (syy == 0.0) {
    fit.r_squared = 1.0;  // constant y: the horizontal line fits exactly
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double pred = fit.intercept + fit.slope * x[i];
      ss_res += (y[i] - pred) * (y[i] - pred);
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

}  // namespace examledger::workload
