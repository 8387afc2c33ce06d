#pragma once

// Workload generation and benchmarking. A ScenarioSpec describes a synthetic
// examination season (how many exams, scripts, actors, revisions); the
// generator expands it into a deterministic, ordered operation script whose
// transactions all succeed when executed in order; the runner executes it
// against a fresh engine + blob store and produces a report with gas,
// cost, storage and throughput figures.
//
// Determinism: everything derives from the spec's rng_seed through one
// mt19937_64 stream (std::mt19937_64 output is pinned by the standard, and
// uniform draws use rejection sampling, not std distributions). Two runs of
// the same spec produce byte-identical ledgers, blobs and reports when the
// logical clock is used.

#include <filesystem>
#include <json.hpp>
#include <random>
#include <string>
#include <vector>

#include "examledger/engine.hpp"

namespace examledger::workload {

// ---------------------------------------------------------------------------
// Deterministic randomness
// ---------------------------------------------------------------------------

class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, bound) via rejection sampling — no modulo bias, no
  // platform-dependent std::uniform_int_distribution.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [lo, hi], inclusive.
  std::int64_t range_i64(std::int64_t lo, std::int64_t hi);
  void fill(std::uint8_t* out, std::size_t n);
  Hash256 hash();

 private:
  std::mt19937_64 gen_;
};

// keccak-derived deterministic 20-byte address for a named actor.
Address address_from_label(std::string_view label);

// ---------------------------------------------------------------------------
// Scenario specification
// ---------------------------------------------------------------------------

struct RoleCounts {
  std::uint32_t admins = 1;
  std::uint32_t examiners = 1;
  std::uint32_t scrutinizers = 1;
  std::uint32_t students = 1;
};

struct ScriptsPerExam {
  enum class Kind { Fixed, List, Total };
  Kind kind = Kind::Fixed;
  std::uint64_t fixed = 1;                // Kind::Fixed: same count per exam
  std::vector<std::uint64_t> list;        // Kind::List: one count per exam
  std::uint64_t total = 0;                // Kind::Total: seeded spread, >=1 each
};

struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

struct ScenarioSpec {
  std::string name = "custom";
  std::uint32_t exam_count = 1;
  ScriptsPerExam scripts;
  RoleCounts roles;
  // Realized revision count = floor(num * total_scripts / den), split across
  // exams by largest remainder.
  Fraction revision_fraction;
  // Students who run the commit/prove eligibility protocol after results are
  // published (0 = skip the phase entirely).
  std::uint32_t zkp_students = 0;
  std::uint64_t rng_seed = 1;
  std::uint64_t script_bytes = 96;  // random filler appended to each script

  void validate() const;  // throws std::invalid_argument

  static ScenarioSpec small();
  static ScenarioSpec medium();
  static ScenarioSpec large();
  static ScenarioSpec builtin(std::string_view name);  // throws on unknown name

  static ScenarioSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

std::vector<std::uint64_t> resolve_script_counts(const ScenarioSpec& spec);
std::uint64_t total_scripts(const ScenarioSpec& spec);
std::uint64_t revision_count(const ScenarioSpec& spec);

// ---------------------------------------------------------------------------
// Generated operation script
// ---------------------------------------------------------------------------

enum class OpKind {
  Deploy,
  GrantRole,
  CreateExam,
  Enroll,
  AdvanceState,
  RegisterScript,  // store blob off-chain + anchor on-chain
  SubmitMarks,
  ReviseMarks,
  PublishResult,
  ExportSheet,  // off-chain only, no ledger entry
  PostCriteria,
  CommitRecord,
  ProveEligibility,
};

struct PlannedOp {
  OpKind kind = OpKind::Deploy;
  Address sender;
  TargetModule module = TargetModule::RBAC;  // Deploy
  Address target;                            // grant target / student
  Role role = Role::NONE;                    // GrantRole
  std::uint64_t exam_id = 0;
  ExamState to_state = ExamState::CREATED;  // AdvanceState
  std::string title;                        // CreateExam
  std::string script_id;
  Bytes script_content;  // RegisterScript plaintext
  std::int64_t marks = 0;
  std::string justification;
  std::uint64_t criteria_id = 0;
  zkp::CriteriaSet criteria;   // PostCriteria
  zkp::AcademicRecord record;  // CommitRecord / ProveEligibility
  Hash256 salt{};
  bool counts_as_tx = true;
};

struct ScenarioScript {
  ScenarioSpec spec;
  Address deployer;
  std::vector<Address> admins;
  std::vector<Address> examiners;
  std::vector<Address> scrutinizers;
  std::vector<Address> students;
  std::vector<PlannedOp> ops;
  std::uint64_t expected_tx = 0;  // ledger entries, deployments included
};

ScenarioScript generate_scenario(const ScenarioSpec& spec);

// ---------------------------------------------------------------------------
// Pricing and estimation
// ---------------------------------------------------------------------------

struct PricingConfig {
  double gas_price_gwei = 0.044;
  double eth_usd = 2154.93;
  // Share of workflow gas attributed to fresh storage writes when estimating
  // on-chain growth from gas alone.
  double storage_fraction = 0.35;
};

struct StorageEstimate {
  std::uint64_t sstore_ops = 0;
  double kilobytes = 0.0;  // sstore_ops * 32 bytes
};

StorageEstimate estimate_storage(std::uint64_t gas, double storage_fraction,
                                 std::uint64_t sstore_new_cost);

struct CostEstimate {
  double eth = 0.0;
  double usd = 0.0;
};

CostEstimate estimate_cost(std::uint64_t gas, const PricingConfig& pricing);

// ---------------------------------------------------------------------------
// Benchmark
// ---------------------------------------------------------------------------

struct ModuleRow {
  std::string module;
  std::uint64_t tx_count = 0;
  std::uint64_t gas = 0;
  double avg_gas = 0.0;
  double share_of_workflow_gas = 0.0;
};

struct BenchReport {
  std::string scenario;
  std::string timing_source;  // "logical" or "wall"
  std::uint32_t exam_count = 0;
  std::uint64_t total_scripts = 0;
  std::uint64_t revisions = 0;

  std::uint64_t total_tx = 0;
  std::uint64_t workflow_tx = 0;
  std::uint64_t failed_tx = 0;
  std::uint64_t deployment_count = 0;
  std::uint64_t deployment_gas = 0;
  std::uint64_t workflow_gas = 0;
  std::uint64_t total_gas = 0;
  double avg_gas_per_workflow_tx = 0.0;

  double elapsed_seconds = 0.0;
  double tps_total = 0.0;
  double tps_workflow = 0.0;

  CostEstimate workflow_cost;
  double avg_cost_usd_per_workflow_tx = 0.0;
  StorageEstimate storage;
  PricingConfig pricing;

  std::vector<ModuleRow> modules;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

BenchReport report_from_engine(const Engine& engine, const ScenarioSpec& spec,
                               const PricingConfig& pricing,
                               std::string_view timing_source,
                               double elapsed_seconds);

struct RunOptions {
  // Working directory for blobs, grade sheets, and report files. Required.
  std::filesystem::path out_dir;
  // Logical clock: timestamps advance a fixed 100 ms per transaction, making
  // the run (and its throughput figures) fully reproducible. Wall clock opts
  // into real timing at the cost of determinism of the report file.
  bool logical_clock = true;
  bool write_ledger = true;   // out_dir/ledger.jsonl
  bool write_reports = true;  // out_dir/report.json + report.csv
};

BenchReport run_benchmark(const ScenarioSpec& spec, const PricingConfig& pricing,
                          const RunOptions& options);

// ---------------------------------------------------------------------------
// Linearity
// ---------------------------------------------------------------------------

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares of y on x. Throws QueryError(TooFewPoints) when
// fewer than 3 points or fewer than 2 distinct x values are supplied.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace examledger::workload
