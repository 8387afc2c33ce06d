// Command-line front end for the examination ledger. State lives in a data
// directory (--data-dir or EXAMLEDGER_DATA_DIR):
//
//   config.json   engine + pricing configuration, written by `init`
//   admin.key     32-byte hex blob/manifest encryption key (institution-held)
//   ledger.jsonl  the chain, one entry per line; replayed and verified on load
//   store/        encrypted script blobs, sealed manifest, grade sheets
//   lock          flock guard so concurrent invocations serialize
//
// Transaction commands print the receipt and exit 0 on SUCCESS, 1 on REVERTED
// (with the exact revert reason). Query commands exit 1 with `error: ...` on
// failure. `--json` switches every output to machine-readable JSON.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <openssl/rand.h>

#include "examledger/chain_json.hpp"
#include "examledger/engine.hpp"
#include "examledger/service.hpp"
#include "examledger/workload.hpp"

using namespace examledger;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("EXAMLEDGER_DATA_DIR"); env && *env) {
    return env;
  }
  return "examledger-data";
}

Address parse_actor(const std::string& s) {
  if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) {
    auto a = Address::parse(s);
    if (!a) throw CliError("not a valid address: " + s);
    return *a;
  }
  // Anything else is a human-friendly label, mapped to a stable address.
  return workload::address_from_label(s);
}

Role parse_role_arg(const std::string& s) {
  std::string up;
  for (char c : s) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  auto r = parse_role(up);
  if (!r) throw CliError("unknown role: " + s + " (ADMIN|EXAMINER|SCRUTINIZER|STUDENT)");
  return *r;
}

ExamState parse_state_arg(const std::string& s) {
  std::string up;
  for (char c : s) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  auto st = parse_exam_state(up);
  if (!st) {
    throw CliError("unknown exam state: " + s +
                   " (CREATED|ACTIVE|SUBMITTED|SCRUTINIZED|COMPLETED)");
  }
  return *st;
}

Bytes read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string s = buf.str();
  return Bytes(s.begin(), s.end());
}

void write_file_bytes(const std::filesystem::path& path, ByteSpan data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError("cannot write file: " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

nlohmann::json config_to_json(const EngineConfig& cfg,
                              const workload::PricingConfig& pricing) {
  return nlohmann::json{
      {"deployer", cfg.deployer.hex()},
      {"max_marks", cfg.max_marks},
      {"gas",
       {{"tx_base", cfg.gas.tx_base},
        {"sstore_new", cfg.gas.sstore_new},
        {"sstore_update", cfg.gas.sstore_update},
        {"sload", cfg.gas.sload},
        {"log_base", cfg.gas.log_base},
        {"log_topic", cfg.gas.log_topic},
        {"log_byte", cfg.gas.log_byte},
        {"hash_word", cfg.gas.hash_word}}},
      {"deploy_gas",
       {{"rbac", cfg.deploy_gas_rbac},
        {"lifecycle", cfg.deploy_gas_lifecycle},
        {"registry", cfg.deploy_gas_registry},
        {"audit", cfg.deploy_gas_audit}}},
      {"pricing",
       {{"gas_price_gwei", pricing.gas_price_gwei},
        {"eth_usd", pricing.eth_usd},
        {"storage_fraction", pricing.storage_fraction}}},
  };
}

void config_from_json(const nlohmann::json& j, EngineConfig& cfg,
                      workload::PricingConfig& pricing) {
  auto deployer = Address::parse(j.at("deployer").get<std::string>());
  if (!deployer) throw CliError("config.json: bad deployer address");
  cfg.deployer = *deployer;
  cfg.max_marks = j.at("max_marks").get<std::uint64_t>();
  const auto& g = j.at("gas");
  cfg.gas.tx_base = g.at("tx_base").get<std::uint64_t>();
  cfg.gas.sstore_new = g.at("sstore_new").get<std::uint64_t>();
  cfg.gas.sstore_update = g.at("sstore_update").get<std::uint64_t>();
  cfg.gas.sload = g.at("sload").get<std::uint64_t>();
  cfg.gas.log_base = g.at("log_base").get<std::uint64_t>();
  cfg.gas.log_topic = g.at("log_topic").get<std::uint64_t>();
  cfg.gas.log_byte = g.at("log_byte").get<std::uint64_t>();
  cfg.gas.hash_word = g.at("hash_word").get<std::uint64_t>();
  const auto& d = j.at("deploy_gas");
  cfg.deploy_gas_rbac = d.at("rbac").get<std::uint64_t>();
  cfg.deploy_gas_lifecycle = d.at("lifecycle").get<std::uint64_t>();
  cfg.deploy_gas_registry = d.at("registry").get<std::uint64_t>();
  cfg.deploy_gas_audit = d.at("audit").get<std::uint64_t>();
  const auto& p = j.at("pricing");
  pricing.gas_price_gwei = p.at("gas_price_gwei").get<double>();
  pricing.eth_usd = p.at("eth_usd").get<double>();
  pricing.storage_fraction = p.at("storage_fraction").get<double>();
}

// ---------------------------------------------------------------------------
// Session: lock + config + replayed engine + blob store
// ---------------------------------------------------------------------------

class Session {
 public:
  Session(std::filesystem::path data_dir, bool create)
      : dir_(std::move(data_dir)) {
    if (create) {
      std::filesystem::create_directories(dir_);
    } else if (!std::filesystem::exists(dir_ / "config.json")) {
      throw CliError("data directory " + dir_.string() +
                     " is not initialized; run `init` first");
    }
    lock_fd_ = ::open((dir_ / "lock").c_str(), O_CREAT | O_RDWR, 0600);
    if (lock_fd_ < 0 || ::flock(lock_fd_, LOCK_EX) != 0) {
      throw CliError("cannot lock data directory " + dir_.string());
    }
  }

  ~Session() {
    if (lock_fd_ >= 0) {
      ::flock(lock_fd_, LOCK_UN);
      ::close(lock_fd_);
    }
  }

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::filesystem::path& dir() const { return dir_; }

  void init_new(const Address& deployer) {
    if (std::filesystem::exists(dir_ / "config.json")) {
      throw CliError("data directory " + dir_.string() + " is already initialized");
    }
    config_.deployer = deployer;
    std::ofstream cfg(dir_ / "config.json", std::ios::trunc);
    cfg << config_to_json(config_, pricing_).dump(2) << '\n';

    std::uint8_t key[32];
    if (RAND_bytes(key, sizeof key) != 1) {
      throw CliError("system entropy source failed");
    }
    std::ofstream keyfile(dir_ / "admin.key", std::ios::trunc);
    keyfile << to_hex(ByteSpan(key, sizeof key)) << '\n';
    keyfile.close();
    std::filesystem::permissions(dir_ / "admin.key",
                                 std::filesystem::perms::owner_read |
                                     std::filesystem::perms::owner_write);

    engine_.emplace(config_);
    engine_->deploy_contracts();
    persist_from(0);
    loaded_ = engine_->chain().size();
  }

  void load() {
    std::ifstream cfg(dir_ / "config.json");
    nlohmann::json j = nlohmann::json::parse(cfg);
    config_from_json(j, config_, pricing_);
    engine_.emplace(config_);
    if (std::filesystem::exists(dir_ / "ledger.jsonl")) {
      std::ifstream in(dir_ / "ledger.jsonl", std::ios::binary);
      auto entries = Engine::parse_jsonl(in);
      // replay re-executes everything and verifies receipts + hash chain, so
      // a tampered ledger file fails here, not deep inside a command.
      engine_->replay(entries);
    }
    loaded_ = engine_->chain().size();
  }

  Engine& engine() { return *engine_; }
  const workload::PricingConfig& pricing() const { return pricing_; }

  ExamService& service() {
    if (!service_) {
      std::ifstream keyfile(dir_ / "admin.key");
      std::string hex;
      keyfile >> hex;
      auto key = from_hex(hex);
      if (!key || key->size() != 32) {
        throw CliError("admin.key is missing or corrupt");
      }
      blobs_.emplace(dir_ / "store");
      service_.emplace(*engine_, *blobs_, *key);
    }
    return *service_;
  }

  // Appends entries [loaded_, size) to ledger.jsonl — same line format as a
  // full dump, so parse_jsonl reads both.
  void persist() { persist_from(loaded_); }

 private:
  void persist_from(std::size_t from) {
    const auto& chain = engine_->chain();
    if (from >= chain.size()) return;
    std::ofstream out(dir_ / "ledger.jsonl", std::ios::binary | std::ios::app);
    if (!out) throw CliError("cannot append to ledger.jsonl");
    for (std::size_t i = from; i < chain.size(); ++i) {
      out << nlohmann::json(chain[i]).dump() << '\n';
    }
  }

  std::filesystem::path dir_;
  int lock_fd_ = -1;
  EngineConfig config_;
  workload::PricingConfig pricing_;
  std::optional<Engine> engine_;
  std::optional<BlobStore> blobs_;
  std::optional<ExamService> service_;
  std::size_t loaded_ = 0;
};

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

int emit_receipt(bool as_json, const Receipt& r) {
  if (as_json) {
    std::cout << nlohmann::json(r).dump(2) << '\n';
  } else if (r.status == TxStatus::SUCCESS) {
    std::cout << "seq " << r.tx_seq << " SUCCESS gas=" << r.gas_used << '\n';
    for (const auto& ev : r.events) {
      std::cout << "  event " << ev.name << '\n';
    }
  } else {
    std::cout << "seq " << r.tx_seq << " REVERTED gas=" << r.gas_used
              << " reason: " << r.revert_reason << '\n';
  }
  return r.status == TxStatus::SUCCESS ? 0 : 1;
}

void emit_json_or(bool as_json, const nlohmann::json& j,
                  const std::function<void()>& human) {
  if (as_json) {
    std::cout << j.dump(2) << '\n';
  } else {
    human();
  }
}

zkp::AcademicRecord record_from_file(const std::filesystem::path& path) {
  auto raw = read_file_bytes(path);
  nlohmann::json j = nlohmann::json::parse(raw.begin(), raw.end());
  zkp::AcademicRecord rec;
  rec.scaled_cgpa = j.at("scaled_cgpa").get<std::int64_t>();
  rec.marks = j.at("marks").get<std::vector<std::int64_t>>();
  rec.credits = j.at("credits").get<std::vector<std::int64_t>>();
  return rec;
}

Hash256 salt_from_hex(const std::string& hex) {
  auto h = parse_hash(hex);
  if (!h) throw CliError("salt must be 32 bytes of hex");
  return *h;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Examination lifecycle ledger"};
  app.require_subcommand(1);
  // Global options (--data-dir, --as, --json) may appear after the
  // subcommand; subcommands created below inherit this.
  app.fallthrough();

  std::string data_dir_opt = default_data_dir().string();
  bool as_json = false;
  std::string sender_opt = "deployer";
  app.add_option("--data-dir", data_dir_opt, "State directory")
      ->envname("EXAMLEDGER_DATA_DIR");
  app.add_flag("--json", as_json, "Machine-readable output");
  app.add_option("--as", sender_opt,
                 "Acting address (0x... or a label like examiner:1)");

  int exit_code = 0;
  auto run = [&](const std::function<int()>& fn) {
    return [&exit_code, fn]() { exit_code = fn(); };
  };

  // ---- init ---------------------------------------------------------------
  std::string init_deployer = "deployer";
  auto* cmd_init = app.add_subcommand("init", "Create and bootstrap a data directory");
  cmd_init->add_option("--deployer", init_deployer, "Deployer address or label");
  cmd_init->callback(run([&] {
    Session s(data_dir_opt, /*create=*/true);
    s.init_new(parse_actor(init_deployer));
    emit_json_or(as_json,
                 nlohmann::json{{"data_dir", data_dir_opt},
                                {"deployer", parse_actor(init_deployer).hex()},
                                {"deployed", 4}},
                 [&] {
                   std::cout << "initialized " << data_dir_opt << " (4 contracts deployed)\n";
                 });
    return 0;
  }));

  // ---- role ---------------------------------------------------------------
  auto* cmd_role = app.add_subcommand("role", "Role administration");
  cmd_role->require_subcommand(1);

  std::string role_target, role_name;
  auto* role_grant = cmd_role->add_subcommand("grant", "Grant a role");
  role_grant->add_option("--to", role_target)->required();
  role_grant->add_option("--role", role_name)->required();
  role_grant->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto r = s.engine().grant_role(parse_actor(sender_opt), parse_actor(role_target),
                                   parse_role_arg(role_name));
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* role_revoke = cmd_role->add_subcommand("revoke", "Revoke a role");
  role_revoke->add_option("--to", role_target)->required();
  role_revoke->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto r = s.engine().revoke_role(parse_actor(sender_opt), parse_actor(role_target));
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* role_show = cmd_role->add_subcommand("show", "Show an address's role");
  role_show->add_option("--of", role_target)->required();
  role_show->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    Address who = parse_actor(role_target);
    Role role = s.engine().role_of(who);
    emit_json_or(as_json,
                 nlohmann::json{{"address", who.hex()}, {"role", to_string(role)}},
                 [&] { std::cout << who.hex() << " " << to_string(role) << '\n'; });
    return 0;
  }));

  // ---- exam ---------------------------------------------------------------
  auto* cmd_exam = app.add_subcommand("exam", "Exam lifecycle");
  cmd_exam->require_subcommand(1);

  std::uint64_t exam_id = 0;
  std::string exam_title, exam_state_name, exam_student;

  auto* exam_create = cmd_exam->add_subcommand("create", "Create an exam");
  exam_create->add_option("--exam", exam_id)->required();
  exam_create->add_option("--title", exam_title)->required();
  exam_create->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto r = s.engine().create_exam(parse_actor(sender_opt), exam_id, exam_title);
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* exam_advance = cmd_exam->add_subcommand("advance", "Advance exam state");
  exam_advance->add_option("--exam", exam_id)->required();
  exam_advance->add_option("--to", exam_state_name)->required();
  exam_advance->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto r = s.engine().advance_exam_state(parse_actor(sender_opt), exam_id,
                                           parse_state_arg(exam_state_name));
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* exam_enroll = cmd_exam->add_subcommand("enroll", "Enroll a student");
  exam_enroll->add_option("--exam", exam_id)->required();
  exam_enroll->add_option("--student", exam_student)->required();
  exam_enroll->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto r = s.engine().enroll(parse_actor(sender_opt), exam_id,
                               parse_actor(exam_student));
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* exam_show = cmd_exam->add_subcommand("show", "Show exam details");
  exam_show->add_option("--exam", exam_id)->required();
  exam_show->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto info = s.engine().exam_info(exam_id);
    emit_json_or(as_json,
                 nlohmann::json{{"exam_id", info.exam_id},
                                {"title", info.title},
                                {"state", to_string(info.state)},
                                {"created_by", info.created_by.hex()},
                                {"script_count", info.script_count}},
                 [&] {
                   std::cout << "exam " << info.exam_id << " \"" << info.title
                             << "\" state=" << to_string(info.state)
                             << " scripts=" << info.script_count << '\n';
                 });
    return 0;
  }));

  auto* exam_scripts = cmd_exam->add_subcommand("scripts", "List scripts of an exam");
  exam_scripts->add_option("--exam", exam_id)->required();
  exam_scripts->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto ids = s.engine().scripts_for_exam(exam_id);
    emit_json_or(as_json, nlohmann::json{{"exam_id", exam_id}, {"scripts", ids}},
                 [&] {
                   for (const auto& id : ids) std::cout << id << '\n';
                 });
    return 0;
  }));

  // ---- script -------------------------------------------------------------
  auto* cmd_script = app.add_subcommand("script", "Answer-script storage and anchoring");
  cmd_script->require_subcommand(1);

  std::string script_id, script_file, script_cid, script_student, script_out;

  auto* script_store = cmd_script->add_subcommand(
      "store", "Encrypt and store a script off-chain (no ledger entry)");
  script_store->add_option("--file", script_file)->required();
  script_store->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto stored = s.service().store_script(ByteSpan(read_file_bytes(script_file)));
    emit_json_or(as_json,
                 nlohmann::json{{"cid", stored.cid},
                                {"anchor", hash_hex(stored.content_hash)}},
                 [&] { std::cout << stored.cid << '\n'; });
    return 0;
  }));

  auto* script_register = cmd_script->add_subcommand(
      "register", "Anchor a stored script on the ledger and bind it privately");
  script_register->add_option("--exam", exam_id)->required();
  script_register->add_option("--id", script_id)->required();
  script_register->add_option("--student", script_student)->required();
  script_register->add_option("--cid", script_cid);
  script_register->add_option("--file", script_file);
  script_register->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    std::string cid = script_cid;
    if (cid.empty()) {
      if (script_file.empty()) throw CliError("need --cid or --file");
      cid = s.service().store_script(ByteSpan(read_file_bytes(script_file))).cid;
    }
    auto r = s.service().register_script(parse_actor(sender_opt), exam_id, script_id,
                                         parse_actor(script_student), cid);
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* script_fetch = cmd_script->add_subcommand(
      "fetch", "Decrypt a script after verifying it against its ledger anchor");
  script_fetch->add_option("--id", script_id)->required();
  script_fetch->add_option("--out", script_out);
  script_fetch->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    Bytes plain = s.service().fetch_script(script_id);
    if (!script_out.empty()) {
      write_file_bytes(script_out, ByteSpan(plain));
      std::cout << "wrote " << plain.size() << " bytes to " << script_out << '\n';
    } else {
      std::cout.write(reinterpret_cast<const char*>(plain.data()),
                      static_cast<std::streamsize>(plain.size()));
    }
    return 0;
  }));

  auto* script_show = cmd_script->add_subcommand("show", "Show the on-chain record");
  script_show->add_option("--id", script_id)->required();
  script_show->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto rec = s.engine().script_record(script_id);
    emit_json_or(as_json,
                 nlohmann::json{{"script_id", rec.script_id},
                                {"exam_id", rec.exam_id},
                                {"content_hash", hash_hex(rec.content_hash)},
                                {"registered_by", rec.registered_by.hex()},
                                {"ledger_seq", rec.ledger_seq}},
                 [&] {
                   std::cout << rec.script_id << " exam=" << rec.exam_id
                             << " hash=" << hash_hex(rec.content_hash)
                             << " seq=" << rec.ledger_seq << '\n';
                 });
    return 0;
  }));

  auto* script_reveal = cmd_script->add_subcommand(
      "reveal", "Reveal a script's author (exam must be COMPLETED)");
  script_reveal->add_option("--exam", exam_id)->required();
  script_reveal->add_option("--id", script_id)->required();
  script_reveal->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    Address student = s.service().reveal_identity(exam_id, script_id);
    emit_json_or(as_json,
                 nlohmann::json{{"script_id", script_id}, {"student", student.hex()}},
                 [&] { std::cout << student.hex() << '\n'; });
    return 0;
  }));

  // ---- marks --------------------------------------------------------------
  auto* cmd_marks = app.add_subcommand("marks", "Marking and audit trail");
  cmd_marks->require_subcommand(1);

  std::int64_t marks_value = 0;
  std::string marks_why;

  auto* marks_submit = cmd_marks->add_subcommand("submit", "Submit marks");
  marks_submit->add_option("--exam", exam_id)->required();
  marks_submit->add_option("--id", script_id)->required();
  marks_submit->add_option("--marks", marks_value)->required();
  marks_submit->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto r = s.engine().submit_marks(parse_actor(sender_opt), exam_id, script_id,
                                     marks_value);
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* marks_revise = cmd_marks->add_subcommand("revise", "Revise marks (justified)");
  marks_revise->add_option("--exam", exam_id)->required();
  marks_revise->add_option("--id", script_id)->required();
  marks_revise->add_option("--marks", marks_value)->required();
  marks_revise->add_option("--why", marks_why)->required();
  marks_revise->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto r = s.engine().revise_marks(parse_actor(sender_opt), exam_id, script_id,
                                     marks_value, marks_why);
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* marks_publish = cmd_marks->add_subcommand("publish", "Publish a result");
  marks_publish->add_option("--exam", exam_id)->required();
  marks_publish->add_option("--id", script_id)->required();
  marks_publish->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto r = s.engine().publish_result(parse_actor(sender_opt), exam_id, script_id);
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* marks_show = cmd_marks->add_subcommand("show", "Show a script's result");
  marks_show->add_option("--id", script_id)->required();
  marks_show->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto v = s.engine().result(script_id);
    emit_json_or(as_json,
                 nlohmann::json{{"script_id", v.script_id},
                                {"exam_id", v.exam_id},
                                {"marks", v.marks},
                                {"status", to_string(v.status)},
                                {"revision_count", v.revision_count},
                                {"submitted_by", v.submitted_by.hex()}},
                 [&] {
                   std::cout << v.script_id << " marks=" << v.marks
                             << " status=" << to_string(v.status)
                             << " revisions=" << v.revision_count << '\n';
                 });
    return 0;
  }));

  auto* marks_audit = cmd_marks->add_subcommand("audit", "Print the audit trail");
  marks_audit->add_option("--id", script_id)->required();
  marks_audit->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto trail = s.engine().audit_trail(script_id);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : trail) {
      nlohmann::json j{{"index", e.index},
                       {"new_marks", e.new_marks},
                       {"actor", e.actor.hex()},
                       {"justification", e.justification},
                       {"ledger_seq", e.ledger_seq}};
      if (e.old_marks) j["old_marks"] = *e.old_marks;
      arr.push_back(std::move(j));
    }
    emit_json_or(as_json, arr, [&] {
      for (const auto& e : trail) {
        std::cout << '#' << e.index << ' ';
        if (e.old_marks) {
          std::cout << *e.old_marks << " -> " << e.new_marks << " (\""
                    << e.justification << "\")";
        } else {
          std::cout << "submitted " << e.new_marks;
        }
        std::cout << " by " << e.actor.hex() << " seq=" << e.ledger_seq << '\n';
      }
    });
    return 0;
  }));

  // ---- gradesheet ---------------------------------------------------------
  auto* cmd_sheet = app.add_subcommand("gradesheet", "Published grade sheets");
  cmd_sheet->require_subcommand(1);

  auto* sheet_print = cmd_sheet->add_subcommand("print", "Print the CSV to stdout");
  sheet_print->add_option("--exam", exam_id)->required();
  sheet_print->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    std::cout << s.engine().grade_sheet_csv(exam_id);
    return 0;
  }));

  auto* sheet_export = cmd_sheet->add_subcommand("export", "Write the CSV under the store");
  sheet_export->add_option("--exam", exam_id)->required();
  sheet_export->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto path = s.service().export_grade_sheet(exam_id);
    emit_json_or(as_json, nlohmann::json{{"path", path.string()}},
                 [&] { std::cout << path.string() << '\n'; });
    return 0;
  }));

  // ---- zkp ----------------------------------------------------------------
  auto* cmd_zkp = app.add_subcommand("zkp", "Commit-reveal eligibility checks");
  cmd_zkp->require_subcommand(1);

  std::uint64_t criteria_id = 1;
  std::int64_t min_cgpa = 0, min_grade = 0, min_credits = 0, pass_mark = 0;
  bool require_all_pass = false;
  std::string zkp_student, record_file, salt_hex;

  auto* zkp_post = cmd_zkp->add_subcommand("post-criteria", "Publish a criteria set");
  zkp_post->add_option("--criteria-id", criteria_id)->required();
  zkp_post->add_option("--min-cgpa", min_cgpa, "Scaled x100: 250 = 2.50")->required();
  zkp_post->add_option("--min-grade", min_grade)->required();
  zkp_post->add_option("--min-credits", min_credits)->required();
  zkp_post->add_flag("--require-all-pass", require_all_pass);
  zkp_post->add_option("--pass-mark", pass_mark);
  zkp_post->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    zkp::CriteriaSet c{criteria_id, min_cgpa, min_grade,
                       min_credits, require_all_pass, pass_mark};
    auto r = s.engine().zkp_post_criteria(parse_actor(sender_opt), c);
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* zkp_show = cmd_zkp->add_subcommand("show-criteria", "Show a criteria set");
  zkp_show->add_option("--criteria-id", criteria_id)->required();
  zkp_show->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto c = s.engine().criteria_of(criteria_id);
    emit_json_or(as_json,
                 nlohmann::json{{"criteria_id", c.criteria_id},
                                {"min_scaled_cgpa", c.min_scaled_cgpa},
                                {"min_grade_threshold", c.min_grade_threshold},
                                {"min_total_credits", c.min_total_credits},
                                {"require_all_pass", c.require_all_pass},
                                {"pass_mark", c.pass_mark}},
                 [&] {
                   std::cout << "criteria " << c.criteria_id << ": cgpa>="
                             << c.min_scaled_cgpa << " grade>=" << c.min_grade_threshold
                             << " credits>=" << c.min_total_credits;
                   if (c.require_all_pass) std::cout << " all-pass>=" << c.pass_mark;
                   std::cout << '\n';
                 });
    return 0;
  }));

  auto* zkp_commit = cmd_zkp->add_subcommand(
      "commit", "Commit a student's record (requires all their results published)");
  zkp_commit->add_option("--student", zkp_student)->required();
  zkp_commit->add_option("--record", record_file, "JSON: scaled_cgpa, marks[], credits[]")
      ->required();
  zkp_commit->add_option("--salt", salt_hex, "32-byte hex")->required();
  zkp_commit->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto outcome = s.service().commit_academic_record(
        parse_actor(sender_opt), parse_actor(zkp_student),
        record_from_file(record_file), salt_from_hex(salt_hex));
    s.persist();
    int code = emit_receipt(as_json, outcome.receipt);
    if (!as_json && outcome.receipt.status == TxStatus::SUCCESS) {
      std::cout << "commitment " << hash_hex(outcome.commit_hash) << '\n';
    }
    return code;
  }));

  auto* zkp_prove = cmd_zkp->add_subcommand(
      "prove", "Reopen a committed record against posted criteria");
  zkp_prove->add_option("--student", zkp_student)->required();
  zkp_prove->add_option("--criteria-id", criteria_id)->required();
  zkp_prove->add_option("--record", record_file)->required();
  zkp_prove->add_option("--salt", salt_hex)->required();
  zkp_prove->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    Address student = parse_actor(zkp_student);
    auto r = s.engine().zkp_prove(student, student, criteria_id,
                                  record_from_file(record_file),
                                  salt_from_hex(salt_hex));
    s.persist();
    return emit_receipt(as_json, r);
  }));

  auto* zkp_outcome = cmd_zkp->add_subcommand("outcome", "Show a recorded outcome");
  zkp_outcome->add_option("--criteria-id", criteria_id)->required();
  zkp_outcome->add_option("--student", zkp_student)->required();
  zkp_outcome->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    bool ok = s.engine().eligibility_outcome(criteria_id, parse_actor(zkp_student));
    emit_json_or(as_json, nlohmann::json{{"eligible", ok}},
                 [&] { std::cout << (ok ? "eligible" : "not eligible") << '\n'; });
    return 0;
  }));

  // ---- ledger -------------------------------------------------------------
  auto* cmd_ledger = app.add_subcommand("ledger", "Chain inspection");
  cmd_ledger->require_subcommand(1);

  auto* ledger_verify = cmd_ledger->add_subcommand(
      "verify", "Recompute the hash chain and state root");
  ledger_verify->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();  // replay already verifies; verify again on the loaded chain
    auto v = s.engine().verify_chain();
    bool root_ok = s.engine().state_root() == s.engine().recompute_state_root();
    emit_json_or(as_json,
                 nlohmann::json{{"entries", s.engine().chain().size()},
                                {"chain_valid", v.valid},
                                {"state_root_valid", root_ok},
                                {"state_root", hash_hex(s.engine().state_root())}},
                 [&] {
                   std::cout << "chain OK: " << s.engine().chain().size()
                             << " entries, state root "
                             << hash_hex(s.engine().state_root()) << '\n';
                 });
    return v.valid && root_ok ? 0 : 1;
  }));

  std::uint64_t show_seq = 0;
  std::uint64_t show_tail = 10;
  auto* ledger_show = cmd_ledger->add_subcommand("show", "Show entries");
  auto* seq_opt = ledger_show->add_option("--seq", show_seq, "One entry, full JSON");
  ledger_show->add_option("--tail", show_tail, "Last N entries, one line each");
  ledger_show->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    const auto& chain = s.engine().chain();
    if (seq_opt->count() > 0) {
      if (show_seq >= chain.size()) throw CliError("no entry with that seq");
      std::cout << nlohmann::json(chain[show_seq]).dump(2) << '\n';
      return 0;
    }
    std::size_t from = chain.size() > show_tail ? chain.size() - show_tail : 0;
    for (std::size_t i = from; i < chain.size(); ++i) {
      const auto& e = chain[i];
      std::cout << e.tx.seq << ' ' << to_string(e.tx.target_module) << '.'
                << e.tx.op_name << ' '
                << (e.receipt.status == TxStatus::SUCCESS ? "SUCCESS" : "REVERTED")
                << " gas=" << e.receipt.gas_used;
      if (!e.receipt.revert_reason.empty()) {
        std::cout << " reason: " << e.receipt.revert_reason;
      }
      std::cout << '\n';
    }
    return 0;
  }));

  auto* ledger_stats = cmd_ledger->add_subcommand("stats", "Gas totals per module");
  ledger_stats->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    auto g = s.engine().gas_report();
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [m, row] : g.workflow) {
      per[std::string(to_string(m))] = {{"tx", row.tx_count}, {"gas", row.gas}};
    }
    emit_json_or(
        as_json,
        nlohmann::json{{"workflow_tx", g.workflow_tx},
                       {"workflow_gas", g.workflow_gas},
                       {"deployments", g.deployment_count},
                       {"deployment_gas", g.deployment_gas},
                       {"failed_tx", g.failed_tx},
                       {"total_tx", g.total_tx},
                       {"total_gas", g.total_gas},
                       {"modules", per}},
        [&] {
          for (const auto& [m, row] : g.workflow) {
            std::cout << to_string(m) << ": tx=" << row.tx_count
                      << " gas=" << row.gas << '\n';
          }
          std::cout << "workflow: tx=" << g.workflow_tx << " gas=" << g.workflow_gas
                    << " failed=" << g.failed_tx << '\n';
          std::cout << "deployment: tx=" << g.deployment_count
                    << " gas=" << g.deployment_gas << '\n';
          std::cout << "total: tx=" << g.total_tx << " gas=" << g.total_gas << '\n';
        });
    return 0;
  }));

  std::string export_out;
  auto* ledger_export = cmd_ledger->add_subcommand("export", "Dump the chain as JSONL");
  ledger_export->add_option("--out", export_out)->required();
  ledger_export->callback(run([&] {
    Session s(data_dir_opt, false);
    s.load();
    std::ofstream out(export_out, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError("cannot write " + export_out);
    s.engine().dump_jsonl(out);
    std::cout << "wrote " << s.engine().chain().size() << " entries to "
              << export_out << '\n';
    return 0;
  }));

  // ---- bench --------------------------------------------------------------
  auto* cmd_bench = app.add_subcommand("bench", "Workload generation and benchmarks");
  cmd_bench->require_subcommand(1);

  std::string scenario_name = "small";
  std::string bench_out = "bench-out";
  bool wall_clock = false;
  double opt_gwei = -1.0, opt_eth_usd = -1.0, opt_fraction = -1.0;
  std::uint64_t est_gas = 0;

  auto load_scenario = [&]() -> workload::ScenarioSpec {
    if (scenario_name == "small" || scenario_name == "medium" ||
        scenario_name == "large") {
      return workload::ScenarioSpec::builtin(scenario_name);
    }
    auto raw = read_file_bytes(scenario_name);
    return workload::ScenarioSpec::from_json(
        nlohmann::json::parse(raw.begin(), raw.end()));
  };
  auto effective_pricing = [&]() {
    workload::PricingConfig p;
    if (opt_gwei >= 0) p.gas_price_gwei = opt_gwei;
    if (opt_eth_usd >= 0) p.eth_usd = opt_eth_usd;
    if (opt_fraction >= 0) p.storage_fraction = opt_fraction;
    return p;
  };

  auto* bench_run = cmd_bench->add_subcommand("run", "Execute a scenario end to end");
  bench_run->add_option("--scenario", scenario_name, "small|medium|large or a JSON file");
  bench_run->add_option("--out", bench_out, "Output directory")->required();
  bench_run->add_flag("--wall-clock", wall_clock,
                      "Measure real time (report is then not reproducible)");
  bench_run->add_option("--gas-price-gwei", opt_gwei);
  bench_run->add_option("--eth-usd", opt_eth_usd);
  bench_run->add_option("--storage-fraction", opt_fraction);
  bench_run->callback(run([&] {
    workload::RunOptions opts;
    opts.out_dir = bench_out;
    opts.logical_clock = !wall_clock;
    auto report = workload::run_benchmark(load_scenario(), effective_pricing(), opts);
    if (as_json) {
      std::cout << report.to_json().dump(2) << '\n';
    } else {
      std::cout << report.to_csv();
    }
    return report.failed_tx == 0 ? 0 : 1;
  }));

  auto* bench_plan = cmd_bench->add_subcommand(
      "plan", "Show a scenario's expected transaction counts without running it");
  bench_plan->add_option("--scenario", scenario_name);
  bench_plan->callback(run([&] {
    auto spec = load_scenario();
    auto plan = workload::generate_scenario(spec);
    std::uint64_t scripts = workload::total_scripts(spec);
    std::uint64_t revisions = workload::revision_count(spec);
    std::uint64_t grants = spec.roles.admins + spec.roles.examiners +
                           spec.roles.scrutinizers + spec.roles.students;
    std::uint64_t lifecycle = 5ull * spec.exam_count + scripts;
    std::uint64_t audit_tx = 2ull * scripts + revisions;
    emit_json_or(
        as_json,
        nlohmann::json{{"scenario", spec.name},
                       {"exams", spec.exam_count},
                       {"scripts", scripts},
                       {"revisions", revisions},
                       {"role_grants", grants},
                       {"lifecycle_tx", lifecycle},
                       {"registry_tx", scripts},
                       {"audit_tx", audit_tx},
                       {"workflow_tx", grants + lifecycle + scripts + audit_tx},
                       {"ledger_entries", plan.expected_tx}},
        [&] {
          std::cout << "scenario " << spec.name << ": exams=" << spec.exam_count
                    << " scripts=" << scripts << " revisions=" << revisions << '\n';
          std::cout << "workflow tx " << grants + lifecycle + scripts + audit_tx
                    << " (grants " << grants << " + lifecycle " << lifecycle
                    << " + registry " << scripts << " + audit " << audit_tx << ")\n";
          std::cout << "ledger entries " << plan.expected_tx
                    << " (including 4 deployments)\n";
        });
    return 0;
  }));

  auto* bench_spec = cmd_bench->add_subcommand("spec", "Print a scenario spec as JSON");
  bench_spec->add_option("--scenario", scenario_name);
  bench_spec->callback(run([&] {
    std::cout << load_scenario().to_json().dump(2) << '\n';
    return 0;
  }));

  auto* bench_estimate = cmd_bench->add_subcommand(
      "estimate", "Storage and cost figures for a gas total");
  bench_estimate->add_option("--gas", est_gas)->required();
  bench_estimate->add_option("--gas-price-gwei", opt_gwei);
  bench_estimate->add_option("--eth-usd", opt_eth_usd);
  bench_estimate->add_option("--storage-fraction", opt_fraction);
  bench_estimate->callback(run([&] {
    auto pricing = effective_pricing();
    GasSchedule gas;
    auto storage = workload::estimate_storage(est_gas, pricing.storage_fraction,
                                              gas.sstore_new);
    auto cost = workload::estimate_cost(est_gas, pricing);
    emit_json_or(as_json,
                 nlohmann::json{{"gas", est_gas},
                                {"sstore_ops", storage.sstore_ops},
                                {"storage_kb", storage.kilobytes},
                                {"eth", cost.eth},
                                {"usd", cost.usd}},
                 [&] {
                   char buf[160];
                   std::snprintf(buf, sizeof buf,
                                 "gas=%llu sstore_ops=%llu storage_kb=%.3f "
                                 "eth=%.6f usd=%.2f\n",
                                 static_cast<unsigned long long>(est_gas),
                                 static_cast<unsigned long long>(storage.sstore_ops),
                                 storage.kilobytes, cost.eth, cost.usd);
                   std::cout << buf;
                 });
    return 0;
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const QueryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
