#include <doctest.h>

#include <memory>
#include <random>
#include <sstream>
#include <vector>

#include "support/fixtures.hpp"
#include "support/keccak_oracle.hpp"

using namespace examledger;
using fixtures::reverted;
using fixtures::succeeded;

namespace {

// Entry hash recomputed with the independent keccak and the engine's
// canonical encodings: keccak256(prev || enc(tx) || enc(receipt)).
Hash256 oracle_entry_hash(const Hash256& prev, const ChainEntry& e) {
  std::vector<std::uint8_t> buf(prev.begin(), prev.end());
  Bytes tx = Engine::encode_tx(e.tx);
  Bytes rc = Engine::encode_receipt(e.receipt);
  buf.insert(buf.end(), tx.begin(), tx.end());
  buf.insert(buf.end(), rc.begin(), rc.end());
  auto h = oracle::keccak256(buf.data(), buf.size());
  Hash256 out{};
  std::copy(h.begin(), h.end(), out.begin());
  return out;
}

// A short but representative chain: deployments, grants, one exam run all
// the way through with a revision, and one commit-reveal proof.
void run_sample_flow(fixtures::Campus& c) {
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);
  c.run_full_pipeline(1, "TS_00000000000000c1", 72, /*revise=*/true);

  zkp::AcademicRecord record;
  record.scaled_cgpa = 372;
  record.marks = {75};
  record.credits = {4};
  Hash256 salt{};
  salt[0] = 0xab;
  zkp::CriteriaSet crit;
  crit.criteria_id = 1;
  crit.min_scaled_cgpa = 200;
  REQUIRE(succeeded(c.engine.zkp_commit(c.admin, c.student, record, salt)));
  REQUIRE(succeeded(c.engine.zkp_post_criteria(c.admin, crit)));
  REQUIRE(succeeded(c.engine.zkp_prove(c.student, c.student, 1, record, salt)));
  // One revert on the chain too: replay must reproduce failures as well.
  REQUIRE(reverted(c.engine.grant_role(c.outsider, c.outsider, Role::ADMIN),
                   Err::NotAdmin));
}

}  // namespace

TEST_CASE("deployment entries carry the configured fixed gas") {
  fixtures::Campus c(/*deploy=*/true);
  const auto& chain = c.engine.chain();
  REQUIRE(chain.size() >= 4);

  const std::uint64_t expect[4] = {1'183'982, 1'600'000, 1'800'000, 3'800'000};
  std::uint64_t sum = 0;
  for (int i = 0; i < 4; ++i) {
    CHECK(chain[i].tx.op_name == "deploy");
    CHECK(succeeded(chain[i].receipt));
    CHECK(chain[i].receipt.gas_used == expect[i]);
    REQUIRE(chain[i].receipt.events.size() == 1);
    CHECK(chain[i].receipt.events[0].name == "ContractDeployed");
    sum += chain[i].receipt.gas_used;
  }
  CHECK(sum == 8'383'982);

  GasReport rep = c.engine.gas_report();
  CHECK(rep.deployment_count == 4);
  CHECK(rep.deployment_gas == 8'383'982);
  // The role grants from the fixture are workflow transactions.
  CHECK(rep.workflow_tx == 5);
  CHECK(rep.workflow.at(TargetModule::RBAC).tx_count == 5);
}

TEST_CASE("deployment is one-shot") {
  fixtures::Campus c(/*deploy=*/true);
  CHECK(reverted(c.engine.call(c.deployer, TargetModule::RBAC, "deploy", {}),
                 Err::AlreadyDeployed));
  CHECK_THROWS_AS(c.engine.deploy_contracts(), std::logic_error);

  // The commit-reveal module is not one of the four deployed contracts.
  fixtures::Campus fresh;
  CHECK(reverted(fresh.engine.call(fresh.deployer, TargetModule::ZKP, "deploy", {}),
                 Err::UnknownOp));
}

TEST_CASE("every entry hash recomputes from prev || tx || receipt") {
  fixtures::Campus c(/*deploy=*/true);
  run_sample_flow(c);

  const auto& chain = c.engine.chain();
  REQUIRE(chain.size() > 10);

  Hash256 prev{};  // genesis predecessor: 32 zero bytes
  for (std::size_t i = 0; i < chain.size(); ++i) {
    CHECK(chain[i].tx.seq == i);
    CHECK(chain[i].entry_hash == oracle_entry_hash(prev, chain[i]));
    prev = chain[i].entry_hash;
  }
  CHECK(c.engine.verify_chain().valid);
}

TEST_CASE("verify_entries pinpoints the first mutated entry") {
  fixtures::Campus c(/*deploy=*/true);
  run_sample_flow(c);
  const auto& chain = c.engine.chain();

  SUBCASE("payload byte flip") {
    auto copy = chain;
    std::size_t k = 6;
    REQUIRE_FALSE(copy[k].tx.payload.empty());
    copy[k].tx.payload[0] ^= 0x01;
    auto v = Engine::verify_entries(copy);
    CHECK_FALSE(v.valid);
    CHECK(v.first_bad_seq == k);
  }

  SUBCASE("stored gas edited") {
    auto copy = chain;
    std::size_t k = 2;
    copy[k].receipt.gas_used -= 1;
    auto v = Engine::verify_entries(copy);
    CHECK_FALSE(v.valid);
    CHECK(v.first_bad_seq == k);
  }

  SUBCASE("entry hash itself edited") {
    auto copy = chain;
    std::size_t k = copy.size() - 1;
    copy[k].entry_hash[31] ^= 0x80;
    auto v = Engine::verify_entries(copy);
    CHECK_FALSE(v.valid);
    CHECK(v.first_bad_seq == k);
  }

  SUBCASE("sequence renumbering") {
    auto copy = chain;
    std::size_t k = 4;
    copy[k].tx.seq = 99;
    auto v = Engine::verify_entries(copy);
    CHECK_FALSE(v.valid);
    CHECK(v.first_bad_seq == k);
  }

  SUBCASE("randomized single-byte mutations") {
    std::mt19937_64 rng(0xc4a1);
    for (int trial = 0; trial < 20; ++trial) {
      auto copy = chain;
      std::size_t k = rng() % copy.size();
      switch (rng() % 4) {
        case 0: copy[k].tx.timestamp ^= (1ull << (rng() % 40)); break;
        case 1: copy[k].receipt.gas_used ^= (1ull << (rng() % 20)); break;
        case 2: copy[k].entry_hash[rng() % 32] ^= static_cast<std::uint8_t>(
                    1u << (rng() % 8));
                break;
        case 3:
          if (!copy[k].tx.payload.empty()) {
            copy[k].tx.payload[rng() % copy[k].tx.payload.size()] ^=
                static_cast<std::uint8_t>(1u + rng() % 255);
          } else {
            copy[k].tx.op_name.push_back('x');
          }
          break;
      }
      auto v = Engine::verify_entries(copy);
      CHECK_FALSE(v.valid);
      CHECK(v.first_bad_seq == k);
    }
  }
}

TEST_CASE("reverted transactions roll back completely but still chain") {
  fixtures::Campus c;
  c.create_exam(1);

  Hash256 root_before = c.engine.state_root();
  std::size_t slots_before = c.engine.state().slot_count();
  std::size_t len_before = c.engine.chain().size();

  // Fails at the duplicate-exam guard after the admin check.
  Receipt r = c.engine.create_exam(c.admin, 1, "shadow exam");
  REQUIRE(reverted(r, Err::DuplicateExam));

  CHECK(c.engine.state_root() == root_before);
  CHECK(c.engine.state().slot_count() == slots_before);
  CHECK(r.state_root_hash == root_before);  // receipt reports the post-rollback root
  CHECK(r.gas_used >= c.engine.config().gas.tx_base);
  CHECK(r.events.empty());

  // The failure itself is on the record.
  REQUIRE(c.engine.chain().size() == len_before + 1);
  CHECK(c.engine.chain().back().receipt.status == TxStatus::REVERTED);
  CHECK(c.engine.verify_chain().valid);
}

TEST_CASE("malformed payload reverts without touching state") {
  fixtures::Campus c;
  Hash256 root_before = c.engine.state_root();
  Receipt r = c.engine.call(c.admin, TargetModule::RBAC, "grantRole",
                            Bytes{0x01, 0x02});  // truncated arguments
  CHECK(r.status == TxStatus::REVERTED);
  CHECK(r.revert_reason == "Malformed payload");
  CHECK(c.engine.state_root() == root_before);
}

TEST_CASE("submit rejects out-of-order sequence numbers") {
  fixtures::Campus c;
  Transaction tx;
  tx.seq = c.engine.chain().size() + 5;
  tx.sender = c.admin;
  tx.target_module = TargetModule::RBAC;
  tx.op_name = "grantRole";
  CHECK_THROWS_AS((void)c.engine.submit(tx), std::invalid_argument);
}

TEST_CASE("dump, parse, replay reproduces the chain bit for bit") {
  fixtures::Campus c(/*deploy=*/true);
  run_sample_flow(c);

  std::stringstream ss;
  c.engine.dump_jsonl(ss);

  auto parsed = Engine::parse_jsonl(ss);
  REQUIRE(parsed.size() == c.engine.chain().size());

  Engine replica(fixtures::Campus::config_with(fixtures::addr(1)));
  replica.replay(parsed);

  REQUIRE(replica.chain().size() == c.engine.chain().size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(replica.chain()[i].entry_hash == c.engine.chain()[i].entry_hash);
  }
  CHECK(replica.state_root() == c.engine.state_root());
  CHECK(replica.recompute_state_root() == c.engine.state_root());
}

TEST_CASE("replay refuses a doctored receipt") {
  fixtures::Campus c(/*deploy=*/true);
  c.create_exam(1);

  std::stringstream ss;
  c.engine.dump_jsonl(ss);
  auto parsed = Engine::parse_jsonl(ss);
  parsed.back().receipt.gas_used += 1;

  Engine replica(fixtures::Campus::config_with(fixtures::addr(1)));
  CHECK_THROWS_WITH_AS(replica.replay(parsed),
                       doctest::Contains("replay divergence"),
                       std::runtime_error);
}

TEST_CASE("parse_jsonl reports the offending line") {
  std::stringstream ss("this is not json\n");
  CHECK_THROWS_WITH_AS((void)Engine::parse_jsonl(ss),
                       doctest::Contains("ledger line 1"),
                       std::runtime_error);
}

TEST_CASE("injected clock stamps transactions") {
  fixtures::Campus c;
  std::uint64_t now = 1'000;
  c.engine.set_clock([&now] { return now += 10; });
  c.engine.create_exam(c.admin, 1, "clocked");
  c.engine.enroll(c.admin, 1, c.student);
  const auto& chain = c.engine.chain();
  REQUIRE(chain.size() >= 2);
  CHECK(chain[chain.size() - 2].tx.timestamp == 1'010);
  CHECK(chain[chain.size() - 1].tx.timestamp == 1'020);
}

TEST_CASE("identical inputs yield identical chains") {
  auto build = [] {
    auto engine = std::make_unique<Engine>(
        fixtures::Campus::config_with(fixtures::addr(1)));
    std::uint64_t now = 5'000;
    engine->set_clock([now]() mutable { return now += 100; });
    engine->deploy_contracts();
    engine->grant_role(fixtures::addr(1), fixtures::addr(2), Role::ADMIN);
    engine->create_exam(fixtures::addr(2), 7, "determinism check");
    return engine;
  };
  auto a = build();
  auto b = build();
  REQUIRE(a->chain().size() == b->chain().size());
  CHECK(a->chain().back().entry_hash == b->chain().back().entry_hash);
  CHECK(a->state_root() == b->state_root());
}

TEST_CASE("trace confirms guards run before writes") {
  fixtures::Campus c;
  REQUIRE(succeeded(c.engine.create_exam(c.admin, 3, "guarded")));
  const TxTrace& t = c.engine.last_trace();
  CHECK(t.guard_checks > 0);
  CHECK(t.writes_total > 0);
  CHECK(t.writes_before_first_guard == 0);
}
