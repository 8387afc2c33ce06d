#include <doctest.h>

#include "examledger/hash_registry.hpp"
#include "support/fixtures.hpp"
#include "support/keccak_oracle.hpp"

using namespace examledger;
using fixtures::reverted;
using fixtures::succeeded;

namespace {

const std::string kSid = "TS_9f3b7c21a4e8d056";

}  // namespace

TEST_CASE("script id format: TS_ plus exactly 16 lowercase hex chars") {
  CHECK(registry::is_valid_script_id("TS_0123456789abcdef"));
  CHECK(registry::is_valid_script_id("TS_ffffffffffffffff"));
  CHECK_FALSE(registry::is_valid_script_id("TS_0123456789ABCDEF"));  // uppercase
  CHECK_FALSE(registry::is_valid_script_id("TS_0123456789abcde"));   // 15
  CHECK_FALSE(registry::is_valid_script_id("TS_0123456789abcdef0"));  // 17
  CHECK_FALSE(registry::is_valid_script_id("TX_0123456789abcdef"));
  CHECK_FALSE(registry::is_valid_script_id("ts_0123456789abcdef"));
  CHECK_FALSE(registry::is_valid_script_id(""));
  CHECK_FALSE(registry::is_valid_script_id("TS_0123456789abcdeg"));
}

TEST_CASE("registration records the anchor and emits the indexed event") {
  fixtures::Campus c;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);

  Hash256 h = fixtures::content_hash_of("scanned answer bytes");
  Receipt r = c.engine.register_script(c.admin, 1, kSid, h, c.student);
  REQUIRE(succeeded(r));

  auto rec = c.engine.script_record(kSid);
  CHECK(rec.script_id == kSid);
  CHECK(rec.exam_id == 1);
  CHECK(rec.content_hash == h);
  CHECK(rec.registered_by == c.admin);
  CHECK(rec.ledger_seq == r.tx_seq);

  REQUIRE(r.events.size() == 1);
  const Event& ev = r.events[0];
  CHECK(ev.name == "HashRegistered");
  REQUIRE(ev.topics.size() == 2);
  CHECK(ev.topics[0] == keccak256(std::string_view("HashRegistered")));
  CHECK(ev.topics[1] == keccak256(std::string_view(kSid)));

  CHECK(c.engine.script_exists(kSid));
  CHECK(c.engine.script_hash(kSid) == h);
}

TEST_CASE("registration guard order") {
  fixtures::Campus c;
  c.create_exam(1);
  Hash256 h = fixtures::content_hash_of("x");

  // Sender check first: even a malformed id reports NotAdmin for outsiders.
  CHECK(reverted(c.engine.register_script(c.outsider, 1, "bogus", h, c.student),
                 Err::NotAdmin));
  // Then the id shape, before any exam lookup.
  CHECK(reverted(c.engine.register_script(c.admin, 99, "bogus", h, c.student),
                 Err::InvalidScriptId));
  // Then the exam: missing exam.
  CHECK(reverted(c.engine.register_script(c.admin, 99, kSid, h, c.student),
                 Err::UnknownExam));
  // Exam exists but is not ACTIVE.
  CHECK(reverted(c.engine.register_script(c.admin, 1, kSid, h, c.student),
                 Err::WrongState));
  // ACTIVE but the student is not enrolled.
  c.engine.create_exam(c.admin, 2, "t2");
  c.advance_to(2, ExamState::ACTIVE);
  Address stranger = fixtures::addr(12);
  c.engine.grant_role(c.admin, stranger, Role::STUDENT);
  CHECK(reverted(c.engine.register_script(c.admin, 2, kSid, h, stranger),
                 Err::NotEnrolled));
  // Finally duplicates.
  c.engine.enroll(c.admin, 2, c.student);
  CHECK(succeeded(c.engine.register_script(c.admin, 2, kSid, h, c.student)));
  CHECK(reverted(c.engine.register_script(c.admin, 2, kSid, h, c.student),
                 Err::DuplicateScriptId));
}

TEST_CASE("script ids are unique across exams (registry is global)") {
  fixtures::Campus c;
  c.create_exam(1);
  c.create_exam(2);
  c.advance_to(1, ExamState::ACTIVE);
  c.advance_to(2, ExamState::ACTIVE);
  Hash256 h = fixtures::content_hash_of("x");
  CHECK(succeeded(c.engine.register_script(c.admin, 1, kSid, h, c.student)));
  CHECK(reverted(c.engine.register_script(c.admin, 2, kSid, h, c.student),
                 Err::DuplicateScriptId));
}

TEST_CASE("per-exam listing preserves registration order") {
  fixtures::Campus c;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);
  std::vector<std::string> ids = {"TS_000000000000000a", "TS_0000000000000009",
                                  "TS_0000000000000004"};
  for (const auto& id : ids) {
    REQUIRE(succeeded(c.register_script(1, id)));
  }
  CHECK(c.engine.scripts_for_exam(1) == ids);
  CHECK(c.engine.scripts_for_exam(2).empty());
}

TEST_CASE("nothing in registry state or events identifies the student") {
  fixtures::Campus c;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);
  Receipt r = c.register_script(1, kSid);
  REQUIRE(succeeded(r));

  auto contains_student = [&](ByteSpan blob) {
    const auto& a = c.student.value;
    if (blob.size() < a.size()) return false;
    for (std::size_t i = 0; i + a.size() <= blob.size(); ++i) {
      if (std::equal(a.begin(), a.end(), blob.begin() + i)) return true;
    }
    return false;
  };

  // Ledger-side: the registry record and index slots.
  bool clean = true;
  c.engine.state().for_each([&](TargetModule m, ByteSpan key, ByteSpan value) {
    if (m != TargetModule::HASH_REGISTRY) return;
    if (contains_student(key) || contains_student(value)) clean = false;
  });
  CHECK(clean);

  // Event-side: topics hash the script id, data carries exam/sid/hash only.
  for (const auto& ev : r.events) {
    CHECK_FALSE(contains_student(ByteSpan(ev.data)));
  }
}
