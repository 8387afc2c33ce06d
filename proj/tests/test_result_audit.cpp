#include <doctest.h>

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "support/fixtures.hpp"

using namespace examledger;
using fixtures::reverted;
using fixtures::succeeded;

namespace {

const std::string kSid = "TS_5a5a5a5a5a5a5a01";

// Drives one exam to SUBMITTED with one registered script, ready for marks.
// (Campus owns an Engine and is pinned in place, hence the out-param shape.)
void drive_to_submitted(fixtures::Campus& c, std::uint64_t exam_id = 1,
                        const std::string& sid = kSid) {
  c.create_exam(exam_id);
  c.advance_to(exam_id, ExamState::ACTIVE);
  c.register_script(exam_id, sid);
  c.advance_to(exam_id, ExamState::SUBMITTED);
}

}  // namespace

TEST_CASE("submitting marks stores the record and emits MarksSubmitted") {
  fixtures::Campus c;
  drive_to_submitted(c);

  Receipt r = c.engine.submit_marks(c.examiner, 1, kSid, 70);
  REQUIRE(succeeded(r));

  auto res = c.engine.result(kSid);
  CHECK(res.script_id == kSid);
  CHECK(res.exam_id == 1);
  CHECK(res.marks == 70);
  CHECK(res.status == MarkStatus::SUBMITTED);
  CHECK(res.revision_count == 0);
  CHECK(res.submitted_by == c.examiner);

  REQUIRE(r.events.size() == 1);
  const Event& ev = r.events[0];
  CHECK(ev.name == "MarksSubmitted");
  REQUIRE(ev.topics.size() == 2);
  CHECK(ev.topics[0] == keccak256(std::string_view("MarksSubmitted")));
  CHECK(ev.topics[1] == keccak256(std::string_view(kSid)));
}

TEST_CASE("submit guard order") {
  SUBCASE("examiner role is checked before anything else") {
    fixtures::Campus c;
  drive_to_submitted(c);
    // Even a nonexistent exam reports the role failure first.
    CHECK(reverted(c.engine.submit_marks(c.outsider, 99, "TS_nope", 10),
                   Err::NotExaminer));
    CHECK(reverted(c.engine.submit_marks(c.admin, 1, kSid, 10),
                   Err::NotExaminer));
  }

  SUBCASE("missing exam") {
    fixtures::Campus c;
  drive_to_submitted(c);
    CHECK(reverted(c.engine.submit_marks(c.examiner, 99, kSid, 10),
                   Err::UnknownExam));
  }

  SUBCASE("exam must sit in SUBMITTED") {
    fixtures::Campus c;
    c.create_exam(1);
    c.advance_to(1, ExamState::ACTIVE);
    c.register_script(1, kSid);
    CHECK(reverted(c.engine.submit_marks(c.examiner, 1, kSid, 10),
                   Err::WrongState));
  }

  SUBCASE("unregistered script") {
    fixtures::Campus c;
  drive_to_submitted(c);
    CHECK(reverted(c.engine.submit_marks(c.examiner, 1, "TS_00000000000000aa", 10),
                   Err::UnknownScript));
  }

  SUBCASE("script registered under a different exam") {
    fixtures::Campus c;
    drive_to_submitted(c, 1);
    c.create_exam(2);
    c.advance_to(2, ExamState::SUBMITTED);
    // kSid belongs to exam 1; submitting it against exam 2 must not work.
    CHECK(reverted(c.engine.submit_marks(c.examiner, 2, kSid, 10),
                   Err::UnknownScript));
  }

  SUBCASE("double submission") {
    fixtures::Campus c;
  drive_to_submitted(c);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 55)));
    CHECK(reverted(c.engine.submit_marks(c.examiner, 1, kSid, 60),
                   Err::AlreadySubmitted));
    CHECK(c.engine.result(kSid).marks == 55);  // original untouched
  }

  SUBCASE("marks range: 0 and max pass, -1 and max+1 revert") {
    fixtures::Campus c;
  drive_to_submitted(c);
    CHECK(reverted(c.engine.submit_marks(c.examiner, 1, kSid, -1),
                   Err::MarksOutOfRange));
    CHECK(reverted(c.engine.submit_marks(c.examiner, 1, kSid, 101),
                   Err::MarksOutOfRange));
    CHECK(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 0)));

    fixtures::Campus c2;
    drive_to_submitted(c2);
    CHECK(succeeded(c2.engine.submit_marks(c2.examiner, 1, kSid, 100)));
  }
}

TEST_CASE("revising marks updates the record and emits MarksRevised") {
  fixtures::Campus c;
  drive_to_submitted(c);
  REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 70)));
  c.advance_to(1, ExamState::SCRUTINIZED);

  Receipt r = c.engine.revise_marks(c.scrutinizer, 1, kSid, 65,
                                    "Totals re-added after scrutiny");
  REQUIRE(succeeded(r));

  auto res = c.engine.result(kSid);
  CHECK(res.marks == 65);
  CHECK(res.status == MarkStatus::REVISED);
  CHECK(res.revision_count == 1);

  REQUIRE(r.events.size() == 1);
  const Event& ev = r.events[0];
  CHECK(ev.name == "MarksRevised");
  REQUIRE(ev.topics.size() == 2);
  CHECK(ev.topics[1] == keccak256(std::string_view(kSid)));
  // Event data carries exam id, script id, old marks, new marks and the
  // justification, in that order.
  Decoder d{ByteSpan(ev.data)};
  CHECK(d.u64() == 1);
  CHECK(d.str() == kSid);
  CHECK(d.i64() == 70);
  CHECK(d.i64() == 65);
  CHECK(d.str() == "Totals re-added after scrutiny");
}

TEST_CASE("revise guard order") {
  SUBCASE("scrutinizer role first") {
    fixtures::Campus c;
  drive_to_submitted(c);
    CHECK(reverted(c.engine.revise_marks(c.examiner, 1, kSid, 50, "why"),
                   Err::NotScrutinizer));
  }

  SUBCASE("no mark record yet") {
    fixtures::Campus c;
  drive_to_submitted(c);
    CHECK(reverted(c.engine.revise_marks(c.scrutinizer, 1, kSid, 50, "why"),
                   Err::UnknownMarkRecord));
  }

  SUBCASE("record bound to a different exam") {
    fixtures::Campus c;
    drive_to_submitted(c, 1);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 70)));
    c.advance_to(1, ExamState::SCRUTINIZED);
    c.create_exam(2);
    c.advance_to(2, ExamState::SCRUTINIZED);
    CHECK(reverted(c.engine.revise_marks(c.scrutinizer, 2, kSid, 50, "why"),
                   Err::UnknownMarkRecord));
  }

  SUBCASE("published outranks the lifecycle check") {
    fixtures::Campus c;
  drive_to_submitted(c);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 70)));
    c.advance_to(1, ExamState::COMPLETED);
    REQUIRE(succeeded(c.engine.publish_result(c.admin, 1, kSid)));
    // The exam is COMPLETED (not SCRUTINIZED), yet the revert must name
    // publication finality, not the exam state.
    CHECK(reverted(c.engine.revise_marks(c.scrutinizer, 1, kSid, 50, "why"),
                   Err::AlreadyPublished));
    CHECK(c.engine.result(kSid).marks == 70);
  }

  SUBCASE("exam must sit in SCRUTINIZED") {
    fixtures::Campus c;
  drive_to_submitted(c);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 70)));
    // still SUBMITTED
    CHECK(reverted(c.engine.revise_marks(c.scrutinizer, 1, kSid, 50, "why"),
                   Err::WrongState));
  }

  SUBCASE("justification must not be blank") {
    fixtures::Campus c;
  drive_to_submitted(c);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 70)));
    c.advance_to(1, ExamState::SCRUTINIZED);
    CHECK(reverted(c.engine.revise_marks(c.scrutinizer, 1, kSid, 50, ""),
                   Err::EmptyJustification));
    CHECK(reverted(c.engine.revise_marks(c.scrutinizer, 1, kSid, 50, "  \t\n"),
                   Err::EmptyJustification));
    CHECK(c.engine.result(kSid).marks == 70);
  }

  SUBCASE("revised marks must stay in range") {
    fixtures::Campus c;
  drive_to_submitted(c);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 70)));
    c.advance_to(1, ExamState::SCRUTINIZED);
    CHECK(reverted(c.engine.revise_marks(c.scrutinizer, 1, kSid, 101, "why"),
                   Err::MarksOutOfRange));
    CHECK(reverted(c.engine.revise_marks(c.scrutinizer, 1, kSid, -2, "why"),
                   Err::MarksOutOfRange));
  }
}

TEST_CASE("publish guard order and finality") {
  SUBCASE("admin role first") {
    fixtures::Campus c;
  drive_to_submitted(c);
    CHECK(reverted(c.engine.publish_result(c.examiner, 1, kSid), Err::NotAdmin));
  }

  SUBCASE("exam must be COMPLETED") {
    fixtures::Campus c;
  drive_to_submitted(c);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 70)));
    CHECK(reverted(c.engine.publish_result(c.admin, 1, kSid), Err::WrongState));
  }

  SUBCASE("publishing an unmarked script") {
    fixtures::Campus c;
  drive_to_submitted(c);
    c.advance_to(1, ExamState::COMPLETED);
    CHECK(reverted(c.engine.publish_result(c.admin, 1, kSid),
                   Err::UnknownMarkRecord));
  }

  SUBCASE("double publish") {
    fixtures::Campus c;
  drive_to_submitted(c);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 70)));
    c.advance_to(1, ExamState::COMPLETED);
    Receipt r = c.engine.publish_result(c.admin, 1, kSid);
    REQUIRE(succeeded(r));
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].name == "ResultPublished");
    CHECK(c.engine.result(kSid).status == MarkStatus::PUBLISHED);

    CHECK(reverted(c.engine.publish_result(c.admin, 1, kSid),
                   Err::AlreadyPublished));
  }

  SUBCASE("no mutation succeeds after publication") {
    fixtures::Campus c;
  drive_to_submitted(c);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 70)));
    c.advance_to(1, ExamState::COMPLETED);
    REQUIRE(succeeded(c.engine.publish_result(c.admin, 1, kSid)));

    Hash256 root = c.engine.state_root();
    CHECK(reverted(c.engine.submit_marks(c.examiner, 1, kSid, 60),
                   Err::WrongState));  // exam left SUBMITTED long ago
    CHECK(reverted(c.engine.revise_marks(c.scrutinizer, 1, kSid, 60, "late"),
                   Err::AlreadyPublished));
    CHECK(reverted(c.engine.publish_result(c.admin, 1, kSid),
                   Err::AlreadyPublished));
    CHECK(c.engine.state_root() == root);
    CHECK(c.engine.result(kSid).marks == 70);
  }
}

TEST_CASE("audit trail folds submission and revisions in order") {
  fixtures::Campus c;
  drive_to_submitted(c);
  Receipt r0 = c.engine.submit_marks(c.examiner, 1, kSid, 70);
  REQUIRE(succeeded(r0));
  c.advance_to(1, ExamState::SCRUTINIZED);
  Receipt r1 = c.engine.revise_marks(c.scrutinizer, 1, kSid, 65,
                                     "addition error on page 3");
  REQUIRE(succeeded(r1));
  Receipt r2 = c.engine.revise_marks(c.scrutinizer, 1, kSid, 68,
                                     "question 4 re-marked");
  REQUIRE(succeeded(r2));

  auto trail = c.engine.audit_trail(kSid);
  REQUIRE(trail.size() == 3);

  CHECK(trail[0].index == 0);
  CHECK_FALSE(trail[0].old_marks.has_value());
  CHECK(trail[0].new_marks == 70);
  CHECK(trail[0].actor == c.examiner);
  CHECK(trail[0].justification.empty());
  CHECK(trail[0].ledger_seq == r0.tx_seq);

  CHECK(trail[1].old_marks == std::optional<std::int64_t>(70));
  CHECK(trail[1].new_marks == 65);
  CHECK(trail[1].actor == c.scrutinizer);
  CHECK(trail[1].justification == "addition error on page 3");
  CHECK(trail[1].ledger_seq == r1.tx_seq);

  CHECK(trail[2].old_marks == std::optional<std::int64_t>(65));
  CHECK(trail[2].new_marks == 68);
  CHECK(trail[2].ledger_seq == r2.tx_seq);

  auto res = c.engine.result(kSid);
  CHECK(res.marks == 68);
  CHECK(res.revision_count == 2);
  CHECK(res.status == MarkStatus::REVISED);
}

TEST_CASE("audit trail property: random revision sequences fold exactly") {
  std::mt19937_64 rng(0xad17);
  for (int round = 0; round < 25; ++round) {
    fixtures::Campus c;
  drive_to_submitted(c);
    std::int64_t marks = static_cast<std::int64_t>(rng() % 101);
    REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, marks)));
    c.advance_to(1, ExamState::SCRUTINIZED);

    int revisions = static_cast<int>(rng() % 13);
    for (int i = 0; i < revisions; ++i) {
      marks = static_cast<std::int64_t>(rng() % 101);
      REQUIRE(succeeded(c.engine.revise_marks(
          c.scrutinizer, 1, kSid, marks,
          "recheck " + std::to_string(round) + "." + std::to_string(i))));
    }

    auto trail = c.engine.audit_trail(kSid);
    REQUIRE(trail.size() == static_cast<std::size_t>(revisions) + 1);
    CHECK_FALSE(trail[0].old_marks.has_value());
    for (std::size_t i = 1; i < trail.size(); ++i) {
      // Each revision's "old" is exactly the previous entry's "new".
      CHECK(trail[i].old_marks == std::optional<std::int64_t>(trail[i - 1].new_marks));
      CHECK_FALSE(trail[i].justification.empty());
    }
    auto res = c.engine.result(kSid);
    CHECK(res.marks == trail.back().new_marks);
    CHECK(res.marks == marks);
    CHECK(res.revision_count == static_cast<std::uint64_t>(revisions));
  }
}

TEST_CASE("result and audit_trail views reject unknown scripts") {
  fixtures::Campus c;
  CHECK_THROWS_AS((void)c.engine.result("TS_00000000000000ff"), QueryError);
  CHECK_THROWS_AS((void)c.engine.audit_trail("TS_00000000000000ff"), QueryError);
}

TEST_CASE("grade sheet renders published scripts in registration order") {
  fixtures::Campus c;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);
  const std::string sid_a = "TS_000000000000000a";
  const std::string sid_b = "TS_000000000000000b";
  c.register_script(1, sid_a, "first script");
  REQUIRE(succeeded(c.engine.register_script(c.admin, 1, sid_b,
                                             fixtures::content_hash_of("second"),
                                             c.student2)));
  c.advance_to(1, ExamState::SUBMITTED);
  REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, sid_a, 81)));
  REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, sid_b, 64)));
  c.advance_to(1, ExamState::SCRUTINIZED);
  REQUIRE(succeeded(c.engine.revise_marks(c.scrutinizer, 1, sid_b, 66,
                                          "totals corrected")));
  c.advance_to(1, ExamState::COMPLETED);

  SUBCASE("not all published yet") {
    REQUIRE(succeeded(c.engine.publish_result(c.admin, 1, sid_a)));
    CHECK_THROWS_AS((void)c.engine.grade_sheet_csv(1), QueryError);
  }

  SUBCASE("all published") {
    REQUIRE(succeeded(c.engine.publish_result(c.admin, 1, sid_a)));
    REQUIRE(succeeded(c.engine.publish_result(c.admin, 1, sid_b)));
    std::string csv = c.engine.grade_sheet_csv(1);
    CHECK(csv ==
          "script_id,marks,status,revision_count\n" +
              sid_a + ",81,PUBLISHED,0\n" + sid_b + ",66,PUBLISHED,1\n");
  }
}

TEST_CASE("grade sheet failure modes") {
  fixtures::Campus c;
  CHECK_THROWS_AS((void)c.engine.grade_sheet_csv(42), QueryError);  // no exam

  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);
  c.register_script(1, kSid);
  c.advance_to(1, ExamState::COMPLETED);
  // Registered but never marked: the sheet refuses to render.
  CHECK_THROWS_AS((void)c.engine.grade_sheet_csv(1), QueryError);
}
