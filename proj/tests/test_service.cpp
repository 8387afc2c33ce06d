#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "examledger/service.hpp"
#include "support/fixtures.hpp"

using namespace examledger;
using fixtures::reverted;
using fixtures::succeeded;
namespace fs = std::filesystem;

namespace {

struct ServiceRig {
  fs::path dir;
  fixtures::Campus campus;
  BlobStore blobs;
  ExamService service;

  explicit ServiceRig(const std::string& tag)
      : dir(fs::temp_directory_path() /
            ("examledger_svc_" + tag + "_" + std::to_string(::getpid()))),
        campus(),
        blobs((fs::remove_all(dir), dir)),
        service(campus.engine, blobs, Bytes(32, 0x5f)) {}

  ~ServiceRig() { fs::remove_all(dir); }
};

const std::string kSid = "TS_00000000000000e5";

}  // namespace

TEST_CASE("store, anchor, fetch: the full round trip") {
  ServiceRig rig("roundtrip");
  auto& c = rig.campus;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);

  Bytes plain = Bytes{'p', 'a', 'g', 'e', ' ', '1'};
  auto stored = rig.service.store_script(ByteSpan(plain));
  // Storing alone leaves no trace on the ledger.
  CHECK_FALSE(c.engine.script_exists(kSid));

  Receipt r = rig.service.register_script(c.admin, 1, kSid, c.student, stored.cid);
  REQUIRE(succeeded(r));
  CHECK(c.engine.script_hash(kSid) == stored.content_hash);
  CHECK(rig.service.fetch_script(kSid) == plain);

  auto entry = rig.blobs.manifest_entry(kSid);
  REQUIRE(entry.has_value());
  CHECK(entry->student == c.student);
  CHECK(entry->exam_id == 1);
  CHECK(entry->cid == stored.cid);
}

TEST_CASE("a reverted registration never touches the manifest") {
  ServiceRig rig("revert");
  auto& c = rig.campus;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);

  auto stored = rig.service.store_script(ByteSpan(Bytes{'x'}));
  // outsider is not enrolled; the chain transaction reverts.
  Receipt r = rig.service.register_script(c.admin, 1, kSid, c.outsider, stored.cid);
  REQUIRE(reverted(r, Err::NotEnrolled));
  CHECK_FALSE(rig.blobs.manifest_entry(kSid).has_value());
  CHECK_THROWS_AS((void)rig.service.fetch_script(kSid), QueryError);
}

TEST_CASE("fetch cross-checks the manifest cid against the ledger anchor") {
  ServiceRig rig("anchor");
  auto& c = rig.campus;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);

  auto honest = rig.service.store_script(ByteSpan(Bytes{'r', 'e', 'a', 'l'}));
  auto decoy = rig.service.store_script(ByteSpan(Bytes{'f', 'a', 'k', 'e'}));
  REQUIRE(succeeded(
      rig.service.register_script(c.admin, 1, kSid, c.student, honest.cid)));

  // Someone edits the manifest to point at the decoy blob. The decoy is a
  // perfectly valid blob — only the ledger anchor exposes the swap.
  rig.blobs.bind_script(kSid, c.student, 1, decoy.cid);
  try {
    (void)rig.service.fetch_script(kSid);
    FAIL("anchor mismatch not detected");
  } catch (const QueryError& e) {
    CHECK(e.code == Err::HashMismatch);
  }
}

TEST_CASE("fetching an unknown script id") {
  ServiceRig rig("unknown");
  try {
    (void)rig.service.fetch_script("TS_00000000000000ff");
    FAIL("unknown script fetched");
  } catch (const QueryError& e) {
    CHECK(e.code == Err::UnknownScript);
  }
}

TEST_CASE("identity stays hidden until the exam completes") {
  ServiceRig rig("reveal");
  auto& c = rig.campus;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);
  auto stored = rig.service.store_script(ByteSpan(Bytes{'a'}));
  REQUIRE(succeeded(
      rig.service.register_script(c.admin, 1, kSid, c.student, stored.cid)));

  for (auto state : {ExamState::ACTIVE, ExamState::SUBMITTED,
                     ExamState::SCRUTINIZED}) {
    c.advance_to(1, state);
    try {
      (void)rig.service.reveal_identity(1, kSid);
      FAIL("identity revealed early");
    } catch (const QueryError& e) {
      CHECK(e.code == Err::NotFinalized);
    }
  }

  c.advance_to(1, ExamState::COMPLETED);
  CHECK(rig.service.reveal_identity(1, kSid) == c.student);

  // A different exam id never matches, even after completion.
  c.create_exam(2);
  c.advance_to(2, ExamState::COMPLETED);
  try {
    (void)rig.service.reveal_identity(2, kSid);
    FAIL("wrong-exam reveal answered");
  } catch (const QueryError& e) {
    CHECK(e.code == Err::UnknownScript);
  }
}

TEST_CASE("academic-record commitments wait for published results") {
  ServiceRig rig("commit");
  auto& c = rig.campus;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);
  auto stored = rig.service.store_script(ByteSpan(Bytes{'s'}));
  REQUIRE(succeeded(
      rig.service.register_script(c.admin, 1, kSid, c.student, stored.cid)));
  c.advance_to(1, ExamState::SUBMITTED);
  REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 77)));

  zkp::AcademicRecord record;
  record.scaled_cgpa = 308;  // 77 * 4.00 / 100 scale
  record.marks = {77};
  record.credits = {4};
  Hash256 salt{};
  salt[5] = 0xd6;

  SUBCASE("pending result blocks the commitment") {
    try {
      (void)rig.service.commit_academic_record(c.admin, c.student, record, salt);
      FAIL("commitment accepted with unpublished results");
    } catch (const QueryError& e) {
      CHECK(e.code == Err::NotFinalized);
    }
    // Nothing landed on the ledger.
    CHECK_FALSE(c.engine.commitment_of(c.student).has_value());
  }

  SUBCASE("after publication the commitment goes through") {
    c.advance_to(1, ExamState::COMPLETED);
    REQUIRE(succeeded(c.engine.publish_result(c.admin, 1, kSid)));

    auto outcome =
        rig.service.commit_academic_record(c.admin, c.student, record, salt);
    REQUIRE(succeeded(outcome.receipt));
    CHECK(outcome.commit_hash == zkp::commitment_hash(record, salt));
    CHECK(*c.engine.commitment_of(c.student) == outcome.commit_hash);
  }
}

TEST_CASE("a registered but never-marked script also blocks commitments") {
  ServiceRig rig("unmarked");
  auto& c = rig.campus;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);
  auto stored = rig.service.store_script(ByteSpan(Bytes{'u'}));
  REQUIRE(succeeded(
      rig.service.register_script(c.admin, 1, kSid, c.student, stored.cid)));
  c.advance_to(1, ExamState::COMPLETED);

  zkp::AcademicRecord record;
  record.scaled_cgpa = 300;
  record.marks = {70};
  record.credits = {3};
  try {
    (void)rig.service.commit_academic_record(c.admin, c.student, record,
                                             Hash256{});
    FAIL("commitment accepted for unmarked script");
  } catch (const QueryError& e) {
    CHECK(e.code == Err::NotFinalized);
  }
}

TEST_CASE("exported grade sheet matches the ledger view byte for byte") {
  ServiceRig rig("sheet");
  auto& c = rig.campus;
  c.create_exam(1);
  c.advance_to(1, ExamState::ACTIVE);
  const std::string sid2 = "TS_00000000000000e6";
  auto stored = rig.service.store_script(ByteSpan(Bytes{'g'}));
  auto stored2 = rig.service.store_script(ByteSpan(Bytes{'h'}));
  REQUIRE(succeeded(
      rig.service.register_script(c.admin, 1, kSid, c.student, stored.cid)));
  REQUIRE(succeeded(
      rig.service.register_script(c.admin, 1, sid2, c.student2, stored2.cid)));
  c.advance_to(1, ExamState::SUBMITTED);
  REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, kSid, 77)));
  REQUIRE(succeeded(c.engine.submit_marks(c.examiner, 1, sid2, 64)));
  c.advance_to(1, ExamState::SCRUTINIZED);
  REQUIRE(succeeded(c.engine.revise_marks(c.scrutinizer, 1, sid2, 66,
                                          "totals corrected")));
  c.advance_to(1, ExamState::COMPLETED);
  REQUIRE(succeeded(c.engine.publish_result(c.admin, 1, kSid)));
  REQUIRE(succeeded(c.engine.publish_result(c.admin, 1, sid2)));

  fs::path out = rig.service.export_grade_sheet(1);
  std::ifstream in(out, std::ios::binary);
  std::string file_csv(std::istreambuf_iterator<char>(in), {});
  CHECK(file_csv == c.engine.grade_sheet_csv(1));
  CHECK(file_csv.rfind("script_id,marks,status,revision_count\n", 0) == 0);
}
