#pragma once

// Shared test scaffolding: deterministic addresses, a pre-wired campus
// (deployer + one of each role, ready to run an exam), and small helpers for
// asserting on receipts.

#include <string>

#include "examledger/engine.hpp"
#include "examledger/keccak.hpp"

namespace fixtures {

using namespace examledger;

inline Address addr(std::uint8_t n) {
  Address a{};
  a.value[0] = 0x10;  // never the zero address
  a.value[19] = n;
  return a;
}

inline bool succeeded(const Receipt& r) { return r.status == TxStatus::SUCCESS; }

inline bool reverted(const Receipt& r, Err code) {
  return r.status == TxStatus::REVERTED &&
         r.revert_reason == std::string(reason(code));
}

inline Hash256 content_hash_of(std::string_view content) {
  return keccak256(content);
}

// One deployer, one admin, one examiner, one scrutinizer, two students —
// roles granted, nothing else. Tests drive exams from here.
struct Campus {
  Address deployer = addr(1);
  Address admin = addr(2);
  Address examiner = addr(3);
  Address scrutinizer = addr(4);
  Address student = addr(5);
  Address student2 = addr(6);
  Address outsider = addr(7);
  Engine engine;

  static EngineConfig config_with(const Address& deployer) {
    EngineConfig cfg;
    cfg.deployer = deployer;
    return cfg;
  }

  explicit Campus(bool deploy = false) : engine(config_with(deployer)) {
    if (deploy) engine.deploy_contracts();
    engine.grant_role(deployer, admin, Role::ADMIN);
    engine.grant_role(admin, examiner, Role::EXAMINER);
    engine.grant_role(admin, scrutinizer, Role::SCRUTINIZER);
    engine.grant_role(admin, student, Role::STUDENT);
    engine.grant_role(admin, student2, Role::STUDENT);
  }

  // Creates exam `id`, enrolls both students.
  void create_exam(std::uint64_t id) {
    engine.create_exam(admin, id, "Course " + std::to_string(100 + id) + " term final");
    engine.enroll(admin, id, student);
    engine.enroll(admin, id, student2);
  }

  // Steps the exam forward one state at a time until `target`.
  void advance_to(std::uint64_t id, ExamState target) {
    auto cur = static_cast<std::uint8_t>(engine.exam_state(id));
    auto want = static_cast<std::uint8_t>(target);
    while (cur < want) {
      cur++;
      Receipt r = engine.advance_exam_state(admin, id, static_cast<ExamState>(cur));
      if (!succeeded(r)) throw std::logic_error("fixture advance failed: " + r.revert_reason);
    }
  }

  // Registers a script for `student` on an ACTIVE exam.
  Receipt register_script(std::uint64_t exam_id, const std::string& sid,
                          std::string_view content = "answer text") {
    return engine.register_script(admin, exam_id, sid, content_hash_of(content),
                                  student);
  }

  // Runs one script through the whole pipeline: register on exam `id`
  // (must be ACTIVE), submit, optionally revise, publish.
  void run_full_pipeline(std::uint64_t id, const std::string& sid,
                         std::int64_t marks = 72, bool revise = false) {
    register_script(id, sid);
    advance_to(id, ExamState::SUBMITTED);
    engine.submit_marks(examiner, id, sid, marks);
    advance_to(id, ExamState::SCRUTINIZED);
    if (revise) {
      engine.revise_marks(scrutinizer, id, sid, marks + 3, "Totals re-added");
    }
    advance_to(id, ExamState::COMPLETED);
    engine.publish_result(admin, id, sid);
  }
};

}  // namespace fixtures
