#include "examledger/service.hpp"

#include "examledger/aead.hpp"
#include "examledger/keccak.hpp"

namespace examledger {

ExamService::ExamService(Engine& engine, BlobStore& blobs, Bytes key)
    : engine_(engine), blobs_(blobs), key_(std::move(key)) {
  if (key_.size() != aead::kKeyLen) throw QueryError(Err::BadKeyLength);
  blobs_.set_seal_key(key_);
  if (std::filesystem::exists(blobs_.root() / "manifest.json")) {
    blobs_.load_manifest();
  }
}

ExamService::StoredScript ExamService::store_script(ByteSpan plaintext) {
  auto result = blobs_.store(plaintext, ByteSpan(key_));
  return StoredScript{result.cid, result.content_hash};
}

Receipt ExamService::register_script(const Address& sender, std::uint64_t exam_id,
                                     const std::string& script_id,
                                     const Address& student,
                                     const std::string& cid) {
  Receipt receipt = engine_.register_script(sender, exam_id, script_id,
                                            BlobStore::anchor_for(cid), student);
  if (receipt.status == TxStatus::SUCCESS) {
    blobs_.bind_script(script_id, student, exam_id, cid);
  }
  return receipt;
}

Bytes ExamService::fetch_script(const std::string& script_id) const {
  auto entry = blobs_.manifest_entry(script_id);
  if (!entry) throw QueryError(Err::UnknownScript);
  Hash256 anchored = engine_.script_hash(script_id);  // throws UnknownScript
  if (BlobStore::anchor_for(entry->cid) != anchored) {
    throw QueryError(Err::HashMismatch);
  }
  return blobs_.load(entry->cid, ByteSpan(key_));
}

Address ExamService::reveal_identity(std::uint64_t exam_id,
                                     const std::string& script_id) const {
  if (engine_.exam_state(exam_id) != ExamState::COMPLETED) {
    throw QueryError(Err::NotFinalized);
  }
  auto entry = blobs_.manifest_entry(script_id);
  if (!entry || entry->exam_id != exam_id) throw QueryError(Err::UnknownScript);
  return entry->student;
}

ExamService::CommitOutcome ExamService::commit_academic_record(
    const Address& sender, const Address& student,
    const zkp::AcademicRecord& record, const Hash256& salt) {
  // Every script this student ever wrote must have a published result before
  // the record is frozen into a commitment.
  for (const auto& [script_id, entry] : blobs_.entries_for_student(student)) {
    (void)entry;
    try {
      if (engine_.result(script_id).status != MarkStatus::PUBLISHED) {
        throw QueryError(Err::NotFinalized);
      }
    } catch (const QueryError& e) {
      if (e.code == Err::UnknownMarkRecord) throw QueryError(Err::NotFinalized);
      throw;
    }
  }
  CommitOutcome out{engine_.zkp_commit(sender, student, record, salt),
                    zkp::commitment_hash(record, salt)};
  return out;
}

std::filesystem::path ExamService::export_grade_sheet(std::uint64_t exam_id) const {
  std::string csv = engine_.grade_sheet_csv(exam_id);  // throws if not final
  return blobs_.write_grade_sheet(exam_id, csv);
}

}  // namespace examledger
