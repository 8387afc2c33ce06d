#pragma once

// Institution-side operations that span the ledger and the blob store:
// storing and anchoring scripts, fetching them back with integrity checks,
// revealing authorship after completion, gating academic-record commitments
// on published results, and exporting grade sheets. The ledger alone can
// never connect a script to a student — these operations need the manifest,
// which is exactly why they live off-chain.

#include <filesystem>

#include "examledger/blob_store.hpp"
#include "examledger/engine.hpp"

namespace examledger {

class ExamService {
 public:
  // key: the institution's 32-byte blob encryption key.
  ExamService(Engine& engine, BlobStore& blobs, Bytes key);

  struct StoredScript {
    std::string cid;
    Hash256 content_hash;
  };

  // Encrypts and stores a script; no ledger interaction yet.
  StoredScript store_script(ByteSpan plaintext);

  // Anchors a stored script on the ledger and, if the transaction succeeds,
  // binds scriptId -> (student, exam, cid) in the private manifest.
  Receipt register_script(const Address& sender, std::uint64_t exam_id,
                          const std::string& script_id, const Address& student,
                          const std::string& cid);

  // Round trip with integrity checks; throws QueryError(UnknownScript /
  // HashMismatch / AuthFailure / UnknownBlob).
  Bytes fetch_script(const std::string& script_id) const;

  // Who wrote the script — only answerable once the exam is COMPLETED.
  // Throws QueryError(NotFinalized) before that, UnknownScript if the
  // manifest has no binding for this exam/script pair.
  Address reveal_identity(std::uint64_t exam_id,
                          const std::string& script_id) const;

  struct CommitOutcome {
    Receipt receipt;
    Hash256 commit_hash;
  };

  // Commits a student's academic record for later eligibility proofs. The
  // ledger cannot check "all results published" without linking scripts to
  // the student, so this facade enforces it here, off-chain, before
  // submitting the commitment transaction.
  CommitOutcome commit_academic_record(const Address& sender,
                                       const Address& student,
                                       const zkp::AcademicRecord& record,
                                       const Hash256& salt);

  // Renders the exam's grade sheet (every result must be PUBLISHED) and
  // writes it under the blob root. Returns the file path.
  std::filesystem::path export_grade_sheet(std::uint64_t exam_id) const;

  Engine& engine() { return engine_; }
  BlobStore& blobs() { return blobs_; }

 private:
  Engine& engine_;
  BlobStore& blobs_;
  Bytes key_;
};

}  // namespace examledger
