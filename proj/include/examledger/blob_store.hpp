#pragma once

// Content-addressed encrypted storage for answer scripts, plus the admin's
// private manifest mapping script ids to students. Only the ledger is public;
// everything in here stays under the institution's key.
//
//   cid          = "cid-" + hex(keccak256(ciphertext))
//   ledger hash  = keccak256(bytes of the cid string)
//   blob file    = version byte || 12-byte nonce || 16-byte tag || ciphertext
//
// fetch-side integrity: the AES-GCM tag authenticates the ciphertext, and the
// recomputed cid ties the file content back to the ledger anchor. The
// manifest is sealed with the same key when one is supplied, since the
// script-to-student binding is exactly the data the chain must not reveal.

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "examledger/bytes.hpp"
#include "examledger/types.hpp"

namespace examledger {

class BlobStore {
 public:
  using RandomFn = std::function<void(std::uint8_t*, std::size_t)>;

  // rng defaults to the OS entropy source; benchmarks inject a seeded one so
  // two runs of the same scenario produce identical files.
  explicit BlobStore(std::filesystem::path root, RandomFn rng = {});

  struct StoreResult {
    std::string cid;
    Hash256 content_hash;  // keccak256 of the cid string, the ledger anchor
  };

  // Throws QueryError(EmptyInput) / QueryError(BadKeyLength).
  StoreResult store(ByteSpan plaintext, ByteSpan key);
  // Throws QueryError(UnknownBlob) when no such file exists,
  // QueryError(AuthFailure) when decryption fails, and
  // QueryError(HashMismatch) when the file content no longer matches its cid.
  Bytes load(const std::string& cid, ByteSpan key) const;
  bool contains(const std::string& cid) const;

  struct ManifestEntry {
    Address student;
    std::uint64_t exam_id = 0;
    std::string cid;
  };

  void bind_script(const std::string& script_id, const Address& student,
                   std::uint64_t exam_id, const std::string& cid);
  std::optional<ManifestEntry> manifest_entry(const std::string& script_id) const;
  std::vector<std::pair<std::string, ManifestEntry>> entries_for_student(
      const Address& student) const;
  std::size_t manifest_size() const { return manifest_.size(); }

  // When a 32-byte seal key is set, the manifest is written AES-GCM sealed;
  // otherwise as plain JSON marked unsealed.
  void set_seal_key(Bytes key);
  // bind_script persists the manifest immediately unless autosave is off;
  // bulk loaders turn it off and call save_manifest once at the end.
  void set_autosave(bool on) { autosave_ = on; }
  void save_manifest() const;
  // Reads manifest.json from the store root. Call after set_seal_key when the
  // file may be sealed; the constructor never loads on its own.
  void load_manifest();

  std::filesystem::path write_grade_sheet(std::uint64_t exam_id,
                                          std::string_view csv) const;

  const std::filesystem::path& root() const { return root_; }
  static std::string cid_for(ByteSpan ciphertext);
  static bool is_valid_cid(std::string_view cid);
  static Hash256 anchor_for(std::string_view cid);

 private:
  std::filesystem::path blob_path(const std::string& cid) const;
  Bytes next_nonce() const;

  std::filesystem::path root_;
  RandomFn rng_;
  Bytes seal_key_;
  std::map<std::string, ManifestEntry> manifest_;
  bool autosave_ = true;
  mutable std::uint32_t nonce_counter_ = 0;
};

}  // namespace examledger
