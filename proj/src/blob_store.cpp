#include "examledger/blob_store.hpp"

#include <openssl/rand.h>

#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "examledger/aead.hpp"
#include "examledger/keccak.hpp"

namespace examledger {

namespace {

constexpr std::uint8_t kBlobVersion = 1;
constexpr std::size_t kHeaderLen = 1 + aead::kNonceLen + aead::kTagLen;

void os_random(std::uint8_t* out, std::size_t n) {
  if (RAND_bytes(out, static_cast<int>(n)) != 1) {
    throw std::runtime_error("openssl: RAND_bytes failed");
  }
}

Bytes read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& p, ByteSpan data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("short write to " + p.string());
}

}  // namespace

BlobStore::BlobStore(std::filesystem::path root, RandomFn rng)
    : root_(std::move(root)), rng_(rng ? std::move(rng) : os_random) {
  std::filesystem::create_directories(root_ / "blobs");
  std::filesystem::create_directories(root_ / "gradesheets");
  // No manifest auto-load here: a sealed manifest needs the key, which is
  // only available after set_seal_key. Callers opt in via load_manifest().
}

Bytes BlobStore::next_nonce() const {
  // Counter prefix guarantees uniqueness within a store instance; the random
  // suffix keeps nonces distinct across instances sharing a key.
  Bytes nonce(aead::kNonceLen);
  std::uint32_t c = ++nonce_counter_;
  for (int i = 0; i < 4; ++i) nonce[i] = static_cast<std::uint8_t>(c >> (8 * (3 - i)));
  rng_(nonce.data() + 4, aead::kNonceLen - 4);
  return nonce;
}

BlobStore::StoreResult BlobStore::store(ByteSpan plaintext, ByteSpan key) {
  if (plaintext.empty()) throw QueryError(Err::EmptyInput);
  if (key.size() != aead::kKeyLen) throw QueryError(Err::BadKeyLength);

  Bytes nonce = next_nonce();
  aead::Sealed sealed = aead::seal(key, ByteSpan(nonce), plaintext);

  StoreResult result;
  result.cid = cid_for(ByteSpan(sealed.ciphertext));
  result.content_hash = anchor_for(result.cid);

  Bytes file;
  file.reserve(kHeaderLen + sealed.ciphertext.size());
  file.push_back(kBlobVersion);
  file.insert(file.end(), nonce.begin(), nonce.end());
  file.insert(file.end(), sealed.tag.begin(), sealed.tag.end());
  file.insert(file.end(), sealed.ciphertext.begin(), sealed.ciphertext.end());
  write_file(blob_path(result.cid), ByteSpan(file));
  return result;
}

Bytes BlobStore::load(const std::string& cid, ByteSpan key) const {
  auto path = blob_path(cid);
  if (!std::filesystem::exists(path)) throw QueryError(Err::UnknownBlob);
  Bytes file = read_file(path);
  if (file.size() < kHeaderLen || file[0] != kBlobVersion) {
    throw QueryError(Err::AuthFailure);
  }
  ByteSpan nonce(file.data() + 1, aead::kNonceLen);
  ByteSpan tag(file.data() + 1 + aead::kNonceLen, aead::kTagLen);
  ByteSpan ciphertext(file.data() + kHeaderLen, file.size() - kHeaderLen);

  auto plain = aead::open(key, nonce, ciphertext, tag);
  if (!plain) throw QueryError(Err::AuthFailure);
  // A decryptable file can still be the wrong file (someone swapped in a
  // different validly sealed blob); the content address pins it down.
  if (cid_for(ciphertext) != cid) throw QueryError(Err::HashMismatch);
  return *plain;
}

bool BlobStore::contains(const std::string& cid) const {
  return std::filesystem::exists(blob_path(cid));
}

void BlobStore::bind_script(const std::string& script_id, const Address& student,
                            std::uint64_t exam_id, const std::string& cid) {
  manifest_[script_id] = ManifestEntry{student, exam_id, cid};
  if (autosave_) save_manifest();
}

std::optional<BlobStore::ManifestEntry> BlobStore::manifest_entry(
    const std::string& script_id) const {
  auto it = manifest_.find(script_id);
  if (it == manifest_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<std::string, BlobStore::ManifestEntry>>
BlobStore::entries_for_student(const Address& student) const {
  std::vector<std::pair<std::string, ManifestEntry>> out;
  for (const auto& [sid, entry] : manifest_) {
    if (entry.student == student) out.emplace_back(sid, entry);
  }
  return out;
}

void BlobStore::set_seal_key(Bytes key) {
  if (!key.empty() && key.size() != aead::kKeyLen) {
    throw QueryError(Err::BadKeyLength);
  }
  seal_key_ = std::move(key);
}

void BlobStore::save_manifest() const {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [sid, e] : manifest_) {
    entries[sid] = {
        {"student", e.student.hex()},
        {"exam_id", e.exam_id},
        {"cid", e.cid},
    };
  }

  nlohmann::json doc;
  if (seal_key_.empty()) {
    doc = {{"sealed", false}, {"entries", std::move(entries)}};
  } else {
    std::string plain = entries.dump();
    // The manifest carries the script-to-student binding — the one mapping
    // that must never leak — so it gets the same sealing as the blobs.
    Bytes nonce = next_nonce();
    aead::Sealed sealed = aead::seal(
        ByteSpan(seal_key_), ByteSpan(nonce),
        ByteSpan(reinterpret_cast<const std::uint8_t*>(plain.data()), plain.size()));
    doc = {
        {"sealed", true},
        {"nonce", to_hex0x(ByteSpan(nonce))},
        {"tag", to_hex0x(ByteSpan(sealed.tag.data(), sealed.tag.size()))},
        {"data", to_hex0x(ByteSpan(sealed.ciphertext))},
    };
  }

  auto tmp = root_ / "manifest.json.tmp";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + tmp.string());
  out << doc.dump(2) << '\n';
  out.close();
  std::filesystem::rename(tmp, root_ / "manifest.json");
}

void BlobStore::load_manifest() {
  Bytes raw = read_file(root_ / "manifest.json");
  nlohmann::json doc = nlohmann::json::parse(raw.begin(), raw.end());

  nlohmann::json entries;
  if (doc.at("sealed").get<bool>()) {
    if (seal_key_.empty()) {
      throw std::runtime_error("manifest is sealed; a key is required");
    }
    auto nonce = from_hex(doc.at("nonce").get<std::string>());
    auto tag = from_hex(doc.at("tag").get<std::string>());
    auto data = from_hex(doc.at("data").get<std::string>());
    if (!nonce || !tag || !data) throw std::runtime_error("corrupt manifest");
    auto plain = aead::open(ByteSpan(seal_key_), ByteSpan(*nonce),
                            ByteSpan(*data), ByteSpan(*tag));
    if (!plain) throw QueryError(Err::AuthFailure);
    entries = nlohmann::json::parse(plain->begin(), plain->end());
  } else {
    entries = doc.at("entries");
  }

  manifest_.clear();
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    ManifestEntry e;
    auto student = Address::parse(it.value().at("student").get<std::string>());
    if (!student) throw std::runtime_error("corrupt manifest: bad address");
    e.student = *student;
    e.exam_id = it.value().at("exam_id").get<std::uint64_t>();
    e.cid = it.value().at("cid").get<std::string>();
    manifest_[it.key()] = std::move(e);
  }
}

std::filesystem::path BlobStore::write_grade_sheet(std::uint64_t exam_id,
                                                   std::string_view csv) const {
  auto path = root_ / "gradesheets" / ("exam_" + std::to_string(exam_id) + ".csv");
  write_file(path, ByteSpan(reinterpret_cast<const std::uint8_t*>(csv.data()),
                            csv.size()));
  return path;
}

std::string BlobStore::cid_for(ByteSpan ciphertext) {
  Hash256 h = keccak256(ciphertext);
  return "cid-" + to_hex(ByteSpan(h.data(), h.size()));
}

bool BlobStore::is_valid_cid(std::string_view cid) {
  if (cid.size() != 4 + 64 || cid.substr(0, 4) != "cid-") return false;
  for (char c : cid.substr(4)) {
    bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!hex) return false;
  }
  return true;
}

Hash256 BlobStore::anchor_for(std::string_view cid) {
  return keccak256(cid);
}

std::filesystem::path BlobStore::blob_path(const std::string& cid) const {
  if (!is_valid_cid(cid)) throw QueryError(Err::UnknownBlob);
  return root_ / "blobs" / cid;
}

}  // namespace examledger
