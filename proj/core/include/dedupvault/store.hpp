#ifndef DEDUPVAULT_STORE_HPP
#define DEDUPVAULT_STORE_HPP

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>

#include "dedupvault/records.hpp"

namespace dedupvault::store {

// On-disk layout, one directory per file id:
//   <root>/files/<hex f_id>/record.bin
//   <root>/files/<hex f_id>/blob-<gen>.bin    (Pub-CSP only)
//   <root>/users/<hex u_id>.bin
//
// The record rename is the single commit point; on open, directories without
// a committed record and blobs not referenced by the record are removed.
// crash_hook fires at named points so tests can inject crashes.

class StoreBase {
 public:
  std::function<void(const char*)> crash_hook;  // test-only

 protected:
  explicit StoreBase(std::filesystem::path root);

  void hook(const char* point) {
    if (crash_hook) crash_hook(point);
  }
  std::filesystem::path file_dir(const Id16& f_id) const;
  std::filesystem::path user_path(const Id16& u_id) const;
  // temp write + fsync + rename
  void commit_file(const std::filesystem::path& target, ByteView data, const char* stage);

  void save_user_entry(const UserEntry& u);
  std::optional<UserEntry> load_user_entry(const Id16& u_id) const;

  // per-record write serialization, concurrent reads
  std::shared_mutex& record_mutex(const Id16& f_id) const;

  std::filesystem::path root_;

 private:
  mutable std::mutex mutexes_guard_;
  mutable std::map<Id16, std::unique_ptr<std::shared_mutex>> mutexes_;
};

class PubStore : public StoreBase {
 public:
  explicit PubStore(std::filesystem::path root);

  std::optional<Id16> dup_check(const Digest& h) const;
  bool exists(const Id16& f_id) const;
  FileRecordPub get(const Id16& f_id) const;   // throws UnknownFile
  Bytes get_blob(const Id16& f_id) const;      // throws UnknownFile

  void create(const FileRecordPub& rec, ByteView ct);  // throws DuplicateFileId
  void add_holder(const Id16& f_id, const HolderPub& holder);  // UnknownFile | AlreadyHolder
  // removes the holder; deletes record and blob when the list empties.
  // returns remaining holder ids.
  std::vector<Id16> revoke_holder(const Id16& f_id, const Id16& u_id);  // ... | NotAHolder
  // CT' (optional) and the full replacement owner list, atomically per store
  void replace_after_rekey(const Id16& f_id, const std::optional<Bytes>& ct_new,
                           std::vector<HolderPub> owners);
  void replace_blob(const Id16& f_id, ByteView ct);  // owner re-upload path
  void promote_owner(const Id16& f_id, const Id16& u_id);  // rotation to list head
  void set_managed_by_pricsp(const Id16& f_id);
  void remove(const Id16& f_id);  // throws UnknownFile

  std::size_t blob_count() const;
  std::vector<Id16> list_files() const;

  void save_user(const UserEntry& u) { save_user_entry(u); }
  std::optional<UserEntry> load_user(const Id16& u_id) const { return load_user_entry(u_id); }

 private:
  void write_record(const FileRecordPub& rec, const char* stage);
  std::filesystem::path blob_path(const Id16& f_id, std::uint64_t gen) const;

  mutable std::mutex index_guard_;
  std::map<Digest, Id16> hash_index_;  // H(F) -> F_id, injective
};

class PriStore : public StoreBase {
 public:
  explicit PriStore(std::filesystem::path root);

  bool exists(const Id16& f_id) const;
  FileRecordPriv get(const Id16& f_id) const;  // throws UnknownFile

  void create(const FileRecordPriv& rec);  // throws DuplicateFileId
  void add_holder(const Id16& f_id, const HolderPriv& holder);
  std::vector<Id16> revoke_holder(const Id16& f_id, const Id16& u_id);
  void replace_after_rekey(const Id16& f_id, const pre::SecondLevelCiphertext& ek_new,
                           std::vector<HolderPriv> holders);
  void promote_owner(const Id16& f_id, const Id16& u_id);
  void set_managed_by_pricsp(const Id16& f_id);
  void remove(const Id16& f_id);

  std::vector<Id16> list_files() const;

  void save_user(const UserEntry& u) { save_user_entry(u); }
  std::optional<UserEntry> load_user(const Id16& u_id) const { return load_user_entry(u_id); }

 private:
  void write_record(const FileRecordPriv& rec, const char* stage);
};

}  // namespace dedupvault::store

#endif
