#include "dedupvault/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>

namespace dedupvault::store {

namespace fs = std::filesystem;

namespace {

std::string hex_name(const Id16& id) { return to_hex(ByteView(id.data(), id.size())); }

Bytes read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in.good()) throw Error(ErrorCode::Internal, "cannot read " + p.string());
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_raw_synced(const fs::path& p, ByteView data) {
  int fd = ::open(p.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error(ErrorCode::Internal, "cannot open " + p.string());
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n <= 0) {
      ::close(fd);
      throw Error(ErrorCode::Internal, "short write " + p.string());
    }
    off += (std::size_t)n;
  }
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

StoreBase::StoreBase(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "files");
  fs::create_directories(root_ / "users");
}

fs::path StoreBase::file_dir(const Id16& f_id) const { return root_ / "files" / hex_name(f_id); }

fs::path StoreBase::user_path(const Id16& u_id) const {
  return root_ / "users" / (hex_name(u_id) + ".bin");
}

void StoreBase::commit_file(const fs::path& target, ByteView data, const char* stage) {
  fs::path tmp = target;
  tmp += ".tmp";
  write_raw_synced(tmp, data);
  hook(stage);
  fs::rename(tmp, target);
}

void StoreBase::save_user_entry(const UserEntry& u) {
  commit_file(user_path(u.u_id), u.encode(), "user:record_tmp");
}

std::optional<UserEntry> StoreBase::load_user_entry(const Id16& u_id) const {
  fs::path p = user_path(u_id);
  if (!fs::exists(p)) return std::nullopt;
  return UserEntry::decode(read_file(p));
}

std::shared_mutex& StoreBase::record_mutex(const Id16& f_id) const {
  std::lock_guard lk(mutexes_guard_);
  auto& slot = mutexes_[f_id];
  if (!slot) slot = std::make_unique<std::shared_mutex>();
  return *slot;
}

// ---- PubStore ----

PubStore::PubStore(fs::path root) : StoreBase(std::move(root)) {
  // recovery scan: drop partial creates, stale temps and unreferenced blobs
  for (auto& entry : fs::directory_iterator(root_ / "files")) {
    if (!entry.is_directory()) continue;
    fs::path rec_path = entry.path() / "record.bin";
    if (!fs::exists(rec_path)) {
      fs::remove_all(entry.path());
      continue;
    }
    FileRecordPub rec = FileRecordPub::decode(read_file(rec_path));
    std::string keep = "blob-" + std::to_string(rec.blob_gen) + ".bin";
    for (auto& f : fs::directory_iterator(entry.path())) {
      std::string name = f.path().filename().string();
      if (name == "record.bin" || name == keep) continue;
      fs::remove(f.path());
    }
    if (hash_index_.count(rec.h))
      throw Error(ErrorCode::Internal, "hash index not injective on open");
    hash_index_[rec.h] = rec.f_id;
  }
  for (auto& entry : fs::directory_iterator(root_ / "users")) {
    if (entry.path().extension() == ".tmp") fs::remove(entry.path());
  }
}

std::filesystem::path PubStore::blob_path(const Id16& f_id, std::uint64_t gen) const {
  return file_dir(f_id) / ("blob-" + std::to_string(gen) + ".bin");
}

std::optional<Id16> PubStore::dup_check(const Digest& h) const {
  std::lock_guard lk(index_guard_);
  auto it = hash_index_.find(h);
  if (it == hash_index_.end()) return std::nullopt;
  return it->second;
}

bool PubStore::exists(const Id16& f_id) const { return fs::exists(file_dir(f_id) / "record.bin"); }

FileRecordPub PubStore::get(const Id16& f_id) const {
  std::shared_lock lk(record_mutex(f_id));
  fs::path p = file_dir(f_id) / "record.bin";
  if (!fs::exists(p)) throw Error(ErrorCode::UnknownFile);
  return FileRecordPub::decode(read_file(p));
}

Bytes PubStore::get_blob(const Id16& f_id) const {
  std::shared_lock lk(record_mutex(f_id));
  fs::path p = file_dir(f_id) / "record.bin";
  if (!fs::exists(p)) throw Error(ErrorCode::UnknownFile);
  FileRecordPub rec = FileRecordPub::decode(read_file(p));
  return read_file(blob_path(f_id, rec.blob_gen));
}

void PubStore::write_record(const FileRecordPub& rec, const char* stage) {
  commit_file(file_dir(rec.f_id) / "record.bin", rec.encode(), stage);
}

void PubStore::create(const FileRecordPub& rec, ByteView ct) {
  std::unique_lock lk(record_mutex(rec.f_id));
  if (fs::exists(file_dir(rec.f_id) / "record.bin")) throw Error(ErrorCode::DuplicateFileId);
  {
    std::lock_guard ilk(index_guard_);
    if (hash_index_.count(rec.h)) throw Error(ErrorCode::DuplicateFileId, "hash already stored");
  }
  fs::create_directories(file_dir(rec.f_id));
  write_raw_synced(blob_path(rec.f_id, rec.blob_gen), ct);
  hook("pub.create:blob");
  write_record(rec, "pub.create:record_tmp");
  std::lock_guard ilk(index_guard_);
  hash_index_[rec.h] = rec.f_id;
}

void PubStore::add_holder(const Id16& f_id, const HolderPub& holder) {
  std::unique_lock lk(record_mutex(f_id));
  if (!fs::exists(file_dir(f_id) / "record.bin")) throw Error(ErrorCode::UnknownFile);
  FileRecordPub rec = FileRecordPub::decode(read_file(file_dir(f_id) / "record.bin"));
  if (rec.has_holder(holder.u_id)) throw Error(ErrorCode::AlreadyHolder);
  rec.owners.push_back(holder);
  write_record(rec, "pub.add_holder:record_tmp");
}

std::vector<Id16> PubStore::revoke_holder(const Id16& f_id, const Id16& u_id) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPub rec = FileRecordPub::decode(read_file(rec_path));
  auto it = std::find_if(rec.owners.begin(), rec.owners.end(),
                         [&](const HolderPub& h) { return h.u_id == u_id; });
  if (it == rec.owners.end()) throw Error(ErrorCode::NotAHolder);
  rec.owners.erase(it);
  if (rec.owners.empty()) {
    // last holder: reclaim the blob entirely
    fs::remove(rec_path);
    hook("pub.delete:record_removed");
    fs::remove_all(file_dir(f_id));
    std::lock_guard ilk(index_guard_);
    hash_index_.erase(rec.h);
    return {};
  }
  write_record(rec, "pub.revoke:record_tmp");
  std::vector<Id16> remaining;
  for (const auto& o : rec.owners) remaining.push_back(o.u_id);
  return remaining;
}

void PubStore::replace_after_rekey(const Id16& f_id, const std::optional<Bytes>& ct_new,
                                   std::vector<HolderPub> owners) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPub rec = FileRecordPub::decode(read_file(rec_path));
  std::uint64_t old_gen = rec.blob_gen;
  if (ct_new) {
    rec.blob_gen = old_gen + 1;
    write_raw_synced(blob_path(f_id, rec.blob_gen), *ct_new);
    hook("pub.rekey:blob");
  }
  rec.owners = std::move(owners);
  write_record(rec, "pub.rekey:record_tmp");
  if (ct_new) fs::remove(blob_path(f_id, old_gen));
}

void PubStore::replace_blob(const Id16& f_id, ByteView ct) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPub rec = FileRecordPub::decode(read_file(rec_path));
  std::uint64_t old_gen = rec.blob_gen;
  rec.blob_gen = old_gen + 1;
  write_raw_synced(blob_path(f_id, rec.blob_gen), ct);
  hook("pub.replace_blob:blob");
  write_record(rec, "pub.replace_blob:record_tmp");
  fs::remove(blob_path(f_id, old_gen));
}

void PubStore::promote_owner(const Id16& f_id, const Id16& u_id) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPub rec = FileRecordPub::decode(read_file(rec_path));
  auto it = std::find_if(rec.owners.begin(), rec.owners.end(),
                         [&](const HolderPub& h) { return h.u_id == u_id; });
  if (it == rec.owners.end()) throw Error(ErrorCode::NotAHolder);
  std::rotate(rec.owners.begin(), it, it + 1);
  write_record(rec, "pub.promote:record_tmp");
}

void PubStore::set_managed_by_pricsp(const Id16& f_id) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPub rec = FileRecordPub::decode(read_file(rec_path));
  rec.managed_by_pricsp = true;
  write_record(rec, "pub.manage:record_tmp");
}

void PubStore::remove(const Id16& f_id) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPub rec = FileRecordPub::decode(read_file(rec_path));
  fs::remove(rec_path);
  hook("pub.delete:record_removed");
  fs::remove_all(file_dir(f_id));
  std::lock_guard ilk(index_guard_);
  hash_index_.erase(rec.h);
}

std::size_t PubStore::blob_count() const {
  std::size_t n = 0;
  for (auto& entry : fs::directory_iterator(root_ / "files")) {
    if (!entry.is_directory()) continue;
    for (auto& f : fs::directory_iterator(entry.path())) {
      if (f.path().filename().string().starts_with("blob-")) ++n;
    }
  }
  return n;
}

std::vector<Id16> PubStore::list_files() const {
  std::vector<Id16> out;
  for (auto& entry : fs::directory_iterator(root_ / "files")) {
    if (!entry.is_directory() || !fs::exists(entry.path() / "record.bin")) continue;
    Bytes raw = from_hex(entry.path().filename().string());
    Id16 id{};
    std::copy(raw.begin(), raw.end(), id.begin());
    out.push_back(id);
  }
  return out;
}

// ---- PriStore ----

PriStore::PriStore(fs::path root) : StoreBase(std::move(root)) {
  for (auto& entry : fs::directory_iterator(root_ / "files")) {
    if (!entry.is_directory()) continue;
    if (!fs::exists(entry.path() / "record.bin")) {
      fs::remove_all(entry.path());
      continue;
    }
    for (auto& f : fs::directory_iterator(entry.path())) {
      if (f.path().extension() == ".tmp") fs::remove(f.path());
    }
  }
  for (auto& entry : fs::directory_iterator(root_ / "users")) {
    if (entry.path().extension() == ".tmp") fs::remove(entry.path());
  }
}

bool PriStore::exists(const Id16& f_id) const { return fs::exists(file_dir(f_id) / "record.bin"); }

FileRecordPriv PriStore::get(const Id16& f_id) const {
  std::shared_lock lk(record_mutex(f_id));
  fs::path p = file_dir(f_id) / "record.bin";
  if (!fs::exists(p)) throw Error(ErrorCode::UnknownFile);
  return FileRecordPriv::decode(read_file(p));
}

void PriStore::write_record(const FileRecordPriv& rec, const char* stage) {
  commit_file(file_dir(rec.f_id) / "record.bin", rec.encode(), stage);
}

void PriStore::create(const FileRecordPriv& rec) {
  std::unique_lock lk(record_mutex(rec.f_id));
  if (fs::exists(file_dir(rec.f_id) / "record.bin")) throw Error(ErrorCode::DuplicateFileId);
  fs::create_directories(file_dir(rec.f_id));
  write_record(rec, "pri.create:record_tmp");
}

void PriStore::add_holder(const Id16& f_id, const HolderPriv& holder) {
  std::unique_lock lk(record_mutex(f_id));
  if (!fs::exists(file_dir(f_id) / "record.bin")) throw Error(ErrorCode::UnknownFile);
  FileRecordPriv rec = FileRecordPriv::decode(read_file(file_dir(f_id) / "record.bin"));
  if (rec.has_holder(holder.u_id)) throw Error(ErrorCode::AlreadyHolder);
  rec.holders.push_back(holder);
  write_record(rec, "pri.add_holder:record_tmp");
}

std::vector<Id16> PriStore::revoke_holder(const Id16& f_id, const Id16& u_id) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPriv rec = FileRecordPriv::decode(read_file(rec_path));
  auto it = std::find_if(rec.holders.begin(), rec.holders.end(),
                         [&](const HolderPriv& h) { return h.u_id == u_id; });
  if (it == rec.holders.end()) throw Error(ErrorCode::NotAHolder);
  rec.holders.erase(it);
  if (rec.holders.empty()) {
    fs::remove(rec_path);
    hook("pri.delete:record_removed");
    fs::remove_all(file_dir(f_id));
    return {};
  }
  write_record(rec, "pri.revoke:record_tmp");
  std::vector<Id16> remaining;
  for (const auto& h : rec.holders) remaining.push_back(h.u_id);
  return remaining;
}

void PriStore::replace_after_rekey(const Id16& f_id, const pre::SecondLevelCiphertext& ek_new,
                                   std::vector<HolderPriv> holders) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPriv rec = FileRecordPriv::decode(read_file(rec_path));
  rec.ek = ek_new;
  rec.holders = std::move(holders);
  write_record(rec, "pri.rekey:record_tmp");
}

void PriStore::promote_owner(const Id16& f_id, const Id16& u_id) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPriv rec = FileRecordPriv::decode(read_file(rec_path));
  auto it = std::find_if(rec.holders.begin(), rec.holders.end(),
                         [&](const HolderPriv& h) { return h.u_id == u_id; });
  if (it == rec.holders.end()) throw Error(ErrorCode::NotAHolder);
  std::rotate(rec.holders.begin(), it, it + 1);
  write_record(rec, "pri.promote:record_tmp");
}

void PriStore::set_managed_by_pricsp(const Id16& f_id) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  FileRecordPriv rec = FileRecordPriv::decode(read_file(rec_path));
  rec.managed_by_pricsp = true;
  write_record(rec, "pri.manage:record_tmp");
}

void PriStore::remove(const Id16& f_id) {
  std::unique_lock lk(record_mutex(f_id));
  fs::path rec_path = file_dir(f_id) / "record.bin";
  if (!fs::exists(rec_path)) throw Error(ErrorCode::UnknownFile);
  fs::remove(rec_path);
  hook("pri.delete:record_removed");
  fs::remove_all(file_dir(f_id));
}

std::vector<Id16> PriStore::list_files() const {
  std::vector<Id16> out;
  for (auto& entry : fs::directory_iterator(root_ / "files")) {
    if (!entry.is_directory() || !fs::exists(entry.path() / "record.bin")) continue;
    Bytes raw = from_hex(entry.path().filename().string());
    Id16 id{};
    std::copy(raw.begin(), raw.end(), id.begin());
    out.push_back(id);
  }
  return out;
}

}  // namespace dedupvault::store
