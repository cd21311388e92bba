#include "dedupvault/records.hpp"

#include <algorithm>

#include "dedupvault/wire/codec.hpp"

namespace dedupvault::store {

using wire::Reader;
using wire::Writer;

namespace {

void put_rek(Writer& w, const pre::FirstLevelCiphertext& rek) {
  std::uint8_t buf[pre::FirstLevelCiphertext::kBytes];
  rek.to_bytes(buf);
  w.raw(ByteView(buf, sizeof buf));
}

pre::FirstLevelCiphertext get_rek(Reader& r) {
  auto b = r.raw(pre::FirstLevelCiphertext::kBytes);
  auto rek = pre::FirstLevelCiphertext::from_bytes(b.data());
  if (!rek) throw Error(ErrorCode::MalformedFrame, "record: bad wrapped key");
  return *rek;
}

}  // namespace

bool FileRecordPub::has_holder(const Id16& u) const { return find_holder(u) != nullptr; }

const HolderPub* FileRecordPub::find_holder(const Id16& u) const {
  auto it = std::find_if(owners.begin(), owners.end(),
                         [&](const HolderPub& h) { return h.u_id == u; });
  return it == owners.end() ? nullptr : &*it;
}

Bytes FileRecordPub::encode() const {
  Writer w;
  w.arr(f_id);
  w.arr(h);
  w.u64(blob_gen);
  w.u8(managed_by_pricsp ? 1 : 0);
  w.u32((std::uint32_t)owners.size());
  for (const auto& o : owners) {
    w.arr(o.u_id);
    put_rek(w, o.rek);
  }
  return w.take();
}

FileRecordPub FileRecordPub::decode(ByteView data) {
  Reader r(data);
  FileRecordPub rec;
  rec.f_id = r.arr<16>();
  rec.h = r.arr<32>();
  rec.blob_gen = r.u64();
  std::uint8_t flag = r.u8();
  if (flag > 1) throw Error(ErrorCode::MalformedFrame, "record flag");
  rec.managed_by_pricsp = flag == 1;
  std::uint32_t n = r.u32();
  if (n > r.remaining() / (16 + pre::FirstLevelCiphertext::kBytes))
    throw Error(ErrorCode::MalformedFrame, "owner count");
  for (std::uint32_t i = 0; i < n; ++i) {
    HolderPub h;
    h.u_id = r.arr<16>();
    h.rek = get_rek(r);
    rec.owners.push_back(std::move(h));
  }
  r.expect_done();
  return rec;
}

bool FileRecordPriv::has_holder(const Id16& u) const { return find_holder(u) != nullptr; }

const HolderPriv* FileRecordPriv::find_holder(const Id16& u) const {
  auto it = std::find_if(holders.begin(), holders.end(),
                         [&](const HolderPriv& h) { return h.u_id == u; });
  return it == holders.end() ? nullptr : &*it;
}

Bytes FileRecordPriv::encode() const {
  Writer w;
  w.arr(f_id);
  w.u32((std::uint32_t)retained_x.size());
  for (const auto& ri : retained_x) {
    w.u16(ri.start_bp);
    w.u16(ri.end_bp);
  }
  w.u32((std::uint32_t)retained_hc.size());
  for (const auto& d : retained_hc) w.arr(d);
  std::uint8_t ekb[pre::SecondLevelCiphertext::kBytes];
  ek.to_bytes(ekb);
  w.raw(ByteView(ekb, sizeof ekb));
  w.u8(managed_by_pricsp ? 1 : 0);
  w.u32((std::uint32_t)holders.size());
  for (const auto& h : holders) {
    w.arr(h.u_id);
    std::uint8_t rkb[pre::ReEncryptionKey::kBytes];
    h.rk.to_bytes(rkb);
    w.raw(ByteView(rkb, sizeof rkb));
  }
  return w.take();
}

FileRecordPriv FileRecordPriv::decode(ByteView data) {
  Reader r(data);
  FileRecordPriv rec;
  rec.f_id = r.arr<16>();
  std::uint32_t nx = r.u32();
  if (nx > r.remaining() / 4) throw Error(ErrorCode::MalformedFrame, "index count");
  for (std::uint32_t i = 0; i < nx; ++i) {
    poss::RegionIndex ri{r.u16(), r.u16()};
    if (ri.start_bp >= ri.end_bp || ri.end_bp > poss::kBpScale)
      throw Error(ErrorCode::MalformedFrame, "record region");
    rec.retained_x.push_back(ri);
  }
  std::uint32_t nh = r.u32();
  if (nh > r.remaining() / 32) throw Error(ErrorCode::MalformedFrame, "hash count");
  for (std::uint32_t i = 0; i < nh; ++i) rec.retained_hc.push_back(r.arr<32>());
  if (nh != nx) throw Error(ErrorCode::MalformedFrame, "misaligned possession sets");
  auto ekb = r.raw(pre::SecondLevelCiphertext::kBytes);
  auto ek = pre::SecondLevelCiphertext::from_bytes(ekb.data());
  if (!ek) throw Error(ErrorCode::MalformedFrame, "record: bad EK");
  rec.ek = *ek;
  std::uint8_t flag = r.u8();
  if (flag > 1) throw Error(ErrorCode::MalformedFrame, "record flag");
  rec.managed_by_pricsp = flag == 1;
  std::uint32_t n = r.u32();
  if (n > r.remaining() / (16 + pre::ReEncryptionKey::kBytes))
    throw Error(ErrorCode::MalformedFrame, "holder count");
  for (std::uint32_t i = 0; i < n; ++i) {
    HolderPriv h;
    h.u_id = r.arr<16>();
    auto rkb = r.raw(pre::ReEncryptionKey::kBytes);
    auto rk = pre::ReEncryptionKey::from_bytes(rkb.data());
    if (!rk) throw Error(ErrorCode::MalformedFrame, "record: bad rekey");
    h.rk = *rk;
    rec.holders.push_back(std::move(h));
  }
  r.expect_done();
  return rec;
}

Bytes UserEntry::encode() const {
  Writer w;
  w.arr(u_id);
  w.arr(pk_sig);
  std::uint8_t pkb[pre::PublicKey::kBytes];
  pk_pre.to_bytes(pkb);
  w.raw(ByteView(pkb, sizeof pkb));
  return w.take();
}

UserEntry UserEntry::decode(ByteView data) {
  Reader r(data);
  UserEntry u;
  u.u_id = r.arr<16>();
  u.pk_sig = r.arr<32>();
  auto pkb = r.raw(pre::PublicKey::kBytes);
  auto pk = pre::PublicKey::from_bytes(pkb.data());
  if (!pk) throw Error(ErrorCode::MalformedFrame, "user entry: bad key");
  u.pk_pre = *pk;
  r.expect_done();
  return u;
}

}  // namespace dedupvault::store
