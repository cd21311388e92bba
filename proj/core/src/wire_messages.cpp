#include "dedupvault/wire/messages.hpp"

#include "dedupvault/wire/codec.hpp"

namespace dedupvault::wire {

namespace {

// ---- field helpers ----

template <std::size_t N>
void put_arr(Writer& w, const std::array<std::uint8_t, N>& a) {
  w.arr(a);
}

void put_pk(Writer& w, const pre::PublicKey& pk) {
  std::uint8_t buf[pre::PublicKey::kBytes];
  pk.to_bytes(buf);
  w.raw(ByteView(buf, sizeof buf));
}

pre::PublicKey get_pk(Reader& r) {
  auto b = r.raw(pre::PublicKey::kBytes);
  auto pk = pre::PublicKey::from_bytes(b.data());
  if (!pk) throw Error(ErrorCode::MalformedFrame, "invalid public key");
  return *pk;
}

void put_rek(Writer& w, const pre::FirstLevelCiphertext& rek) {
  std::uint8_t buf[pre::FirstLevelCiphertext::kBytes];
  rek.to_bytes(buf);
  w.raw(ByteView(buf, sizeof buf));
}

pre::FirstLevelCiphertext get_rek(Reader& r) {
  auto b = r.raw(pre::FirstLevelCiphertext::kBytes);
  auto rek = pre::FirstLevelCiphertext::from_bytes(b.data());
  if (!rek) throw Error(ErrorCode::MalformedFrame, "invalid wrapped key");
  return *rek;
}

void put_ct(Writer& w, const sym::Ciphertext& ct) { w.bytes(ct.bytes); }

sym::Ciphertext get_ct(Reader& r) {
  auto b = r.bytes();
  return sym::Ciphertext{Bytes(b.begin(), b.end())};
}

bool get_bool(Reader& r) {
  std::uint8_t v = r.u8();
  if (v > 1) throw Error(ErrorCode::MalformedFrame, "non-canonical bool");
  return v == 1;
}

void put_index_set(Writer& w, const poss::IndexSet& x) {
  w.u32((std::uint32_t)x.size());
  for (const auto& ri : x) {
    w.u16(ri.start_bp);
    w.u16(ri.end_bp);
  }
}

poss::IndexSet get_index_set(Reader& r) {
  std::uint32_t n = r.u32();
  if (n > r.remaining() / 4) throw Error(ErrorCode::MalformedFrame, "index set count");
  poss::IndexSet x;
  x.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    poss::RegionIndex ri{r.u16(), r.u16()};
    if (ri.start_bp >= ri.end_bp || ri.end_bp > poss::kBpScale)
      throw Error(ErrorCode::MalformedFrame, "invalid region");
    x.push_back(ri);
  }
  return x;
}

void put_hash_set(Writer& w, const poss::HashCodeSet& h) {
  w.u32((std::uint32_t)h.size());
  for (const auto& d : h) w.arr(d);
}

poss::HashCodeSet get_hash_set(Reader& r) {
  std::uint32_t n = r.u32();
  if (n > r.remaining() / 32) throw Error(ErrorCode::MalformedFrame, "hash set count");
  poss::HashCodeSet h;
  h.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) h.push_back(r.arr<32>());
  return h;
}

// ---- per-message bodies ----

void body(Writer& w, const EnrollReq& m) {
  w.arr(m.u_id);
  w.arr(m.pk_sig);
  put_pk(w, m.pk_pre);
  w.arr(m.sig);
}
EnrollReq parse(Reader& r, EnrollReq*) {
  EnrollReq m;
  m.u_id = r.arr<16>();
  m.pk_sig = r.arr<32>();
  m.pk_pre = get_pk(r);
  m.sig = r.arr<64>();
  return m;
}

void body(Writer&, const EnrollResp&) {}
EnrollResp parse(Reader&, EnrollResp*) { return {}; }

void body(Writer& w, const UploadCheck& m) {
  w.arr(m.h);
  w.arr(m.sig);
  w.arr(m.u_id);
  w.arr(m.pk_sig);
}
UploadCheck parse(Reader& r, UploadCheck*) {
  UploadCheck m;
  m.h = r.arr<32>();
  m.sig = r.arr<64>();
  m.u_id = r.arr<16>();
  m.pk_sig = r.arr<32>();
  return m;
}

void body(Writer& w, const UploadCheckResp& m) {
  w.u8(m.duplicate ? 1 : 0);
  w.arr(m.f_id);
  w.u8(m.rek.has_value() ? 1 : 0);
  if (m.rek) put_rek(w, *m.rek);
}
UploadCheckResp parse(Reader& r, UploadCheckResp*) {
  UploadCheckResp m;
  m.duplicate = get_bool(r);
  m.f_id = r.arr<16>();
  if (get_bool(r)) m.rek = get_rek(r);
  return m;
}

void body(Writer& w, const StoreData& m) {
  w.arr(m.u_id);
  put_rek(w, m.rek);
  put_ct(w, m.ct);
  w.arr(m.sig);
}
StoreData parse(Reader& r, StoreData*) {
  StoreData m;
  m.u_id = r.arr<16>();
  m.rek = get_rek(r);
  m.ct = get_ct(r);
  m.sig = r.arr<64>();
  return m;
}

void body(Writer& w, const StoreDataResp& m) { w.arr(m.f_id); }
StoreDataResp parse(Reader& r, StoreDataResp*) { return {r.arr<16>()}; }

void body(Writer& w, const RegisterPossession& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  put_index_set(w, m.x);
  put_hash_set(w, m.hc);
  w.arr(m.sig);
}
RegisterPossession parse(Reader& r, RegisterPossession*) {
  RegisterPossession m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  m.x = get_index_set(r);
  m.hc = get_hash_set(r);
  m.sig = r.arr<64>();
  return m;
}

void body(Writer&, const RegisterPossessionResp&) {}
RegisterPossessionResp parse(Reader&, RegisterPossessionResp*) { return {}; }

void body(Writer& w, const PossessionStart& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  w.arr(m.sig);
}
PossessionStart parse(Reader& r, PossessionStart*) {
  PossessionStart m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  m.sig = r.arr<64>();
  return m;
}

void body(Writer& w, const DedupChallenge& m) {
  w.arr(m.challenge.f_id);
  w.arr(m.challenge.nonce);
  put_index_set(w, m.challenge.indices);
}
DedupChallenge parse(Reader& r, DedupChallenge*) {
  DedupChallenge m;
  m.challenge.f_id = r.arr<16>();
  m.challenge.nonce = r.arr<16>();
  m.challenge.indices = get_index_set(r);
  return m;
}

void body(Writer& w, const DedupResponse& m) {
  w.arr(m.response.f_id);
  w.arr(m.response.nonce);
  put_hash_set(w, m.response.digests);
}
DedupResponse parse(Reader& r, DedupResponse*) {
  DedupResponse m;
  m.response.f_id = r.arr<16>();
  m.response.nonce = r.arr<16>();
  m.response.digests = get_hash_set(r);
  return m;
}

void body(Writer& w, const PossessionResult& m) {
  w.arr(m.f_id);
  w.u8(m.ok ? 1 : 0);
}
PossessionResult parse(Reader& r, PossessionResult*) {
  PossessionResult m;
  m.f_id = r.arr<16>();
  m.ok = get_bool(r);
  return m;
}

void body(Writer& w, const DedupFetch& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  w.arr(m.sig);
}
DedupFetch parse(Reader& r, DedupFetch*) {
  DedupFetch m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  m.sig = r.arr<64>();
  return m;
}

void body(Writer& w, const DedupGrant& m) {
  put_rek(w, m.rek);
  put_ct(w, m.ct);
}
DedupGrant parse(Reader& r, DedupGrant*) {
  DedupGrant m;
  m.rek = get_rek(r);
  m.ct = get_ct(r);
  return m;
}

void body(Writer& w, const DownloadReq& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  w.arr(m.sig);
}
DownloadReq parse(Reader& r, DownloadReq*) {
  DownloadReq m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  m.sig = r.arr<64>();
  return m;
}

void body(Writer& w, const DownloadResp& m) {
  put_ct(w, m.ct);
  put_rek(w, m.rek);
  w.arr(m.h);
}
DownloadResp parse(Reader& r, DownloadResp*) {
  DownloadResp m;
  m.ct = get_ct(r);
  m.rek = get_rek(r);
  m.h = r.arr<32>();
  return m;
}

void body(Writer& w, const RevokeReq& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  w.arr(m.sig);
}
RevokeReq parse(Reader& r, RevokeReq*) {
  RevokeReq m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  m.sig = r.arr<64>();
  return m;
}

void body(Writer& w, const RevokeOwnerReq& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  w.u8((std::uint8_t)m.successor_kind);
  w.arr(m.successor);
  w.arr(m.sig);
}
RevokeOwnerReq parse(Reader& r, RevokeOwnerReq*) {
  RevokeOwnerReq m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  std::uint8_t kind = r.u8();
  if (kind > 1) throw Error(ErrorCode::MalformedFrame, "successor kind");
  m.successor_kind = (SuccessorKind)kind;
  m.successor = r.arr<16>();
  m.sig = r.arr<64>();
  return m;
}

void body(Writer& w, const RevokeResp& m) { w.u8(m.record_deleted ? 1 : 0); }
RevokeResp parse(Reader& r, RevokeResp*) { return {get_bool(r)}; }

void body(Writer& w, const KeyProvisionReq& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  put_pk(w, m.pk_pre);
}
KeyProvisionReq parse(Reader& r, KeyProvisionReq*) {
  KeyProvisionReq m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  m.pk_pre = get_pk(r);
  return m;
}

void body(Writer& w, const KeyProvisionResp& m) { put_rek(w, m.rek); }
KeyProvisionResp parse(Reader& r, KeyProvisionResp*) { return {get_rek(r)}; }

void body(Writer& w, const DedupRequest& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
}
DedupRequest parse(Reader& r, DedupRequest*) {
  DedupRequest m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  return m;
}

void body(Writer& w, const DedupKeyIssued& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  put_rek(w, m.rek);
}
DedupKeyIssued parse(Reader& r, DedupKeyIssued*) {
  DedupKeyIssued m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  m.rek = get_rek(r);
  return m;
}

void body(Writer& w, const RekeyRequest& m) {
  w.arr(m.f_id);
  w.arr(m.revoked);
  w.u8(m.owner_online ? 1 : 0);
  w.u8(m.promote_kind);
  w.arr(m.promote_id);
  put_ct(w, m.ct);
}
RekeyRequest parse(Reader& r, RekeyRequest*) {
  RekeyRequest m;
  m.f_id = r.arr<16>();
  m.revoked = r.arr<16>();
  m.owner_online = get_bool(r);
  m.promote_kind = r.u8();
  if (m.promote_kind > 2) throw Error(ErrorCode::MalformedFrame, "promote kind");
  m.promote_id = r.arr<16>();
  m.ct = get_ct(r);
  return m;
}

void body(Writer& w, const RekeyPackage& m) {
  w.arr(m.f_id);
  w.u8(m.ct_new.has_value() ? 1 : 0);
  if (m.ct_new) put_ct(w, *m.ct_new);
  w.u32((std::uint32_t)m.entries.size());
  for (const auto& e : m.entries) {
    w.arr(e.u_id);
    put_rek(w, e.rek);
  }
}
RekeyPackage parse(Reader& r, RekeyPackage*) {
  RekeyPackage m;
  m.f_id = r.arr<16>();
  if (get_bool(r)) m.ct_new = get_ct(r);
  std::uint32_t n = r.u32();
  if (n > r.remaining() / (16 + pre::FirstLevelCiphertext::kBytes))
    throw Error(ErrorCode::MalformedFrame, "rekey entry count");
  m.entries.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    RekeyEntry e;
    e.u_id = r.arr<16>();
    e.rek = get_rek(r);
    m.entries.push_back(std::move(e));
  }
  return m;
}

void body(Writer& w, const OwnerRekeyPackage& m) {
  w.arr(m.f_id);
  put_ct(w, m.ct);
  put_rek(w, m.rek_old);
  put_rek(w, m.rek_new);
}
OwnerRekeyPackage parse(Reader& r, OwnerRekeyPackage*) {
  OwnerRekeyPackage m;
  m.f_id = r.arr<16>();
  m.ct = get_ct(r);
  m.rek_old = get_rek(r);
  m.rek_new = get_rek(r);
  return m;
}

void body(Writer& w, const ReuploadCt& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  put_ct(w, m.ct);
  w.arr(m.sig);
}
ReuploadCt parse(Reader& r, ReuploadCt*) {
  ReuploadCt m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  m.ct = get_ct(r);
  m.sig = r.arr<64>();
  return m;
}

void body(Writer& w, const PoisonReport& m) {
  w.arr(m.f_id);
  w.arr(m.u_id);
  w.arr(m.expected_h);
  w.arr(m.sig);
}
PoisonReport parse(Reader& r, PoisonReport*) {
  PoisonReport m;
  m.f_id = r.arr<16>();
  m.u_id = r.arr<16>();
  m.expected_h = r.arr<32>();
  m.sig = r.arr<64>();
  return m;
}

void body(Writer& w, const DeleteNotify& m) { w.arr(m.f_id); }
DeleteNotify parse(Reader& r, DeleteNotify*) { return {r.arr<16>()}; }

void body(Writer&, const Ack&) {}
Ack parse(Reader&, Ack*) { return {}; }

void body(Writer& w, const ErrorMsg& m) { w.u16((std::uint16_t)m.code); }
ErrorMsg parse(Reader& r, ErrorMsg*) { return {(ErrorCode)r.u16()}; }

template <typename T>
struct TagFor;
#define DV_TAG(T)                         \
  template <>                             \
  struct TagFor<T> {                      \
    static constexpr Tag value = Tag::T;  \
  };
DV_TAG(EnrollReq)
DV_TAG(EnrollResp)
DV_TAG(UploadCheck)
DV_TAG(UploadCheckResp)
DV_TAG(StoreData)
DV_TAG(StoreDataResp)
DV_TAG(RegisterPossession)
DV_TAG(RegisterPossessionResp)
DV_TAG(PossessionStart)
DV_TAG(DedupChallenge)
DV_TAG(DedupResponse)
DV_TAG(PossessionResult)
DV_TAG(DedupFetch)
DV_TAG(DedupGrant)
DV_TAG(DownloadReq)
DV_TAG(DownloadResp)
DV_TAG(RevokeReq)
DV_TAG(RevokeOwnerReq)
DV_TAG(RevokeResp)
DV_TAG(KeyProvisionReq)
DV_TAG(KeyProvisionResp)
DV_TAG(DedupRequest)
DV_TAG(DedupKeyIssued)
DV_TAG(RekeyRequest)
DV_TAG(RekeyPackage)
DV_TAG(OwnerRekeyPackage)
DV_TAG(ReuploadCt)
DV_TAG(PoisonReport)
DV_TAG(DeleteNotify)
DV_TAG(Ack)
#undef DV_TAG

}  // namespace

Tag tag_of(const ProtocolMessage& msg) {
  return std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ErrorMsg>)
          return Tag::Error;
        else
          return TagFor<T>::value;
      },
      msg);
}

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::EnrollReq: return "EnrollReq";
    case Tag::EnrollResp: return "EnrollResp";
    case Tag::UploadCheck: return "UploadCheck";
    case Tag::UploadCheckResp: return "UploadCheckResp";
    case Tag::StoreData: return "StoreData";
    case Tag::StoreDataResp: return "StoreDataResp";
    case Tag::RegisterPossession: return "RegisterPossession";
    case Tag::RegisterPossessionResp: return "RegisterPossessionResp";
    case Tag::PossessionStart: return "PossessionStart";
    case Tag::DedupChallenge: return "DedupChallenge";
    case Tag::DedupResponse: return "DedupResponse";
    case Tag::PossessionResult: return "PossessionResult";
    case Tag::DedupFetch: return "DedupFetch";
    case Tag::DedupGrant: return "DedupGrant";
    case Tag::DownloadReq: return "DownloadReq";
    case Tag::DownloadResp: return "DownloadResp";
    case Tag::RevokeReq: return "RevokeReq";
    case Tag::RevokeOwnerReq: return "RevokeOwnerReq";
    case Tag::RevokeResp: return "RevokeResp";
    case Tag::KeyProvisionReq: return "KeyProvisionReq";
    case Tag::KeyProvisionResp: return "KeyProvisionResp";
    case Tag::DedupRequest: return "DedupRequest";
    case Tag::DedupKeyIssued: return "DedupKeyIssued";
    case Tag::RekeyRequest: return "RekeyRequest";
    case Tag::RekeyPackage: return "RekeyPackage";
    case Tag::OwnerRekeyPackage: return "OwnerRekeyPackage";
    case Tag::ReuploadCt: return "ReuploadCt";
    case Tag::PoisonReport: return "PoisonReport";
    case Tag::DeleteNotify: return "DeleteNotify";
    case Tag::Ack: return "Ack";
    case Tag::Error: return "Error";
  }
  return "?";
}

namespace {
Bytes encode_payload(const ProtocolMessage& msg) {
  Writer w;
  w.u8(kProtocolVersion);
  w.u8((std::uint8_t)tag_of(msg));
  std::visit([&](const auto& m) { body(w, m); }, msg);
  return w.take();
}
}  // namespace

Bytes encode(const ProtocolMessage& msg) {
  Bytes payload = encode_payload(msg);
  if (payload.size() > kMaxFrameBytes)
    throw Error(ErrorCode::MalformedFrame, "frame too large");
  Writer w;
  w.u32((std::uint32_t)payload.size());
  w.raw(payload);
  return w.take();
}

Bytes encode_body_for_signing(const ProtocolMessage& msg) { return encode_payload(msg); }

ProtocolMessage decode(ByteView frame) {
  Reader hr(frame);
  std::uint32_t len = hr.u32();
  if (len < 2 || len > kMaxFrameBytes) throw Error(ErrorCode::MalformedFrame, "bad length");
  if (len != hr.remaining()) throw Error(ErrorCode::MalformedFrame, "length mismatch");
  std::uint8_t version = hr.u8();
  if (version != kProtocolVersion) throw Error(ErrorCode::UnknownVersion);
  std::uint8_t tag = hr.u8();
  Reader r(frame.subspan(kFrameHeaderBytes + 2));

  ProtocolMessage out;
  switch ((Tag)tag) {
    case Tag::EnrollReq: out = parse(r, (EnrollReq*)nullptr); break;
    case Tag::EnrollResp: out = parse(r, (EnrollResp*)nullptr); break;
    case Tag::UploadCheck: out = parse(r, (UploadCheck*)nullptr); break;
    case Tag::UploadCheckResp: out = parse(r, (UploadCheckResp*)nullptr); break;
    case Tag::StoreData: out = parse(r, (StoreData*)nullptr); break;
    case Tag::StoreDataResp: out = parse(r, (StoreDataResp*)nullptr); break;
    case Tag::RegisterPossession: out = parse(r, (RegisterPossession*)nullptr); break;
    case Tag::RegisterPossessionResp: out = parse(r, (RegisterPossessionResp*)nullptr); break;
    case Tag::PossessionStart: out = parse(r, (PossessionStart*)nullptr); break;
    case Tag::DedupChallenge: out = parse(r, (DedupChallenge*)nullptr); break;
    case Tag::DedupResponse: out = parse(r, (DedupResponse*)nullptr); break;
    case Tag::PossessionResult: out = parse(r, (PossessionResult*)nullptr); break;
    case Tag::DedupFetch: out = parse(r, (DedupFetch*)nullptr); break;
    case Tag::DedupGrant: out = parse(r, (DedupGrant*)nullptr); break;
    case Tag::DownloadReq: out = parse(r, (DownloadReq*)nullptr); break;
    case Tag::DownloadResp: out = parse(r, (DownloadResp*)nullptr); break;
    case Tag::RevokeReq: out = parse(r, (RevokeReq*)nullptr); break;
    case Tag::RevokeOwnerReq: out = parse(r, (RevokeOwnerReq*)nullptr); break;
    case Tag::RevokeResp: out = parse(r, (RevokeResp*)nullptr); break;
    case Tag::KeyProvisionReq: out = parse(r, (KeyProvisionReq*)nullptr); break;
    case Tag::KeyProvisionResp: out = parse(r, (KeyProvisionResp*)nullptr); break;
    case Tag::DedupRequest: out = parse(r, (DedupRequest*)nullptr); break;
    case Tag::DedupKeyIssued: out = parse(r, (DedupKeyIssued*)nullptr); break;
    case Tag::RekeyRequest: out = parse(r, (RekeyRequest*)nullptr); break;
    case Tag::RekeyPackage: out = parse(r, (RekeyPackage*)nullptr); break;
    case Tag::OwnerRekeyPackage: out = parse(r, (OwnerRekeyPackage*)nullptr); break;
    case Tag::ReuploadCt: out = parse(r, (ReuploadCt*)nullptr); break;
    case Tag::PoisonReport: out = parse(r, (PoisonReport*)nullptr); break;
    case Tag::DeleteNotify: out = parse(r, (DeleteNotify*)nullptr); break;
    case Tag::Ack: out = parse(r, (Ack*)nullptr); break;
    case Tag::Error: out = parse(r, (ErrorMsg*)nullptr); break;
    default: throw Error(ErrorCode::UnknownTag);
  }
  r.expect_done();
  return out;
}

std::size_t measure(const ProtocolMessage& msg) { return encode(msg).size(); }

std::size_t measure_core(const ProtocolMessage& msg) {
  constexpr std::size_t kRek = pre::FirstLevelCiphertext::kBytes;
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UploadCheck>) return 32 + 16;  // C_H + C_ID
        else if constexpr (std::is_same_v<T, UploadCheckResp>)
          return m.rek ? kRek : 0;  // C_K delivered to the initial uploader
        else if constexpr (std::is_same_v<T, StoreData>) return m.ct.size();  // C_C
        else if constexpr (std::is_same_v<T, RegisterPossession>)
          return 32 * m.hc.size();  // C_HC
        else if constexpr (std::is_same_v<T, DownloadResp>)
          return m.ct.size() + kRek + 32;  // C_C + C_K + C_H
        else if constexpr (std::is_same_v<T, KeyProvisionResp>) return kRek;  // C_K
        else if constexpr (std::is_same_v<T, DedupKeyIssued>) return kRek;
        else if constexpr (std::is_same_v<T, DedupGrant>) return kRek + m.ct.size();
        else if constexpr (std::is_same_v<T, RekeyPackage>) {
          std::size_t s = m.entries.size() * kRek;
          if (m.ct_new) s += m.ct_new->size();
          return s;
        } else if constexpr (std::is_same_v<T, OwnerRekeyPackage>)
          return m.ct.size() + 2 * kRek;
        else if constexpr (std::is_same_v<T, ReuploadCt>) return m.ct.size();
        else
          return 0;
      },
      msg);
}

}  // namespace dedupvault::wire
