#ifndef DEDUPVAULT_WIRE_MESSAGES_HPP
#define DEDUPVAULT_WIRE_MESSAGES_HPP

#include <optional>
#include <variant>
#include <vector>

#include "dedupvault/possession.hpp"
#include "dedupvault/pre.hpp"
#include "dedupvault/sym.hpp"

namespace dedupvault::wire {

// Frame: u32 length (over version+tag+body) || u8 version || u8 tag || body.
inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::size_t kMaxFrameBytes = 128u << 20;
inline constexpr std::size_t kFrameHeaderBytes = 4;

enum class Tag : std::uint8_t {
  EnrollReq = 1,
  EnrollResp = 2,
  UploadCheck = 3,
  UploadCheckResp = 4,
  StoreData = 5,
  StoreDataResp = 6,
  RegisterPossession = 7,
  RegisterPossessionResp = 8,
  PossessionStart = 9,
  DedupChallenge = 10,
  DedupResponse = 11,
  PossessionResult = 12,
  DedupFetch = 13,
  DedupGrant = 14,
  DownloadReq = 15,
  DownloadResp = 16,
  RevokeReq = 17,
  RevokeOwnerReq = 18,
  RevokeResp = 19,
  KeyProvisionReq = 20,
  KeyProvisionResp = 21,
  DedupRequest = 22,
  DedupKeyIssued = 23,
  RekeyRequest = 24,
  RekeyPackage = 25,
  OwnerRekeyPackage = 26,
  ReuploadCt = 27,
  PoisonReport = 28,
  DeleteNotify = 29,
  Ack = 30,
  Error = 31,
};

// enrollment registers (u_id, PK_u, pk_u) with a CSP, self-signed
struct EnrollReq {
  Id16 u_id{};
  sym::VerifyKey pk_sig{};
  pre::PublicKey pk_pre;
  sym::Signature sig{};
};
struct EnrollResp {};

// dp = {H(F), sign(H(F))} plus the sender identity
struct UploadCheck {
  Digest h{};
  sym::Signature sig{};
  Id16 u_id{};
  sym::VerifyKey pk_sig{};
};
struct UploadCheckResp {
  bool duplicate = false;
  Id16 f_id{};
  std::optional<pre::FirstLevelCiphertext> rek;  // present on the initial-upload path
};

// dp1 = {u_id, REK, CT}
struct StoreData {
  Id16 u_id{};
  pre::FirstLevelCiphertext rek;
  sym::Ciphertext ct;
  sym::Signature sig{};
};
struct StoreDataResp {
  Id16 f_id{};
};

// dp2 = {F_id, u_id, X, HC(F)}
struct RegisterPossession {
  Id16 f_id{};
  Id16 u_id{};
  poss::IndexSet x;
  poss::HashCodeSet hc;
  sym::Signature sig{};
};
struct RegisterPossessionResp {};

struct PossessionStart {
  Id16 f_id{};
  Id16 u_id{};
  sym::Signature sig{};
};
struct DedupChallenge {
  poss::Challenge challenge;
};
struct DedupResponse {
  poss::ChallengeResponse response;
};
struct PossessionResult {
  Id16 f_id{};
  bool ok = false;
};

struct DedupFetch {
  Id16 f_id{};
  Id16 u_id{};
  sym::Signature sig{};
};
struct DedupGrant {
  pre::FirstLevelCiphertext rek;
  sym::Ciphertext ct;
};

struct DownloadReq {
  Id16 f_id{};
  Id16 u_id{};
  sym::Signature sig{};
};
struct DownloadResp {
  sym::Ciphertext ct;
  pre::FirstLevelCiphertext rek;
  Digest h{};
};

struct RevokeReq {
  Id16 f_id{};
  Id16 u_id{};
  sym::Signature sig{};
};
enum class SuccessorKind : std::uint8_t { Holder = 0, PriCsp = 1 };
struct RevokeOwnerReq {
  Id16 f_id{};
  Id16 u_id{};
  SuccessorKind successor_kind = SuccessorKind::Holder;
  Id16 successor{};
  sym::Signature sig{};
};
struct RevokeResp {
  bool record_deleted = false;
};

// Pub-CSP -> Pri-CSP provisioning for an initial upload
struct KeyProvisionReq {
  Id16 f_id{};
  Id16 u_id{};
  pre::PublicKey pk_pre;
};
struct KeyProvisionResp {
  pre::FirstLevelCiphertext rek;
};

// Pub-CSP -> Pri-CSP: dedup pending for (F_id, u_id)
struct DedupRequest {
  Id16 f_id{};
  Id16 u_id{};
};
// Pri-CSP -> Pub-CSP after a passed challenge
struct DedupKeyIssued {
  Id16 f_id{};
  Id16 u_id{};
  pre::FirstLevelCiphertext rek;
};

// Pub-CSP -> Pri-CSP revocation rekey. ct carries the current blob in
// delegated mode; empty when the owner performs the re-encryption.
// promote_kind: 0 none, 1 rotate promote_id to list head, 2 hand to Pri-CSP.
struct RekeyRequest {
  Id16 f_id{};
  Id16 revoked{};
  bool owner_online = false;
  std::uint8_t promote_kind = 0;
  Id16 promote_id{};
  sym::Ciphertext ct;
};
struct RekeyEntry {
  Id16 u_id{};
  pre::FirstLevelCiphertext rek;
};
struct RekeyPackage {
  Id16 f_id{};
  std::optional<sym::Ciphertext> ct_new;  // absent in owner-online mode
  std::vector<RekeyEntry> entries;
};

// Pub-CSP -> owner in owner-online mode; includes the old REK so the owner
// can recover K before re-encrypting under K'.
struct OwnerRekeyPackage {
  Id16 f_id{};
  sym::Ciphertext ct;
  pre::FirstLevelCiphertext rek_old;
  pre::FirstLevelCiphertext rek_new;
};
struct ReuploadCt {
  Id16 f_id{};
  Id16 u_id{};
  sym::Ciphertext ct;
  sym::Signature sig{};
};

struct PoisonReport {
  Id16 f_id{};
  Id16 u_id{};
  Digest expected_h{};
  sym::Signature sig{};
};

struct DeleteNotify {
  Id16 f_id{};
};

struct Ack {};
struct ErrorMsg {
  ErrorCode code = ErrorCode::None;
};

using ProtocolMessage =
    std::variant<EnrollReq, EnrollResp, UploadCheck, UploadCheckResp, StoreData, StoreDataResp,
                 RegisterPossession, RegisterPossessionResp, PossessionStart, DedupChallenge,
                 DedupResponse, PossessionResult, DedupFetch, DedupGrant, DownloadReq,
                 DownloadResp, RevokeReq, RevokeOwnerReq, RevokeResp, KeyProvisionReq,
                 KeyProvisionResp, DedupRequest, DedupKeyIssued, RekeyRequest, RekeyPackage,
                 OwnerRekeyPackage, ReuploadCt, PoisonReport, DeleteNotify, Ack, ErrorMsg>;

Tag tag_of(const ProtocolMessage& msg);
const char* tag_name(Tag t);

// Full frame (header + version + tag + body).
Bytes encode(const ProtocolMessage& msg);
// Throws Error(MalformedFrame | UnknownVersion | UnknownTag).
ProtocolMessage decode(ByteView frame);

// Exact serialized frame size.
std::size_t measure(const ProtocolMessage& msg);

// Accounted payload bytes per the communication-overhead model: the hash tag,
// user id, ciphertext, hash-code set and wrapped-key bytes a flow transfers.
// Framing, signatures, echoes and coordination fields count as overhead.
std::size_t measure_core(const ProtocolMessage& msg);

// Canonical signing bytes: the message body with its signature field zeroed.
template <typename T>
Bytes signing_bytes(T msg) {
  msg.sig = sym::Signature{};
  extern Bytes encode_body_for_signing(const ProtocolMessage&);
  return encode_body_for_signing(ProtocolMessage(std::move(msg)));
}

}  // namespace dedupvault::wire

#endif
