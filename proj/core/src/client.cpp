#include "dedupvault/protocol/client.hpp"

#include "dedupvault/wire/codec.hpp"

namespace dedupvault::protocol {

using namespace wire;

Identity Identity::generate(const Id16& u_id, Rng& rng) {
  Identity id;
  id.u_id = u_id;
  id.sig = sym::sig_keygen(rng);
  pre::PreKeyPair kp = pre::keygen1(rng);
  id.sk_pre = kp.sk;
  id.pk_pre = kp.pk;
  return id;
}

Bytes Identity::encode() const {
  Writer w;
  w.arr(u_id);
  w.arr(sig.sk);
  w.arr(sig.pk);
  std::uint8_t skb[32];
  sk_pre.to_bytes(skb);
  w.raw(ByteView(skb, 32));
  std::uint8_t pkb[pre::PublicKey::kBytes];
  pk_pre.to_bytes(pkb);
  w.raw(ByteView(pkb, sizeof pkb));
  return w.take();
}

Identity Identity::decode(ByteView data) {
  Reader r(data);
  Identity id;
  id.u_id = r.arr<16>();
  id.sig.sk = r.arr<32>();
  id.sig.pk = r.arr<32>();
  auto skb = r.raw(32);
  auto sk = bls::Fr::from_bytes(skb.data());
  if (!sk) throw Error(ErrorCode::MalformedFrame, "identity: bad scalar");
  id.sk_pre = *sk;
  auto pkb = r.raw(pre::PublicKey::kBytes);
  auto pk = pre::PublicKey::from_bytes(pkb.data());
  if (!pk) throw Error(ErrorCode::MalformedFrame, "identity: bad public key");
  id.pk_pre = *pk;
  r.expect_done();
  return id;
}

DuClient::DuClient(Identity identity, net::Channel& to_pub, net::Channel& to_pri, Rng& rng,
                   Params params)
    : identity_(std::move(identity)), pub_(to_pub), pri_(to_pri), rng_(rng), params_(params) {}

template <typename T>
T DuClient::fill_sig(T msg) const {
  msg.sig = sym::sign(identity_.sig, signing_bytes(msg));
  return msg;
}

void DuClient::enroll() {
  EnrollReq req{identity_.u_id, identity_.sig.pk, identity_.pk_pre, {}};
  req = fill_sig(req);
  net::call_expect<EnrollResp>(pub_, req, params_.call_retries);
  net::call_expect<EnrollResp>(pri_, req, params_.call_retries);
}

sym::SymKey DuClient::unwrap_key(const pre::FirstLevelCiphertext& rek) const {
  return sym::SymKey{pre::derive_key(pre::de1(identity_.sk_pre, rek))};
}

Bytes DuClient::decrypt_checked(const Id16& f_id, const sym::Ciphertext& ct,
                                const pre::FirstLevelCiphertext& rek, const Digest& expect_h) {
  auto plaintext = sym::decrypt(unwrap_key(rek), ct);
  if (plaintext && sym::hash(*plaintext) == expect_h) return std::move(*plaintext);
  // tag inconsistency (poison attack) or an undecryptable grant: report it
  PoisonReport report{f_id, identity_.u_id, expect_h, {}};
  try {
    net::call_expect<Ack>(pub_, fill_sig(report), params_.call_retries);
  } catch (const Error&) {
    // reporting is best effort; the local failure still surfaces below
  }
  throw Error(ErrorCode::ConsistencyFailure);
}

DuClient::UploadResult DuClient::upload(ByteView f) {
  Digest h = sym::hash(f);
  UploadCheck dp{h, {}, identity_.u_id, identity_.sig.pk};
  auto resp = net::call_expect<UploadCheckResp>(pub_, fill_sig(dp), params_.call_retries);

  if (resp.duplicate) return run_dedup(resp.f_id, f);

  if (!resp.rek) throw Error(ErrorCode::Internal, "initial upload without a wrapped key");
  sym::SymKey key = unwrap_key(*resp.rek);
  sym::Ciphertext ct = sym::encrypt(key, f, rng_);

  StoreData dp1{identity_.u_id, *resp.rek, std::move(ct), {}};
  try {
    net::call_expect<StoreDataResp>(pub_, fill_sig(dp1), params_.call_retries);
  } catch (const Error& e) {
    // lost the initial-upload race: another user committed the same file
    if (e.code() == ErrorCode::DuplicateDetected) return upload(f);
    throw;
  }

  poss::IndexSet x = poss::generate_index_set(rng_, params_.possession_n);
  poss::HashCodeSet hc = poss::compute_hash_code_set(f, x);
  RegisterPossession dp2{resp.f_id, identity_.u_id, std::move(x), std::move(hc), {}};
  net::call_expect<RegisterPossessionResp>(pri_, fill_sig(dp2), params_.call_retries);
  return {resp.f_id, false};
}

DuClient::UploadResult DuClient::run_dedup(const Id16& f_id, ByteView f) {
  PossessionStart start{f_id, identity_.u_id, {}};
  auto challenge =
      net::call_expect<DedupChallenge>(pri_, fill_sig(start), params_.call_retries);

  DedupResponse response{poss::respond(challenge.challenge, f)};
  auto result = net::call_expect<PossessionResult>(pri_, response, params_.call_retries);
  if (!result.ok) throw Error(ErrorCode::PossessionFailed);

  DedupFetch fetch{f_id, identity_.u_id, {}};
  auto grant = net::call_expect<DedupGrant>(pub_, fill_sig(fetch), params_.call_retries);

  // data-consistency check against the tag we uploaded
  Bytes plaintext = decrypt_checked(f_id, grant.ct, grant.rek, sym::hash(f));
  (void)plaintext;
  return {f_id, true};
}

Bytes DuClient::download(const Id16& f_id) {
  DownloadReq req{f_id, identity_.u_id, {}};
  auto resp = net::call_expect<DownloadResp>(pub_, fill_sig(req), params_.call_retries);
  return decrypt_checked(f_id, resp.ct, resp.rek, resp.h);
}

bool DuClient::revoke(const Id16& f_id) {
  RevokeReq req{f_id, identity_.u_id, {}};
  auto resp = net::call_expect<RevokeResp>(pub_, fill_sig(req), params_.call_retries);
  return resp.record_deleted;
}

bool DuClient::revoke_owner(const Id16& f_id, std::optional<Id16> successor) {
  RevokeOwnerReq req{f_id, identity_.u_id,
                     successor ? SuccessorKind::Holder : SuccessorKind::PriCsp,
                     successor.value_or(Id16{}), {}};
  auto resp = net::call_expect<RevokeResp>(pub_, fill_sig(req), params_.call_retries);
  return resp.record_deleted;
}

wire::ProtocolMessage DuClient::handle(const wire::ProtocolMessage& req) {
  try {
    const auto* pkg = std::get_if<OwnerRekeyPackage>(&req);
    if (!pkg) return ErrorMsg{ErrorCode::UnknownTag};

    sym::SymKey key_old = unwrap_key(pkg->rek_old);
    auto plaintext = sym::decrypt(key_old, pkg->ct);
    if (!plaintext) return ErrorMsg{ErrorCode::ConsistencyFailure};
    sym::SymKey key_new = unwrap_key(pkg->rek_new);
    sym::Ciphertext ct_new = sym::encrypt(key_new, *plaintext, rng_);

    ReuploadCt reply{pkg->f_id, identity_.u_id, std::move(ct_new), {}};
    return fill_sig(reply);
  } catch (const Error& e) {
    return ErrorMsg{e.code()};
  } catch (const std::exception&) {
    return ErrorMsg{ErrorCode::Internal};
  }
}

}  // namespace dedupvault::protocol
