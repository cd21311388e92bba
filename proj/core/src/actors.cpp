#include "dedupvault/protocol/actors.hpp"

#include <algorithm>

namespace dedupvault::protocol {

using namespace wire;

namespace {

ProtocolMessage error_reply(const Error& e) { return ErrorMsg{e.code()}; }

template <typename Map>
void purge_expired(Map& m, std::uint64_t now) {
  for (auto it = m.begin(); it != m.end();) {
    if (it->second.expires_ms <= now)
      it = m.erase(it);
    else
      ++it;
  }
}

}  // namespace

// ---------- PubCsp ----------

PubCsp::PubCsp(store::PubStore& store, net::Channel& to_pri, OwnerResolver owner_resolver,
               Rng& rng, net::ClockFn clock, Params params)
    : store_(store),
      pri_(to_pri),
      owner_resolver_(std::move(owner_resolver)),
      rng_(rng),
      clock_(std::move(clock)),
      params_(params) {}

store::UserEntry PubCsp::require_user(const Id16& u_id) {
  auto u = store_.load_user(u_id);
  if (!u) throw Error(ErrorCode::NotEnrolled);
  return *u;
}

template <typename T>
void PubCsp::require_sig(const T& msg, const Id16& u_id) {
  store::UserEntry user = require_user(u_id);
  if (!sym::verify(user.pk_sig, signing_bytes(msg), msg.sig))
    throw Error(ErrorCode::SignatureInvalid);
}

Id16 PubCsp::mint_file_id() {
  for (;;) {
    Id16 id;
    rng_.fill(id);
    if (store_.exists(id)) continue;
    bool pending = false;
    for (const auto& [u, sess] : pending_uploads_)
      if (sess.f_id == id) pending = true;
    if (!pending) return id;
  }
}

ProtocolMessage PubCsp::handle(const ProtocolMessage& req) {
  std::lock_guard lk(mu_);
  purge_expired(pending_uploads_, clock_());
  purge_expired(done_revocations_, clock_());
  try {
    return std::visit(
        [this](const auto& m) -> ProtocolMessage {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, EnrollReq> || std::is_same_v<T, UploadCheck> ||
                        std::is_same_v<T, StoreData> || std::is_same_v<T, DedupFetch> ||
                        std::is_same_v<T, DownloadReq> || std::is_same_v<T, RevokeReq> ||
                        std::is_same_v<T, RevokeOwnerReq> || std::is_same_v<T, DedupKeyIssued> ||
                        std::is_same_v<T, PoisonReport>) {
            return on(m);
          } else {
            return ErrorMsg{ErrorCode::UnknownTag};
          }
        },
        req);
  } catch (const Error& e) {
    return error_reply(e);
  } catch (const std::exception&) {
    return ErrorMsg{ErrorCode::Internal};
  }
}

ProtocolMessage PubCsp::on(const EnrollReq& m) {
  if (!sym::verify(m.pk_sig, signing_bytes(m), m.sig)) throw Error(ErrorCode::SignatureInvalid);
  if (auto existing = store_.load_user(m.u_id)) {
    if (existing->pk_sig != m.pk_sig || !(existing->pk_pre == m.pk_pre))
      throw Error(ErrorCode::EnrollMismatch);
    return EnrollResp{};
  }
  store_.save_user({m.u_id, m.pk_sig, m.pk_pre});
  return EnrollResp{};
}

ProtocolMessage PubCsp::on(const UploadCheck& m) {
  store::UserEntry user = require_user(m.u_id);
  if (user.pk_sig != m.pk_sig) throw Error(ErrorCode::EnrollMismatch);
  if (!sym::verify(user.pk_sig, signing_bytes(m), m.sig)) throw Error(ErrorCode::SignatureInvalid);

  if (auto f_id = store_.dup_check(m.h)) {
    // deduplication path: screen the holder list, then hand over to Pri-CSP
    store::FileRecordPub rec = store_.get(*f_id);
    if (rec.has_holder(m.u_id)) throw Error(ErrorCode::AlreadyHolder);
    net::call_expect<Ack>(pri_, DedupRequest{*f_id, m.u_id}, params_.call_retries);
    return UploadCheckResp{true, *f_id, std::nullopt};
  }

  // initial-upload path
  auto it = pending_uploads_.find(m.u_id);
  if (it != pending_uploads_.end()) {
    if (it->second.h == m.h)  // retry of a lost reply
      return UploadCheckResp{false, it->second.f_id, it->second.rek};
    throw Error(ErrorCode::FlowInProgress);
  }
  Id16 f_id = mint_file_id();
  store::UserEntry u = user;
  auto resp = net::call_expect<KeyProvisionResp>(pri_, KeyProvisionReq{f_id, m.u_id, u.pk_pre},
                                                 params_.call_retries);
  pending_uploads_[m.u_id] = {f_id, m.h, resp.rek, clock_() + params_.session_timeout_ms};
  return UploadCheckResp{false, f_id, resp.rek};
}

ProtocolMessage PubCsp::on(const StoreData& m) {
  require_sig(m, m.u_id);
  auto it = pending_uploads_.find(m.u_id);
  if (it == pending_uploads_.end()) {
    // retried dp1 after a lost reply: accept iff the record already matches
    for (const Id16& f_id : store_.list_files()) {
      store::FileRecordPub rec = store_.get(f_id);
      if (rec.owners.size() == 1 && rec.owners[0].u_id == m.u_id &&
          rec.owners[0].rek.to_bytes() == m.rek.to_bytes())
        return StoreDataResp{f_id};
    }
    throw Error(ErrorCode::NoSession);
  }
  const PendingUpload& sess = it->second;
  if (!(sess.rek.to_bytes() == m.rek.to_bytes())) throw Error(ErrorCode::ConsistencyFailure);

  store::FileRecordPub rec;
  rec.f_id = sess.f_id;
  rec.h = sess.h;
  rec.owners.push_back({m.u_id, m.rek});
  try {
    store_.create(rec, m.ct.bytes);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DuplicateFileId) throw Error(ErrorCode::DuplicateDetected);
    throw;
  }
  Id16 f_id = sess.f_id;
  pending_uploads_.erase(it);
  return StoreDataResp{f_id};
}

ProtocolMessage PubCsp::on(const DedupFetch& m) {
  require_sig(m, m.u_id);
  store::FileRecordPub rec = store_.get(m.f_id);
  const store::HolderPub* holder = rec.find_holder(m.u_id);
  if (!holder) throw Error(ErrorCode::AccessDenied);
  return DedupGrant{holder->rek, sym::Ciphertext{store_.get_blob(m.f_id)}};
}

ProtocolMessage PubCsp::on(const DownloadReq& m) {
  require_sig(m, m.u_id);
  store::FileRecordPub rec = store_.get(m.f_id);
  const store::HolderPub* holder = rec.find_holder(m.u_id);
  if (!holder) throw Error(ErrorCode::AccessDenied);
  return DownloadResp{sym::Ciphertext{store_.get_blob(m.f_id)}, holder->rek, rec.h};
}

ProtocolMessage PubCsp::on(const DedupKeyIssued& m) {
  try {
    store_.add_holder(m.f_id, {m.u_id, m.rek});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AlreadyHolder) throw;  // retried delivery
  }
  return Ack{};
}

ProtocolMessage PubCsp::on(const PoisonReport& m) {
  require_sig(m, m.u_id);
  poison_reports_.push_back(m);
  return Ack{};
}

ProtocolMessage PubCsp::revoke_and_rekey(const Id16& f_id, const Id16& revoked,
                                         std::uint8_t promote_kind, const Id16& promote_id) {
  if (promote_kind == 1) store_.promote_owner(f_id, promote_id);
  if (promote_kind == 2) store_.set_managed_by_pricsp(f_id);

  std::vector<Id16> remaining = store_.revoke_holder(f_id, revoked);
  if (remaining.empty()) {
    net::call_expect<Ack>(pri_, DeleteNotify{f_id}, params_.call_retries);
    return RevokeResp{true};
  }

  store::FileRecordPub rec = store_.get(f_id);
  net::Channel* owner_ch = nullptr;
  if (!rec.managed_by_pricsp && owner_resolver_) owner_ch = owner_resolver_(rec.owners[0].u_id);
  bool owner_online = owner_ch != nullptr;

  RekeyRequest rekey{f_id, revoked, owner_online, promote_kind, promote_id,
                     owner_online ? sym::Ciphertext{} : sym::Ciphertext{store_.get_blob(f_id)}};
  auto package = net::call_expect<RekeyPackage>(pri_, rekey, params_.call_retries);

  auto rek_for = [&](const Id16& u) -> const pre::FirstLevelCiphertext& {
    for (const auto& e : package.entries)
      if (e.u_id == u) return e.rek;
    throw Error(ErrorCode::Internal, "rekey package missing a holder");
  };
  std::vector<store::HolderPub> owners;
  for (const auto& o : rec.owners) owners.push_back({o.u_id, rek_for(o.u_id)});

  if (owner_online) {
    // owner re-encrypts: needs old K (via old REK) and K' (via new REK)
    OwnerRekeyPackage pkg{f_id, sym::Ciphertext{store_.get_blob(f_id)}, rec.owners[0].rek,
                          rek_for(rec.owners[0].u_id)};
    auto reupload =
        net::call_expect<ReuploadCt>(*owner_ch, ProtocolMessage{pkg}, params_.call_retries);
    if (reupload.u_id != rec.owners[0].u_id || reupload.f_id != f_id)
      throw Error(ErrorCode::ConsistencyFailure);
    store::UserEntry owner = require_user(reupload.u_id);
    if (!sym::verify(owner.pk_sig, signing_bytes(reupload), reupload.sig))
      throw Error(ErrorCode::SignatureInvalid);
    store_.replace_after_rekey(f_id, reupload.ct.bytes, std::move(owners));
  } else {
    if (!package.ct_new) throw Error(ErrorCode::Internal, "delegated rekey without CT'");
    store_.replace_after_rekey(f_id, package.ct_new->bytes, std::move(owners));
  }
  return RevokeResp{false};
}

ProtocolMessage PubCsp::on(const RevokeReq& m) {
  require_sig(m, m.u_id);
  if (auto done = done_revocations_.find({m.f_id, m.u_id}); done != done_revocations_.end())
    return done->second.resp;  // retried request after a lost reply
  store::FileRecordPub rec = store_.get(m.f_id);
  if (!rec.has_holder(m.u_id)) throw Error(ErrorCode::NotAHolder);
  RevokeResp resp;
  if (rec.owners[0].u_id == m.u_id && !rec.managed_by_pricsp) {
    if (rec.owners.size() > 1) throw Error(ErrorCode::NotOwner);  // must name a successor
    store_.revoke_holder(m.f_id, m.u_id);
    net::call_expect<Ack>(pri_, DeleteNotify{m.f_id}, params_.call_retries);
    resp = RevokeResp{true};
  } else {
    resp = std::get<RevokeResp>(revoke_and_rekey(m.f_id, m.u_id, 0, Id16{}));
  }
  done_revocations_[{m.f_id, m.u_id}] = {resp, clock_() + params_.session_timeout_ms};
  return resp;
}

ProtocolMessage PubCsp::on(const RevokeOwnerReq& m) {
  require_sig(m, m.u_id);
  if (auto done = done_revocations_.find({m.f_id, m.u_id}); done != done_revocations_.end())
    return done->second.resp;
  store::FileRecordPub rec = store_.get(m.f_id);
  if (rec.owners.empty() || rec.owners[0].u_id != m.u_id) throw Error(ErrorCode::NotOwner);
  RevokeResp resp;
  if (rec.owners.size() == 1) {
    store_.revoke_holder(m.f_id, m.u_id);
    net::call_expect<Ack>(pri_, DeleteNotify{m.f_id}, params_.call_retries);
    resp = RevokeResp{true};
  } else if (m.successor_kind == SuccessorKind::Holder) {
    if (m.successor == m.u_id || !rec.has_holder(m.successor))
      throw Error(ErrorCode::SuccessorNotHolder);
    resp = std::get<RevokeResp>(revoke_and_rekey(m.f_id, m.u_id, 1, m.successor));
  } else {
    resp = std::get<RevokeResp>(revoke_and_rekey(m.f_id, m.u_id, 2, Id16{}));
  }
  done_revocations_[{m.f_id, m.u_id}] = {resp, clock_() + params_.session_timeout_ms};
  return resp;
}

// ---------- PriCsp ----------

PriCsp::PriCsp(store::PriStore& store, net::Channel& to_pub, const pre::PreKeyPair& keypair,
               Rng& rng, net::ClockFn clock, Params params)
    : store_(store),
      pub_(to_pub),
      keypair_(keypair),
      rng_(rng),
      clock_(std::move(clock)),
      params_(params) {}

store::UserEntry PriCsp::require_user(const Id16& u_id) {
  auto u = store_.load_user(u_id);
  if (!u) throw Error(ErrorCode::NotEnrolled);
  return *u;
}

template <typename T>
void PriCsp::require_sig(const T& msg, const Id16& u_id) {
  store::UserEntry user = require_user(u_id);
  if (!sym::verify(user.pk_sig, signing_bytes(msg), msg.sig))
    throw Error(ErrorCode::SignatureInvalid);
}

ProtocolMessage PriCsp::handle(const ProtocolMessage& req) {
  std::lock_guard lk(mu_);
  purge_expired(pending_provisions_, clock_());
  purge_expired(pending_dedups_, clock_());
  purge_expired(recent_passes_, clock_());
  try {
    return std::visit(
        [this](const auto& m) -> ProtocolMessage {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, EnrollReq> || std::is_same_v<T, KeyProvisionReq> ||
                        std::is_same_v<T, RegisterPossession> || std::is_same_v<T, DedupRequest> ||
                        std::is_same_v<T, PossessionStart> || std::is_same_v<T, DedupResponse> ||
                        std::is_same_v<T, RekeyRequest> || std::is_same_v<T, DeleteNotify>) {
            return on(m);
          } else {
            return ErrorMsg{ErrorCode::UnknownTag};
          }
        },
        req);
  } catch (const Error& e) {
    return error_reply(e);
  } catch (const std::exception&) {
    return ErrorMsg{ErrorCode::Internal};
  }
}

ProtocolMessage PriCsp::on(const EnrollReq& m) {
  if (!sym::verify(m.pk_sig, signing_bytes(m), m.sig)) throw Error(ErrorCode::SignatureInvalid);
  if (auto existing = store_.load_user(m.u_id)) {
    if (existing->pk_sig != m.pk_sig || !(existing->pk_pre == m.pk_pre))
      throw Error(ErrorCode::EnrollMismatch);
    return EnrollResp{};
  }
  store_.save_user({m.u_id, m.pk_sig, m.pk_pre});
  return EnrollResp{};
}

ProtocolMessage PriCsp::on(const KeyProvisionReq& m) {
  store::UserEntry user = require_user(m.u_id);
  if (!(user.pk_pre == m.pk_pre)) throw Error(ErrorCode::EnrollMismatch);

  auto it = pending_provisions_.find(m.f_id);
  if (it != pending_provisions_.end() && it->second.u_id == m.u_id)
    return KeyProvisionResp{it->second.rek};  // retried provisioning stays stable

  // KeyGen2 + En + RG + ReEn with Pri-CSP as owner u0
  auto [m_el, key] = pre::encapsulate(rng_);
  (void)key;  // K is recovered by holders; u0 re-derives it from EK on demand
  pre::SecondLevelCiphertext ek = pre::en(keypair_.pk, m_el, rng_);
  pre::ReEncryptionKey rk = pre::rg(keypair_.sk, user.pk_pre, owner_id(), m.u_id);
  pre::FirstLevelCiphertext rek = pre::re_en(rk, ek);
  pending_provisions_[m.f_id] = {m.u_id, ek, rk, rek, clock_() + params_.session_timeout_ms};
  return KeyProvisionResp{rek};
}

ProtocolMessage PriCsp::on(const RegisterPossession& m) {
  require_sig(m, m.u_id);
  if (m.x.size() != m.hc.size() || m.x.empty()) throw Error(ErrorCode::ConsistencyFailure);

  auto it = pending_provisions_.find(m.f_id);
  if (it == pending_provisions_.end()) {
    // retried dp2: already committed for this uploader
    if (store_.exists(m.f_id)) {
      store::FileRecordPriv rec = store_.get(m.f_id);
      if (rec.holders.size() == 1 && rec.holders[0].u_id == m.u_id)
        return RegisterPossessionResp{};
    }
    throw Error(ErrorCode::NoSession);
  }
  if (it->second.u_id != m.u_id) throw Error(ErrorCode::NoSession);

  std::size_t k = std::min(params_.possession_k, m.x.size());
  auto [xr, hr] = poss::subsample(m.x, m.hc, k, rng_);

  store::FileRecordPriv rec;
  rec.f_id = m.f_id;
  rec.retained_x = std::move(xr);
  rec.retained_hc = std::move(hr);
  rec.ek = it->second.ek;
  rec.holders.push_back({m.u_id, it->second.rk});
  store_.create(rec);
  pending_provisions_.erase(it);
  return RegisterPossessionResp{};
}

ProtocolMessage PriCsp::on(const DedupRequest& m) {
  if (!store_.exists(m.f_id)) throw Error(ErrorCode::UnknownFile);
  if (store_.get(m.f_id).has_holder(m.u_id)) throw Error(ErrorCode::AlreadyHolder);
  pending_dedups_[{m.f_id, m.u_id}] = {false, {}, clock_() + params_.session_timeout_ms};
  return Ack{};
}

ProtocolMessage PriCsp::on(const PossessionStart& m) {
  require_sig(m, m.u_id);
  auto it = pending_dedups_.find({m.f_id, m.u_id});
  if (it == pending_dedups_.end()) throw Error(ErrorCode::NoSession);
  store::FileRecordPriv rec = store_.get(m.f_id);
  it->second.challenge =
      poss::make_challenge(m.f_id, rec.retained_x, rng_, params_.possession_c);
  it->second.challenged = true;  // one outstanding challenge per (F_id, u_id)
  return DedupChallenge{it->second.challenge};
}

ProtocolMessage PriCsp::on(const DedupResponse& m) {
  // locate the session by (f_id, nonce); a consumed nonce never matches again
  auto it = pending_dedups_.end();
  for (auto i = pending_dedups_.begin(); i != pending_dedups_.end(); ++i) {
    if (i->first.first == m.response.f_id && i->second.challenged &&
        i->second.challenge.nonce == m.response.nonce) {
      it = i;
      break;
    }
  }
  if (it == pending_dedups_.end()) {
    // a verified response whose reply was lost may be retried once
    if (recent_passes_.count({m.response.f_id, m.response.nonce}))
      return PossessionResult{m.response.f_id, true};
    throw Error(ErrorCode::NonceMismatch);
  }

  Id16 u_id = it->first.second;
  store::FileRecordPriv rec = store_.get(m.response.f_id);
  bool ok =
      poss::verify_response(rec.retained_x, rec.retained_hc, it->second.challenge, m.response);
  if (!ok) {
    pending_dedups_.erase(it);  // failed: no key material is released
    throw Error(ErrorCode::PossessionFailed);
  }

  store::UserEntry user = require_user(u_id);
  pre::ReEncryptionKey rk = pre::rg(keypair_.sk, user.pk_pre, owner_id(), u_id);
  pre::FirstLevelCiphertext rek = pre::re_en(rk, rec.ek);
  bool added = true;
  try {
    store_.add_holder(m.response.f_id, {u_id, rk});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AlreadyHolder) throw;
    added = false;
  }
  try {
    net::call_expect<Ack>(pub_, DedupKeyIssued{m.response.f_id, u_id, rek},
                          params_.call_retries);
  } catch (...) {
    // keep the holder sets in agreement if Pub-CSP stays unreachable
    if (added) store_.revoke_holder(m.response.f_id, u_id);
    throw;
  }
  recent_passes_[{m.response.f_id, m.response.nonce}] = {clock_() +
                                                         params_.session_timeout_ms};
  pending_dedups_.erase(it);
  return PossessionResult{m.response.f_id, true};
}

ProtocolMessage PriCsp::on(const RekeyRequest& m) {
  Digest fp = sym::hash(encode(ProtocolMessage{m}));
  auto cached = rekey_cache_.find(m.f_id);
  if (cached != rekey_cache_.end() && cached->second.fingerprint == fp)
    return cached->second.package;  // retried request, replay the same package

  if (!store_.exists(m.f_id)) throw Error(ErrorCode::UnknownFile);
  if (m.promote_kind == 1) store_.promote_owner(m.f_id, m.promote_id);
  if (m.promote_kind == 2) store_.set_managed_by_pricsp(m.f_id);
  try {
    store_.revoke_holder(m.f_id, m.revoked);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotAHolder) throw;  // tolerated on re-execution
  }
  if (!store_.exists(m.f_id)) return RekeyPackage{m.f_id, std::nullopt, {}};
  store::FileRecordPriv rec = store_.get(m.f_id);

  // fresh K', EK'; REK' for every remaining holder (rk entries unchanged)
  auto [m_new, key_new] = pre::encapsulate(rng_);
  pre::SecondLevelCiphertext ek_new = pre::en(keypair_.pk, m_new, rng_);

  RekeyPackage package;
  package.f_id = m.f_id;
  for (const auto& h : rec.holders)
    package.entries.push_back({h.u_id, pre::re_en(h.rk, ek_new)});

  if (!m.owner_online) {
    // owner u0 decrypts CT with the current key and re-encrypts under K'
    pre::GtElement m_old = pre::de2(keypair_.sk, rec.ek);
    sym::SymKey key_old{pre::derive_key(m_old)};
    auto plaintext = sym::decrypt(key_old, m.ct);
    if (!plaintext) throw Error(ErrorCode::ConsistencyFailure);
    package.ct_new = sym::encrypt(sym::SymKey{key_new}, *plaintext, rng_);
  }

  store_.replace_after_rekey(m.f_id, ek_new, rec.holders);
  rekey_cache_[m.f_id] = {fp, package};
  return package;
}

ProtocolMessage PriCsp::on(const DeleteNotify& m) {
  if (store_.exists(m.f_id)) store_.remove(m.f_id);
  rekey_cache_.erase(m.f_id);
  return Ack{};
}

}  // namespace dedupvault::protocol
