#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "dedupvault/net/memnet.hpp"
#include "dedupvault/protocol/client.hpp"

using namespace dedupvault;
using namespace dedupvault::protocol;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("dvproto-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Id16 make_uid(std::uint8_t n) {
  Id16 id{};
  id[0] = 0xD0;
  id[15] = n;
  return id;
}

std::string actor_key(const Id16& u) { return "du:" + to_hex(ByteView(u.data(), u.size())); }

struct User {
  Identity ident;
  std::unique_ptr<TestRng> rng;
  std::unique_ptr<net::SimNet::Link> to_pub, to_pri;
  std::unique_ptr<DuClient> client;
};

struct Deployment {
  TempDir pub_dir, pri_dir;
  net::SimNet net;
  store::PubStore pub_store{pub_dir.path / "pub"};
  store::PriStore pri_store{pri_dir.path / "pri"};
  TestRng pub_rng, pri_rng, key_rng;
  std::unique_ptr<net::SimNet::Link> pub_to_pri = net.link("pub", "pri");
  std::unique_ptr<net::SimNet::Link> pri_to_pub = net.link("pri", "pub");
  std::map<Id16, std::unique_ptr<net::SimNet::Link>> owner_links;
  pre::PreKeyPair pri_keys;
  Params params;
  std::unique_ptr<PriCsp> pri;
  std::unique_ptr<PubCsp> pub;
  std::map<Id16, User> users;

  explicit Deployment(std::uint64_t seed = 7, Params p = {})
      : pub_rng(seed ^ 0x1), pri_rng(seed ^ 0x2), key_rng(seed ^ 0x3), params(p) {
    pri_keys = pre::keygen1(key_rng);
    pri = std::make_unique<PriCsp>(pri_store, *pri_to_pub, pri_keys, pri_rng, net.clock(),
                                   params);
    pub = std::make_unique<PubCsp>(
        pub_store, *pub_to_pri,
        [this](const Id16& u) -> net::Channel* {
          if (!net.attached(actor_key(u))) return nullptr;
          auto& slot = owner_links[u];
          if (!slot) slot = net.link("pub", actor_key(u));
          return slot.get();
        },
        pub_rng, net.clock(), params);
    net.attach("pub", pub.get());
    net.attach("pri", pri.get());
  }

  User& add_user(std::uint8_t n, bool enroll = true) {
    Id16 uid = make_uid(n);
    User u;
    u.rng = std::make_unique<TestRng>(0x1000 + n);
    u.ident = Identity::generate(uid, *u.rng);
    u.to_pub = net.link(actor_key(uid), "pub");
    u.to_pri = net.link(actor_key(uid), "pri");
    u.client = std::make_unique<DuClient>(u.ident, *u.to_pub, *u.to_pri, *u.rng, params);
    auto [it, _] = users.emplace(uid, std::move(u));
    if (enroll) it->second.client->enroll();
    return it->second;
  }

  void set_owner_online(const Id16& u) { net.attach(actor_key(u), users.at(u).client.get()); }
  void set_owner_offline(const Id16& u) { net.detach(actor_key(u)); }

  void check_consistent() {
    // single-copy: one blob per distinct stored hash; holder sets agree
    auto files = pub_store.list_files();
    CHECK(pub_store.blob_count() == files.size());
    std::set<Digest> hashes;
    for (const auto& f : files) hashes.insert(pub_store.get(f).h);
    CHECK(hashes.size() == files.size());

    auto pri_files = pri_store.list_files();
    CHECK(pri_files.size() == files.size());
    for (const auto& f : files) {
      auto p1 = pub_store.get(f);
      auto p2 = pri_store.get(f);
      std::set<Id16> s1, s2;
      for (const auto& o : p1.owners) s1.insert(o.u_id);
      for (const auto& h : p2.holders) s2.insert(h.u_id);
      CHECK(s1 == s2);
    }
  }
};

Bytes make_file(std::uint64_t seed, std::size_t size) {
  TestRng rng(seed);
  return rng.bytes(size);
}

bool contains(ByteView hay, ByteView needle) {
  if (needle.empty() || hay.size() < needle.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

}  // namespace

TEST_CASE("initial upload produces the two ownership records") {
  Deployment d;
  User& u1 = d.add_user(1);
  Bytes f = make_file(100, 25000);

  auto result = u1.client->upload(f);
  CHECK(!result.deduplicated);

  // P1 = {F_id, CT, H(F), (u1, REK_u1)}
  store::FileRecordPub p1 = d.pub_store.get(result.f_id);
  CHECK(p1.h == sym::hash(f));
  REQUIRE(p1.owners.size() == 1);
  CHECK(p1.owners[0].u_id == u1.ident.u_id);

  // P2 = {F_id, X', HC'(F), EK, (u1, rk)}
  store::FileRecordPriv p2 = d.pri_store.get(result.f_id);
  CHECK(p2.retained_x.size() == d.params.possession_k);
  CHECK(p2.retained_hc.size() == d.params.possession_k);
  REQUIRE(p2.holders.size() == 1);
  CHECK(p2.holders[0].u_id == u1.ident.u_id);

  // EK decrypts (for u0) to the same key that decrypts CT
  pre::GtElement m = pre::de2(d.pri_keys.sk, p2.ek);
  sym::SymKey k{pre::derive_key(m)};
  auto pt = sym::decrypt(k, sym::Ciphertext{d.pub_store.get_blob(result.f_id)});
  REQUIRE(pt.has_value());
  CHECK(*pt == f);

  // the stored rk is well-formed for u1
  CHECK(pre::rekey_well_formed(d.pri_keys.pk, u1.ident.pk_pre, p2.holders[0].rk));

  // owner reads back their own file
  CHECK(u1.client->download(result.f_id) == f);
  d.check_consistent();
}

TEST_CASE("deduplicated upload stores one blob for two holders") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  Bytes f = make_file(101, 30000);

  auto r1 = u1.client->upload(f);
  auto r2 = u2.client->upload(f);
  CHECK(!r1.deduplicated);
  CHECK(r2.deduplicated);
  CHECK(r1.f_id == r2.f_id);

  CHECK(d.pub_store.blob_count() == 1);  // stored only once
  store::FileRecordPub p1 = d.pub_store.get(r1.f_id);
  REQUIRE(p1.owners.size() == 2);
  CHECK(p1.owners[0].u_id == u1.ident.u_id);  // uploader stays owner
  CHECK(p1.owners[1].u_id == u2.ident.u_id);

  CHECK(u1.client->download(r1.f_id) == f);
  CHECK(u2.client->download(r1.f_id) == f);

  // re-upload by an existing holder is rejected
  CHECK_THROWS_AS(u2.client->upload(f), Error);
  try {
    u2.client->upload(f);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlreadyHolder);
  }
  d.check_consistent();
}

TEST_CASE("subsequent-upload request carries only C_H + C_ID core bytes") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  Bytes f = make_file(102, 20000);
  u1.client->upload(f);

  d.net.clear_transcript();
  u2.client->upload(f);
  std::size_t core_from_du = 0;
  for (const auto& e : d.net.transcript()) {
    if (e.from == actor_key(u2.ident.u_id) && e.to == "pub" &&
        e.tag == wire::Tag::UploadCheck)
      core_from_du += wire::measure_core(wire::decode(e.frame));
  }
  CHECK(core_from_du == 48);  // 32 (hash) + 16 (user id)
}

TEST_CASE("download access control") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  Bytes f = make_file(103, 22000);
  auto r = u1.client->upload(f);

  // own unlisted id is refused
  try {
    u2.client->download(r.f_id);
    FAIL("expected AccessDenied");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AccessDenied);
  }

  // replayed request of a listed user returns that user's REK, which the
  // attacker cannot decrypt: privacy holds without plaintext leaking
  wire::DownloadReq req{r.f_id, u1.ident.u_id, {}};
  req.sig = sym::sign(u1.ident.sig, wire::signing_bytes(req));
  auto reply = d.net.inject("adversary", "pub", req);
  auto* resp = std::get_if<wire::DownloadResp>(&reply);
  REQUIRE(resp != nullptr);
  pre::GtElement wrong_m = pre::de1(u2.ident.sk_pre, resp->rek);
  sym::SymKey wrong_key{pre::derive_key(wrong_m)};
  CHECK(!sym::decrypt(wrong_key, resp->ct).has_value());  // AuthFailure
}

TEST_CASE("holder revocation, delegated mode") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  Bytes f = make_file(104, 26000);
  auto r = u1.client->upload(f);
  u2.client->upload(f);

  Bytes ct_before = d.pub_store.get_blob(r.f_id);
  store::FileRecordPub p1_before = d.pub_store.get(r.f_id);
  store::FileRecordPriv p2_before = d.pri_store.get(r.f_id);
  pre::FirstLevelCiphertext u2_old_rek = p1_before.find_holder(u2.ident.u_id)->rek;

  CHECK(!u2.client->revoke(r.f_id));  // record survives with u1

  // P1' = {F_id, CT', H(F), (u1, REK')}; P2' = {F_id, X', HC', EK', (u1, rk)}
  store::FileRecordPub p1 = d.pub_store.get(r.f_id);
  store::FileRecordPriv p2 = d.pri_store.get(r.f_id);
  REQUIRE(p1.owners.size() == 1);
  CHECK(p1.owners[0].u_id == u1.ident.u_id);
  REQUIRE(p2.holders.size() == 1);
  CHECK(p2.holders[0].u_id == u1.ident.u_id);
  CHECK(p1.h == p1_before.h);                             // H(F) unchanged
  CHECK(p2.retained_x == p2_before.retained_x);           // X' unchanged
  CHECK(p2.retained_hc == p2_before.retained_hc);         // HC' unchanged
  CHECK(d.pub_store.get_blob(r.f_id) != ct_before);       // CT' fresh
  CHECK(!(p2.ek == p2_before.ek));                        // EK' fresh
  CHECK(!(p1.owners[0].rek.to_bytes() ==
          p1_before.owners[0].rek.to_bytes()));           // REK' fresh

  // (a) revoked user's download is refused by the list check
  try {
    u2.client->download(r.f_id);
    FAIL("expected AccessDenied");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AccessDenied);
  }

  // (b) replaying the stale REK against CT' fails AEAD authentication
  pre::GtElement stale_m = pre::de1(u2.ident.sk_pre, u2_old_rek);
  sym::SymKey stale_key{pre::derive_key(stale_m)};
  CHECK(!sym::decrypt(stale_key, sym::Ciphertext{d.pub_store.get_blob(r.f_id)}).has_value());

  // (c) the remaining holder still decrypts
  CHECK(u1.client->download(r.f_id) == f);
  d.check_consistent();
}

TEST_CASE("holder revocation, owner-online mode") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  Bytes f = make_file(105, 26000);
  auto r = u1.client->upload(f);
  u2.client->upload(f);
  d.set_owner_online(u1.ident.u_id);

  d.net.clear_transcript();
  CHECK(!u2.client->revoke(r.f_id));

  // the owner performed the re-encryption
  bool owner_pkg = false, reupload = false;
  for (const auto& e : d.net.transcript()) {
    if (e.tag == wire::Tag::OwnerRekeyPackage) owner_pkg = true;
    if (e.tag == wire::Tag::ReuploadCt) reupload = true;
  }
  CHECK(owner_pkg);
  CHECK(reupload);

  CHECK(u1.client->download(r.f_id) == f);
  try {
    u2.client->download(r.f_id);
    FAIL("expected AccessDenied");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AccessDenied);
  }
  d.check_consistent();
}

TEST_CASE("owner revocation naming a successor") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  User& u3 = d.add_user(3);
  Bytes f = make_file(106, 24000);
  auto r = u1.client->upload(f);
  u2.client->upload(f);
  u3.client->upload(f);

  CHECK(!u1.client->revoke_owner(r.f_id, u2.ident.u_id));

  store::FileRecordPub p1 = d.pub_store.get(r.f_id);
  REQUIRE(p1.owners.size() == 2);
  CHECK(p1.owners[0].u_id == u2.ident.u_id);  // promoted to owner
  CHECK(!p1.has_holder(u1.ident.u_id));
  CHECK(d.pri_store.get(r.f_id).holders[0].u_id == u2.ident.u_id);

  try {
    u1.client->download(r.f_id);
    FAIL("expected AccessDenied");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AccessDenied);
  }
  CHECK(u2.client->download(r.f_id) == f);
  CHECK(u3.client->download(r.f_id) == f);

  // successor must be an existing holder
  auto r2 = u2.client->upload(make_file(107, 20000));
  CHECK_THROWS_AS(u2.client->revoke_owner(r2.f_id, u3.ident.u_id), Error);
  d.check_consistent();
}

TEST_CASE("owner revocation handing management to Pri-CSP") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  Bytes f = make_file(108, 21000);
  auto r = u1.client->upload(f);
  u2.client->upload(f);

  CHECK(!u1.client->revoke_owner(r.f_id, std::nullopt));
  store::FileRecordPub p1 = d.pub_store.get(r.f_id);
  CHECK(p1.managed_by_pricsp);
  REQUIRE(p1.owners.size() == 1);
  CHECK(p1.owners[0].u_id == u2.ident.u_id);
  CHECK(u2.client->download(r.f_id) == f);

  // subsequent revocations stay delegated even with the head online
  d.set_owner_online(u2.ident.u_id);
  d.net.clear_transcript();
  CHECK(u2.client->revoke(r.f_id));  // sole holder: record deleted
  for (const auto& e : d.net.transcript()) CHECK(e.tag != wire::Tag::OwnerRekeyPackage);
  CHECK(!d.pub_store.exists(r.f_id));
  CHECK(!d.pri_store.exists(r.f_id));
  CHECK(d.pub_store.blob_count() == 0);
}

TEST_CASE("sole-owner revocation deletes the record") {
  Deployment d;
  User& u1 = d.add_user(1);
  Bytes f = make_file(109, 20000);
  auto r = u1.client->upload(f);
  CHECK(u1.client->revoke(r.f_id));
  CHECK(!d.pub_store.exists(r.f_id));
  CHECK(!d.pri_store.exists(r.f_id));
  CHECK(d.pub_store.blob_count() == 0);
}

TEST_CASE("owner with co-holders must use the owner flow") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  Bytes f = make_file(110, 20000);
  auto r = u1.client->upload(f);
  u2.client->upload(f);
  try {
    u1.client->revoke(r.f_id);
    FAIL("expected NotOwner");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOwner);
  }
}

TEST_CASE("poison attack is detected by the next honest dedup and download") {
  Deployment d;
  User& adv = d.add_user(66);
  User& u3 = d.add_user(3);
  Bytes f = make_file(111, 23000);
  Digest h = sym::hash(f);

  // adversary possesses F but uploads a mismatched ciphertext CT_B
  wire::UploadCheck dp{h, {}, adv.ident.u_id, adv.ident.sig.pk};
  dp.sig = sym::sign(adv.ident.sig, wire::signing_bytes(dp));
  auto check = d.net.inject(actor_key(adv.ident.u_id), "pub", dp);
  auto& resp = std::get<wire::UploadCheckResp>(check);
  REQUIRE(!resp.duplicate);
  sym::SymKey key{pre::derive_key(pre::de1(adv.ident.sk_pre, *resp.rek))};
  Bytes other = make_file(112, 23000);
  sym::Ciphertext ct_b = sym::encrypt(key, other, *adv.rng);  // poisoned blob
  wire::StoreData dp1{adv.ident.u_id, *resp.rek, ct_b, {}};
  dp1.sig = sym::sign(adv.ident.sig, wire::signing_bytes(dp1));
  auto sd = d.net.inject(actor_key(adv.ident.u_id), "pub", dp1);
  REQUIRE(std::holds_alternative<wire::StoreDataResp>(sd));
  // dp2 built over the real F so honest dedups pass the challenge
  poss::IndexSet x = poss::generate_index_set(*adv.rng, d.params.possession_n);
  wire::RegisterPossession dp2{resp.f_id, adv.ident.u_id, x,
                               poss::compute_hash_code_set(f, x), {}};
  dp2.sig = sym::sign(adv.ident.sig, wire::signing_bytes(dp2));
  auto rp = d.net.inject(actor_key(adv.ident.u_id), "pri", dp2);
  REQUIRE(std::holds_alternative<wire::RegisterPossessionResp>(rp));

  // honest uploader of F detects the inconsistency and reports it
  try {
    u3.client->upload(f);
    FAIL("expected ConsistencyFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConsistencyFailure);
  }
  REQUIRE(d.pub->poison_reports().size() == 1);
  CHECK(d.pub->poison_reports()[0].f_id == resp.f_id);

  // the download path detects it too (u3 became a holder before checking)
  try {
    u3.client->download(resp.f_id);
    FAIL("expected ConsistencyFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConsistencyFailure);
  }
  CHECK(d.pub->poison_reports().size() == 2);
}

TEST_CASE("collusion: dishonest Pub-CSP plus non-possessing user yields nothing") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& col = d.add_user(77);
  Bytes f = make_file(113, 25000);
  auto r = u1.client->upload(f);
  Digest h = sym::hash(f);

  // dishonest Pub-CSP hands over the ciphertext and asks Pri-CSP to dedup
  Bytes leaked_ct = d.pub_store.get_blob(r.f_id);
  auto ack = d.net.inject("pub", "pri", wire::DedupRequest{r.f_id, col.ident.u_id});
  REQUIRE(std::holds_alternative<wire::Ack>(ack));

  // the colluder only knows H(F); the ownership check fails
  wire::PossessionStart start{r.f_id, col.ident.u_id, {}};
  start.sig = sym::sign(col.ident.sig, wire::signing_bytes(start));
  auto ch_reply = d.net.inject(actor_key(col.ident.u_id), "pri", start);
  auto& ch = std::get<wire::DedupChallenge>(ch_reply);

  wire::DedupResponse fake;
  fake.response.f_id = r.f_id;
  fake.response.nonce = ch.challenge.nonce;
  for (std::size_t i = 0; i < ch.challenge.indices.size(); ++i) {
    Bytes guess(h.begin(), h.end());
    guess.push_back((std::uint8_t)i);
    fake.response.digests.push_back(sym::hash(guess));
  }
  auto verdict = d.net.inject(actor_key(col.ident.u_id), "pri", fake);
  auto* err = std::get_if<wire::ErrorMsg>(&verdict);
  REQUIRE(err != nullptr);
  CHECK(err->code == ErrorCode::PossessionFailed);

  // no key material was released; the leaked ciphertext stays opaque
  CHECK(!d.pri_store.get(r.f_id).has_holder(col.ident.u_id));
  CHECK(!d.pub_store.get(r.f_id).has_holder(col.ident.u_id));
  sym::SymKey guess_key{pre::derive_key(bls::gt_generator())};
  CHECK(!sym::decrypt(guess_key, sym::Ciphertext{leaked_ct}).has_value());
}

TEST_CASE("duplicate challenge response is rejected via nonce single-use") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  Bytes f = make_file(114, 20000);
  auto r = u1.client->upload(f);

  auto ack = d.net.inject("pub", "pri", wire::DedupRequest{r.f_id, u2.ident.u_id});
  REQUIRE(std::holds_alternative<wire::Ack>(ack));
  wire::PossessionStart start{r.f_id, u2.ident.u_id, {}};
  start.sig = sym::sign(u2.ident.sig, wire::signing_bytes(start));
  auto ch_reply = d.net.inject(actor_key(u2.ident.u_id), "pri", start);
  auto& ch = std::get<wire::DedupChallenge>(ch_reply);

  wire::DedupResponse resp{poss::respond(ch.challenge, f)};
  auto first = d.net.inject(actor_key(u2.ident.u_id), "pri", resp);
  REQUIRE(std::holds_alternative<wire::PossessionResult>(first));

  auto second = d.net.inject(actor_key(u2.ident.u_id), "pri", resp);
  auto* err = std::get_if<wire::ErrorMsg>(&second);
  REQUIRE(err != nullptr);
  CHECK(err->code == ErrorCode::NonceMismatch);
}

TEST_CASE("sessions expire and release no state") {
  Params p;
  p.session_timeout_ms = 1000;
  Deployment d(7, p);
  User& u1 = d.add_user(1);
  Bytes f = make_file(115, 20000);

  // start an initial upload, then let the session lapse
  wire::UploadCheck dp{sym::hash(f), {}, u1.ident.u_id, u1.ident.sig.pk};
  dp.sig = sym::sign(u1.ident.sig, wire::signing_bytes(dp));
  auto check = d.net.inject(actor_key(u1.ident.u_id), "pub", dp);
  auto& resp = std::get<wire::UploadCheckResp>(check);
  d.net.advance_ms(2000);

  sym::SymKey key{pre::derive_key(pre::de1(u1.ident.sk_pre, *resp.rek))};
  wire::StoreData dp1{u1.ident.u_id, *resp.rek, sym::encrypt(key, f, *u1.rng), {}};
  dp1.sig = sym::sign(u1.ident.sig, wire::signing_bytes(dp1));
  auto sd = d.net.inject(actor_key(u1.ident.u_id), "pub", dp1);
  auto* err = std::get_if<wire::ErrorMsg>(&sd);
  REQUIRE(err != nullptr);
  CHECK(err->code == ErrorCode::NoSession);
  CHECK(d.pub_store.list_files().empty());
  CHECK(d.pri_store.list_files().empty());
}

TEST_CASE("signature required before any state change") {
  Deployment d;
  User& u1 = d.add_user(1);
  Bytes f = make_file(116, 20000);

  wire::UploadCheck dp{sym::hash(f), {}, u1.ident.u_id, u1.ident.sig.pk};
  dp.sig.fill(0x5c);  // bogus
  auto reply = d.net.inject(actor_key(u1.ident.u_id), "pub", dp);
  auto* err = std::get_if<wire::ErrorMsg>(&reply);
  REQUIRE(err != nullptr);
  CHECK(err->code == ErrorCode::SignatureInvalid);
  CHECK(d.pub_store.list_files().empty());

  // unenrolled user
  Identity ghost = Identity::generate(make_uid(99), *u1.rng);
  wire::UploadCheck dp2{sym::hash(f), {}, ghost.u_id, ghost.sig.pk};
  dp2.sig = sym::sign(ghost.sig, wire::signing_bytes(dp2));
  auto reply2 = d.net.inject("ghost", "pub", dp2);
  auto* err2 = std::get_if<wire::ErrorMsg>(&reply2);
  REQUIRE(err2 != nullptr);
  CHECK(err2->code == ErrorCode::NotEnrolled);
}

TEST_CASE("no flow transmits keys, KEM elements, secrets or plaintext") {
  Deployment d;
  User& u1 = d.add_user(1);
  User& u2 = d.add_user(2);
  Bytes f = make_file(117, 20000);

  auto r = u1.client->upload(f);
  u2.client->upload(f);
  u1.client->download(r.f_id);
  u2.client->revoke(r.f_id);

  // recover the secrets that must never appear on the wire
  store::FileRecordPriv p2 = d.pri_store.get(r.f_id);
  pre::GtElement m = pre::de2(d.pri_keys.sk, p2.ek);
  Bytes m_bytes(bls::Fp12::kBytes);
  m.to_bytes(m_bytes.data());
  Bytes k_bytes(pre::derive_key(m).begin(), pre::derive_key(m).end());
  Bytes sk1(32), sk0(32);
  u1.ident.sk_pre.to_bytes(sk1.data());
  d.pri_keys.sk.to_bytes(sk0.data());

  for (const auto& e : d.net.transcript()) {
    CHECK(!contains(e.frame, k_bytes));
    CHECK(!contains(e.frame, m_bytes));
    CHECK(!contains(e.frame, sk1));
    CHECK(!contains(e.frame, sk0));
    // spot-check plaintext windows
    CHECK(!contains(e.frame, ByteView(f).subspan(0, 64)));
    CHECK(!contains(e.frame, ByteView(f).subspan(f.size() / 2, 64)));
  }
}

TEST_CASE("fixed seed gives identical transcript bytes") {
  auto run = [](std::uint64_t seed) {
    Deployment d(seed);
    User& u1 = d.add_user(1);
    User& u2 = d.add_user(2);
    Bytes f = make_file(118, 20000);
    auto r = u1.client->upload(f);
    u2.client->upload(f);
    u1.client->download(r.f_id);
    Bytes all;
    for (const auto& e : d.net.transcript())
      all.insert(all.end(), e.frame.begin(), e.frame.end());
    return all;
  };
  CHECK(run(42) == run(42));
  CHECK(run(42) != run(43));
}

TEST_CASE("message drops: flows retry and converge, stores stay intact") {
  using wire::Tag;
  struct Case {
    Tag tag;
    int phase;  // 0: dedup upload, 1: revocation
  };
  const Case cases[] = {
      {Tag::KeyProvisionResp, 0}, {Tag::DedupRequest, 0},  {Tag::DedupKeyIssued, 0},
      {Tag::StoreDataResp, 0},    {Tag::DedupChallenge, 0}, {Tag::PossessionResult, 0},
      {Tag::RekeyPackage, 1},     {Tag::RekeyRequest, 1},   {Tag::RevokeResp, 1},
      {Tag::DeleteNotify, 1},
  };
  for (const Case& c : cases) {
    CAPTURE((int)c.tag);
    Deployment d;
    User& u1 = d.add_user(1);
    User& u2 = d.add_user(2);
    Bytes f = make_file(119, 20000);

    if (c.phase == 0) d.net.drop_next(c.tag);
    auto r = u1.client->upload(f);
    u2.client->upload(f);
    CHECK(d.pub_store.blob_count() == 1);
    d.check_consistent();

    if (c.phase == 1) d.net.drop_next(c.tag);
    u2.client->revoke(r.f_id);
    d.check_consistent();
    CHECK(u1.client->download(r.f_id) == f);

    u1.client->revoke(r.f_id);
    CHECK(d.pub_store.blob_count() == 0);
    CHECK(d.pri_store.list_files().empty());
  }
}

TEST_CASE("deduplication at a small population") {
  Deployment d;
  Bytes f = make_file(120, 40000);
  std::vector<Id16> ids;
  Id16 f_id{};
  for (int i = 1; i <= 5; ++i) {
    User& u = d.add_user((std::uint8_t)i);
    auto r = u.client->upload(f);
    f_id = r.f_id;
    CHECK(r.deduplicated == (i > 1));
    ids.push_back(u.ident.u_id);
  }
  CHECK(d.pub_store.blob_count() == 1);
  store::FileRecordPub p1 = d.pub_store.get(f_id);
  CHECK(p1.owners.size() == 5);
  for (int i = 1; i <= 5; ++i) CHECK(d.users.at(make_uid((std::uint8_t)i)).client->download(f_id) == f);
  d.check_consistent();
}
