#ifndef DEDUPVAULT_PROTOCOL_ACTORS_HPP
#define DEDUPVAULT_PROTOCOL_ACTORS_HPP

#include <functional>
#include <map>
#include <mutex>

#include "dedupvault/net/transport.hpp"
#include "dedupvault/store.hpp"

namespace dedupvault::protocol {

struct Params {
  std::size_t possession_n = poss::kDefaultIndexCount;
  std::size_t possession_k = poss::kDefaultRetained;
  std::size_t possession_c = poss::kDefaultChallengeSize;
  std::uint64_t session_timeout_ms = 30000;
  int call_retries = 3;
};

// Resolves the owner's rekey channel when that user is online; null otherwise.
using OwnerResolver = std::function<net::Channel*(const Id16&)>;

// Public cloud: stores CT blobs and the P1 ownership list, fronts all
// data-user flows, coordinates with Pri-CSP.
class PubCsp : public net::Actor {
 public:
  PubCsp(store::PubStore& store, net::Channel& to_pri, OwnerResolver owner_resolver,
         Rng& rng, net::ClockFn clock, Params params = {});

  wire::ProtocolMessage handle(const wire::ProtocolMessage& req) override;

  const std::vector<wire::PoisonReport>& poison_reports() const { return poison_reports_; }

 private:
  wire::ProtocolMessage on(const wire::EnrollReq& m);
  wire::ProtocolMessage on(const wire::UploadCheck& m);
  wire::ProtocolMessage on(const wire::StoreData& m);
  wire::ProtocolMessage on(const wire::DedupFetch& m);
  wire::ProtocolMessage on(const wire::DownloadReq& m);
  wire::ProtocolMessage on(const wire::RevokeReq& m);
  wire::ProtocolMessage on(const wire::RevokeOwnerReq& m);
  wire::ProtocolMessage on(const wire::DedupKeyIssued& m);
  wire::ProtocolMessage on(const wire::PoisonReport& m);

  store::UserEntry require_user(const Id16& u_id);
  template <typename T>
  void require_sig(const T& msg, const Id16& u_id);
  Id16 mint_file_id();
  // shared tail of both revocation flows: remove + rekey remaining holders
  wire::ProtocolMessage revoke_and_rekey(const Id16& f_id, const Id16& revoked,
                                         std::uint8_t promote_kind, const Id16& promote_id);

  struct PendingUpload {
    Id16 f_id{};
    Digest h{};
    pre::FirstLevelCiphertext rek;
    std::uint64_t expires_ms = 0;
  };
  struct CompletedRevocation {
    wire::RevokeResp resp;
    std::uint64_t expires_ms = 0;
  };

  store::PubStore& store_;
  net::Channel& pri_;
  OwnerResolver owner_resolver_;
  Rng& rng_;
  net::ClockFn clock_;
  Params params_;
  std::mutex mu_;
  std::map<Id16, PendingUpload> pending_uploads_;  // keyed by u_id
  std::map<std::pair<Id16, Id16>, CompletedRevocation> done_revocations_;  // (f_id, u_id)
  std::vector<wire::PoisonReport> poison_reports_;
};

// Private cloud: owner u0 and proxy. Holds the PRE master key pair, the P2
// list with possession material, issues and verifies challenges, rekeys.
class PriCsp : public net::Actor {
 public:
  PriCsp(store::PriStore& store, net::Channel& to_pub, const pre::PreKeyPair& keypair,
         Rng& rng, net::ClockFn clock, Params params = {});

  wire::ProtocolMessage handle(const wire::ProtocolMessage& req) override;

  const pre::PublicKey& public_key() const { return keypair_.pk; }
  static constexpr Id16 owner_id() { return Id16{}; }  // u0 is the all-zero id

 private:
  wire::ProtocolMessage on(const wire::EnrollReq& m);
  wire::ProtocolMessage on(const wire::KeyProvisionReq& m);
  wire::ProtocolMessage on(const wire::RegisterPossession& m);
  wire::ProtocolMessage on(const wire::DedupRequest& m);
  wire::ProtocolMessage on(const wire::PossessionStart& m);
  wire::ProtocolMessage on(const wire::DedupResponse& m);
  wire::ProtocolMessage on(const wire::RekeyRequest& m);
  wire::ProtocolMessage on(const wire::DeleteNotify& m);

  store::UserEntry require_user(const Id16& u_id);
  template <typename T>
  void require_sig(const T& msg, const Id16& u_id);

  struct PendingProvision {
    Id16 u_id{};
    pre::SecondLevelCiphertext ek;
    pre::ReEncryptionKey rk;
    pre::FirstLevelCiphertext rek;  // cached so retried provisioning is stable
    std::uint64_t expires_ms = 0;
  };
  struct PendingDedup {
    bool challenged = false;
    poss::Challenge challenge;
    std::uint64_t expires_ms = 0;
  };
  struct CachedRekey {
    Digest fingerprint{};
    wire::RekeyPackage package;
  };
  struct RecentPass {
    std::uint64_t expires_ms = 0;
  };

  store::PriStore& store_;
  net::Channel& pub_;
  pre::PreKeyPair keypair_;
  Rng& rng_;
  net::ClockFn clock_;
  Params params_;
  std::mutex mu_;
  std::map<Id16, PendingProvision> pending_provisions_;           // keyed by f_id
  std::map<std::pair<Id16, Id16>, PendingDedup> pending_dedups_;  // (f_id, u_id)
  std::map<Id16, CachedRekey> rekey_cache_;                       // keyed by f_id
  std::map<std::pair<Id16, std::array<std::uint8_t, 16>>, RecentPass>
      recent_passes_;  // (f_id, nonce) of verified responses, for retried replies
};

}  // namespace dedupvault::protocol

#endif
