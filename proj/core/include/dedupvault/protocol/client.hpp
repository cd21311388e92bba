#ifndef DEDUPVAULT_PROTOCOL_CLIENT_HPP
#define DEDUPVAULT_PROTOCOL_CLIENT_HPP

#include "dedupvault/protocol/actors.hpp"

namespace dedupvault::protocol {

// Data-user identity: PRE key pair plus signature key pair.
struct Identity {
  Id16 u_id{};
  sym::SigKeyPair sig;
  bls::Fr sk_pre;
  pre::PublicKey pk_pre;

  static Identity generate(const Id16& u_id, Rng& rng);
  Bytes encode() const;  // includes the secrets; for the local key store only
  static Identity decode(ByteView data);
};

// Synchronous data-user client, one flow at a time. Also acts as the owner's
// rekey agent: when attached to a transport it answers OwnerRekeyPackage.
class DuClient : public net::Actor {
 public:
  DuClient(Identity identity, net::Channel& to_pub, net::Channel& to_pri, Rng& rng,
           Params params = {});

  const Identity& identity() const { return identity_; }
  const Id16& u_id() const { return identity_.u_id; }

  void enroll();

  struct UploadResult {
    Id16 f_id{};
    bool deduplicated = false;
  };
  // Initial upload or deduplication, decided by the duplication check.
  UploadResult upload(ByteView f);

  // Fetches, decrypts and verifies H(F); reports a poisoned blob before
  // throwing Error(ConsistencyFailure).
  Bytes download(const Id16& f_id);

  bool revoke(const Id16& f_id);  // holder revocation; true when record deleted
  bool revoke_owner(const Id16& f_id, std::optional<Id16> successor);  // nullopt -> Pri-CSP

  // rekey agent: handles OwnerRekeyPackage in owner-online revocations
  wire::ProtocolMessage handle(const wire::ProtocolMessage& req) override;

 private:
  template <typename T>
  T fill_sig(T msg) const;
  sym::SymKey unwrap_key(const pre::FirstLevelCiphertext& rek) const;
  Bytes decrypt_checked(const Id16& f_id, const sym::Ciphertext& ct,
                        const pre::FirstLevelCiphertext& rek, const Digest& expect_h);
  UploadResult run_dedup(const Id16& f_id, ByteView f);

  Identity identity_;
  net::Channel& pub_;
  net::Channel& pri_;
  Rng& rng_;
  Params params_;
};

}  // namespace dedupvault::protocol

#endif
