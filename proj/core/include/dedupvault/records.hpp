#ifndef DEDUPVAULT_RECORDS_HPP
#define DEDUPVAULT_RECORDS_HPP

#include <vector>

#include "dedupvault/possession.hpp"
#include "dedupvault/pre.hpp"
#include "dedupvault/sym.hpp"

namespace dedupvault::store {

// P1 entry: (u_id, REK_u)
struct HolderPub {
  Id16 u_id{};
  pre::FirstLevelCiphertext rek;
};

// P1 = {F_id, CT, H(F), (u_id, REK)...}; the CT blob lives next to the record,
// referenced by generation so record+blob commit atomically (record rename is
// the commit point).
struct FileRecordPub {
  Id16 f_id{};
  Digest h{};
  std::uint64_t blob_gen = 0;
  bool managed_by_pricsp = false;
  std::vector<HolderPub> owners;  // first entry is the current owner

  bool has_holder(const Id16& u) const;
  const HolderPub* find_holder(const Id16& u) const;

  Bytes encode() const;
  static FileRecordPub decode(ByteView data);  // throws Error(MalformedFrame)
};

// P2 entry: (u_id, rk_{u0->u})
struct HolderPriv {
  Id16 u_id{};
  pre::ReEncryptionKey rk;
};

// P2 = {F_id, X', HC'(F), EK, (u_id, rk)...}
struct FileRecordPriv {
  Id16 f_id{};
  poss::IndexSet retained_x;
  poss::HashCodeSet retained_hc;
  pre::SecondLevelCiphertext ek;
  bool managed_by_pricsp = false;
  std::vector<HolderPriv> holders;

  bool has_holder(const Id16& u) const;
  const HolderPriv* find_holder(const Id16& u) const;

  Bytes encode() const;
  static FileRecordPriv decode(ByteView data);
};

// enrollment registry entry, persisted by both CSPs
struct UserEntry {
  Id16 u_id{};
  sym::VerifyKey pk_sig{};
  pre::PublicKey pk_pre;

  Bytes encode() const;
  static UserEntry decode(ByteView data);
};

}  // namespace dedupvault::store

#endif
