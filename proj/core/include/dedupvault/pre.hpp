#ifndef DEDUPVAULT_PRE_HPP
#define DEDUPVAULT_PRE_HPP

#include <utility>

#include "dedupvault/bls/pairing.hpp"
#include "dedupvault/bytes.hpp"
#include "dedupvault/errors.hpp"
#include "dedupvault/rng.hpp"

namespace dedupvault::pre {

using GtElement = bls::Fp12;

// Unidirectional single-hop proxy re-encryption (AFGH-style) over BLS12-381.
//
//   keygen:  sk = a,  pk = (g1^a, g2^a)
//   en:      EK  = (pk1^r, m * Z^r)                 second level, owner-decryptable
//   rg:      rk  = pk_B2^(1/a) = g2^(b/a)
//   re_en:   REK = (e(c1, rk), c2) = (Z^(b*r), m * Z^r)   first level, delegatee-only
//   de2:     m = c2 / e(c1, g2)^(1/a)
//   de1:     m = d2 / d1^(1/b)
//
// Keys are wrapped KEM-style: m is a random GT element and the symmetric key
// is HKDF-SHA256(m) with the fixed context string below.

inline constexpr std::string_view kKdfContext = "dedupvault/k/v1";
inline constexpr std::size_t kSymKeyBytes = 16;

struct PublicKey {
  bls::G1 pk1;
  bls::G2 pk2;

  static constexpr std::size_t kBytes = bls::G1::kBytes + bls::G2::kBytes;  // 144
  void to_bytes(std::uint8_t* out) const;
  static std::optional<PublicKey> from_bytes(const std::uint8_t* in);
  bool operator==(const PublicKey& o) const { return pk1 == o.pk1 && pk2 == o.pk2; }
};

struct PreKeyPair {
  bls::Fr sk;
  PublicKey pk;
};

// EK in the protocol
struct SecondLevelCiphertext {
  bls::G1 c1;      // pk1^r
  GtElement c2;    // m * Z^r

  static constexpr std::size_t kBytes = bls::G1::kBytes + bls::Fp12::kBytes;  // 624
  void to_bytes(std::uint8_t* out) const;
  Bytes to_bytes() const;
  static std::optional<SecondLevelCiphertext> from_bytes(const std::uint8_t* in);
  bool operator==(const SecondLevelCiphertext& o) const { return c1 == o.c1 && c2 == o.c2; }
};

// REK in the protocol
struct FirstLevelCiphertext {
  GtElement d1;    // Z^(b*r)
  GtElement d2;    // m * Z^r

  static constexpr std::size_t kBytes = 2 * bls::Fp12::kBytes;  // 1152
  void to_bytes(std::uint8_t* out) const;
  Bytes to_bytes() const;
  static std::optional<FirstLevelCiphertext> from_bytes(const std::uint8_t* in);
  bool operator==(const FirstLevelCiphertext& o) const { return d1 == o.d1 && d2 == o.d2; }
};

struct ReEncryptionKey {
  bls::G2 rk;      // g2^(b/a)
  Id16 delegator{};
  Id16 delegatee{};

  static constexpr std::size_t kBytes = bls::G2::kBytes + 32;  // 128
  void to_bytes(std::uint8_t* out) const;
  static std::optional<ReEncryptionKey> from_bytes(const std::uint8_t* in);
};

bls::Fr random_scalar(Rng& rng);  // uniform nonzero

PreKeyPair keygen1(Rng& rng);
PreKeyPair keygen1_with_secret(const bls::Fr& sk);  // test hook; sk != 0

// KeyGen2: encapsulate a fresh GT element and derive the 128-bit key from it.
std::pair<GtElement, std::array<std::uint8_t, kSymKeyBytes>> encapsulate(Rng& rng);
GtElement encapsulate_with_scalar(const bls::Fr& s);  // test hook, returns m = Z^s
std::array<std::uint8_t, kSymKeyBytes> derive_key(const GtElement& m);

SecondLevelCiphertext en(const PublicKey& pk, const GtElement& m, Rng& rng);
SecondLevelCiphertext en_with_scalar(const PublicKey& pk, const GtElement& m, const bls::Fr& r);

GtElement de2(const bls::Fr& sk, const SecondLevelCiphertext& ek);

ReEncryptionKey rg(const bls::Fr& sk_delegator, const PublicKey& pk_delegatee,
                   const Id16& delegator_id, const Id16& delegatee_id);

// e(pk_A1, rk) == e(g1, pk_B2) — publicly checkable well-formedness
bool rekey_well_formed(const PublicKey& delegator_pk, const PublicKey& delegatee_pk,
                       const ReEncryptionKey& rk);

FirstLevelCiphertext re_en(const ReEncryptionKey& rk, const SecondLevelCiphertext& ek);

// Throws Error(InvalidPoint) when d1 is the identity.
GtElement de1(const bls::Fr& sk, const FirstLevelCiphertext& rek);

}  // namespace dedupvault::pre

#endif
