#include "dedupvault/pre.hpp"

#include <openssl/evp.h>
#include <openssl/kdf.h>

#include <cstring>

namespace dedupvault::pre {

using namespace bls;

void PublicKey::to_bytes(std::uint8_t* out) const {
  pk1.to_bytes(out);
  pk2.to_bytes(out + G1::kBytes);
}

std::optional<PublicKey> PublicKey::from_bytes(const std::uint8_t* in) {
  auto p1 = G1::from_bytes(in);
  auto p2 = G2::from_bytes(in + G1::kBytes);
  if (!p1 || !p2 || p1->is_infinity() || p2->is_infinity()) return std::nullopt;
  return PublicKey{*p1, *p2};
}

void SecondLevelCiphertext::to_bytes(std::uint8_t* out) const {
  c1.to_bytes(out);
  c2.to_bytes(out + G1::kBytes);
}

Bytes SecondLevelCiphertext::to_bytes() const {
  Bytes b(kBytes);
  to_bytes(b.data());
  return b;
}

std::optional<SecondLevelCiphertext> SecondLevelCiphertext::from_bytes(const std::uint8_t* in) {
  auto c1 = G1::from_bytes(in);
  auto c2 = Fp12::from_bytes(in + G1::kBytes);
  if (!c1 || !c2 || c1->is_infinity()) return std::nullopt;
  return SecondLevelCiphertext{*c1, *c2};
}

void FirstLevelCiphertext::to_bytes(std::uint8_t* out) const {
  d1.to_bytes(out);
  d2.to_bytes(out + Fp12::kBytes);
}

Bytes FirstLevelCiphertext::to_bytes() const {
  Bytes b(kBytes);
  to_bytes(b.data());
  return b;
}

std::optional<FirstLevelCiphertext> FirstLevelCiphertext::from_bytes(const std::uint8_t* in) {
  auto d1 = Fp12::from_bytes(in);
  auto d2 = Fp12::from_bytes(in + Fp12::kBytes);
  if (!d1 || !d2) return std::nullopt;
  return FirstLevelCiphertext{*d1, *d2};
}

void ReEncryptionKey::to_bytes(std::uint8_t* out) const {
  rk.to_bytes(out);
  std::memcpy(out + G2::kBytes, delegator.data(), 16);
  std::memcpy(out + G2::kBytes + 16, delegatee.data(), 16);
}

std::optional<ReEncryptionKey> ReEncryptionKey::from_bytes(const std::uint8_t* in) {
  auto rk = G2::from_bytes(in);
  if (!rk || rk->is_infinity()) return std::nullopt;
  ReEncryptionKey r;
  r.rk = *rk;
  std::memcpy(r.delegator.data(), in + G2::kBytes, 16);
  std::memcpy(r.delegatee.data(), in + G2::kBytes + 16, 16);
  return r;
}

Fr random_scalar(Rng& rng) {
  std::uint8_t buf[Fr::kBytes];
  for (;;) {
    rng.fill(buf);
    buf[0] &= 0x7f;  // r < 2^255
    auto s = Fr::from_bytes(buf);
    if (s && !s->is_zero()) return *s;
  }
}

PreKeyPair keygen1(Rng& rng) { return keygen1_with_secret(random_scalar(rng)); }

PreKeyPair keygen1_with_secret(const Fr& sk) {
  if (sk.is_zero()) throw Error(ErrorCode::Internal, "zero secret key");
  return {sk, {G1::generator().mul(sk), G2::generator().mul(sk)}};
}

std::array<std::uint8_t, kSymKeyBytes> derive_key(const GtElement& m) {
  std::uint8_t ikm[Fp12::kBytes];
  m.to_bytes(ikm);
  std::array<std::uint8_t, kSymKeyBytes> key{};
  static const std::uint8_t zero_salt[32] = {0};

  EVP_PKEY_CTX* ctx = EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr);
  if (!ctx) throw Error(ErrorCode::Internal, "HKDF ctx");
  std::size_t outlen = key.size();
  bool ok = EVP_PKEY_derive_init(ctx) > 0 &&
            EVP_PKEY_CTX_set_hkdf_md(ctx, EVP_sha256()) > 0 &&
            EVP_PKEY_CTX_set1_hkdf_salt(ctx, zero_salt, sizeof zero_salt) > 0 &&
            EVP_PKEY_CTX_set1_hkdf_key(ctx, ikm, sizeof ikm) > 0 &&
            EVP_PKEY_CTX_add1_hkdf_info(ctx, (const std::uint8_t*)kKdfContext.data(),
                                        (int)kKdfContext.size()) > 0 &&
            EVP_PKEY_derive(ctx, key.data(), &outlen) > 0 && outlen == key.size();
  EVP_PKEY_CTX_free(ctx);
  if (!ok) throw Error(ErrorCode::Internal, "HKDF derive");
  return key;
}

std::pair<GtElement, std::array<std::uint8_t, kSymKeyBytes>> encapsulate(Rng& rng) {
  GtElement m = encapsulate_with_scalar(random_scalar(rng));
  return {m, derive_key(m)};
}

GtElement encapsulate_with_scalar(const Fr& s) {
  return gt_generator().pow(s.canonical());
}

SecondLevelCiphertext en(const PublicKey& pk, const GtElement& m, Rng& rng) {
  return en_with_scalar(pk, m, random_scalar(rng));
}

SecondLevelCiphertext en_with_scalar(const PublicKey& pk, const GtElement& m, const Fr& r) {
  if (r.is_zero()) throw Error(ErrorCode::Internal, "zero encryption scalar");
  return {pk.pk1.mul(r), m * gt_generator().pow(r.canonical())};
}

GtElement de2(const Fr& sk, const SecondLevelCiphertext& ek) {
  // m = c2 / e(c1, g2)^(1/sk)
  Fp12 t = pairing(ek.c1, G2::generator()).pow(sk.inv().canonical());
  return ek.c2 * t.inv();
}

ReEncryptionKey rg(const Fr& sk_delegator, const PublicKey& pk_delegatee,
                   const Id16& delegator_id, const Id16& delegatee_id) {
  ReEncryptionKey out;
  out.rk = pk_delegatee.pk2.mul(sk_delegator.inv());
  out.delegator = delegator_id;
  out.delegatee = delegatee_id;
  return out;
}

bool rekey_well_formed(const PublicKey& delegator_pk, const PublicKey& delegatee_pk,
                       const ReEncryptionKey& rk) {
  return pairing(delegator_pk.pk1, rk.rk) == pairing(G1::generator(), delegatee_pk.pk2);
}

FirstLevelCiphertext re_en(const ReEncryptionKey& rk, const SecondLevelCiphertext& ek) {
  return {pairing(ek.c1, rk.rk), ek.c2};
}

GtElement de1(const Fr& sk, const FirstLevelCiphertext& rek) {
  if (rek.d1.is_one()) throw Error(ErrorCode::InvalidPoint, "degenerate first-level ciphertext");
  return rek.d2 * rek.d1.pow(sk.inv().canonical()).inv();
}

}  // namespace dedupvault::pre
