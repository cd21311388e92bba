#include "dedupvault/sym.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <cstring>
#include <memory>

#include "dedupvault/errors.hpp"

namespace dedupvault::sym {

namespace {
struct CipherCtxFree {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
struct MdCtxFree {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
struct PkeyFree {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxFree>;
using Pkey = std::unique_ptr<EVP_PKEY, PkeyFree>;
}  // namespace

Ciphertext encrypt(const SymKey& key, ByteView plaintext, Rng& rng) {
  Ciphertext out;
  out.bytes.resize(plaintext.size() + kOverhead);
  std::uint8_t* nonce = out.bytes.data();
  std::uint8_t* body = nonce + kNonceBytes;
  std::uint8_t* tag = body + plaintext.size();
  rng.fill(std::span(nonce, kNonceBytes));

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.k.data(), nonce) != 1 ||
      (!plaintext.empty() &&
       EVP_EncryptUpdate(ctx.get(), body, &len, plaintext.data(), (int)plaintext.size()) != 1) ||
      EVP_EncryptFinal_ex(ctx.get(), body + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagBytes, tag) != 1) {
    throw Error(ErrorCode::Internal, "AES-GCM encrypt");
  }
  return out;
}

std::optional<Bytes> decrypt(const SymKey& key, const Ciphertext& ct) {
  if (ct.bytes.size() < kOverhead) return std::nullopt;
  const std::uint8_t* nonce = ct.bytes.data();
  const std::uint8_t* body = nonce + kNonceBytes;
  std::size_t body_len = ct.bytes.size() - kOverhead;
  const std::uint8_t* tag = body + body_len;

  Bytes out(body_len);
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx || EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.k.data(), nonce) != 1)
    throw Error(ErrorCode::Internal, "AES-GCM init");
  if (body_len &&
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, body, (int)body_len) != 1)
    return std::nullopt;
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagBytes, (void*)tag) != 1)
    throw Error(ErrorCode::Internal, "AES-GCM tag");
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) return std::nullopt;
  return out;
}

Digest hash(ByteView data) {
  Digest d;
  SHA256(data.data(), data.size(), d.data());
  return d;
}

SigKeyPair sig_keygen(Rng& rng) {
  SigKeyPair kp;
  rng.fill(kp.sk);
  Pkey pkey(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, kp.sk.data(), kp.sk.size()));
  std::size_t len = kp.pk.size();
  if (!pkey || EVP_PKEY_get_raw_public_key(pkey.get(), kp.pk.data(), &len) != 1 || len != 32)
    throw Error(ErrorCode::Internal, "ed25519 keygen");
  return kp;
}

Signature sign(const SigKeyPair& kp, ByteView msg) {
  Pkey pkey(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, kp.sk.data(), kp.sk.size()));
  MdCtx ctx(EVP_MD_CTX_new());
  Signature sig{};
  std::size_t len = sig.size();
  if (!pkey || !ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1 ||
      EVP_DigestSign(ctx.get(), sig.data(), &len, msg.data(), msg.size()) != 1 || len != 64)
    throw Error(ErrorCode::Internal, "ed25519 sign");
  return sig;
}

bool verify(const VerifyKey& pk, ByteView msg, const Signature& sig) {
  Pkey pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, pk.data(), pk.size()));
  if (!pkey) return false;
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1)
    return false;
  return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), msg.data(), msg.size()) == 1;
}

}  // namespace dedupvault::sym
