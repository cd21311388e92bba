#ifndef DEDUPVAULT_SYM_HPP
#define DEDUPVAULT_SYM_HPP

#include <optional>

#include "dedupvault/bytes.hpp"
#include "dedupvault/rng.hpp"

namespace dedupvault::sym {

// AES-128-GCM framing: 12-byte nonce || body || 16-byte tag.
inline constexpr std::size_t kNonceBytes = 12;
inline constexpr std::size_t kTagBytes = 16;
inline constexpr std::size_t kOverhead = kNonceBytes + kTagBytes;  // 28

struct SymKey {
  std::array<std::uint8_t, 16> k{};
  bool operator==(const SymKey&) const = default;
};

struct Ciphertext {
  Bytes bytes;  // nonce || body || tag

  std::size_t size() const { return bytes.size(); }
  bool operator==(const Ciphertext&) const = default;
};

Ciphertext encrypt(const SymKey& key, ByteView plaintext, Rng& rng);
// nullopt on authentication failure (wrong key or tampered/truncated data)
std::optional<Bytes> decrypt(const SymKey& key, const Ciphertext& ct);

Digest hash(ByteView data);  // SHA-256

// Ed25519
using Signature = std::array<std::uint8_t, 64>;
using VerifyKey = std::array<std::uint8_t, 32>;

struct SigKeyPair {
  std::array<std::uint8_t, 32> sk{};  // seed
  VerifyKey pk{};
};

SigKeyPair sig_keygen(Rng& rng);
Signature sign(const SigKeyPair& kp, ByteView msg);
bool verify(const VerifyKey& pk, ByteView msg, const Signature& sig);

}  // namespace dedupvault::sym

#endif
