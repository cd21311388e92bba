#ifndef DEDUPVAULT_BLS_FP_HPP
#define DEDUPVAULT_BLS_FP_HPP

#include <optional>

#include "dedupvault/bls/limbs.hpp"

namespace dedupvault::bls {

// Base field of BLS12-381: 381-bit prime, 6 limbs, Montgomery form.
class Fp {
 public:
  static constexpr std::size_t kLimbs = 6;
  static constexpr std::size_t kBytes = 48;

  Limbs<kLimbs> v{};  // Montgomery representation

  static const MontParams<kLimbs>& params();
  static const Limbs<kLimbs>& modulus() { return params().mod; }

  static Fp zero() { return Fp{}; }
  static Fp one() {
    Fp r;
    r.v = params().one;
    return r;
  }
  static Fp from_u64(limb_t x) {
    Fp r;
    r.v[0] = x;
    r.v = mont_mul(r.v, params().r2, params());
    return r;
  }
  // Parses a canonical (non-Montgomery) hex constant; must be < p.
  static Fp from_hex(std::string_view hex) {
    Fp r;
    r.v = limbs_from_hex<kLimbs>(hex);
    if (cmp_n(r.v, params().mod) >= 0) throw std::invalid_argument("Fp constant >= modulus");
    r.v = mont_mul(r.v, params().r2, params());
    return r;
  }
  // Big-endian 48 bytes; rejects values >= p.
  static std::optional<Fp> from_bytes(const std::uint8_t* in) {
    Fp r;
    r.v = limbs_from_bytes_be<kLimbs>(in, kBytes);
    if (cmp_n(r.v, params().mod) >= 0) return std::nullopt;
    r.v = mont_mul(r.v, params().r2, params());
    return r;
  }
  void to_bytes(std::uint8_t* out) const {
    limbs_to_bytes_be(canonical(), out, kBytes);
  }
  // Leaves Montgomery form.
  Limbs<kLimbs> canonical() const {
    Limbs<kLimbs> one_exp{};
    one_exp[0] = 1;
    return mont_mul(v, one_exp, params());
  }

  bool is_zero() const { return is_zero_n(v); }
  bool operator==(const Fp& o) const { return v == o.v; }

  Fp operator+(const Fp& o) const {
    Fp r;
    r.v = mont_add(v, o.v, params());
    return r;
  }
  Fp operator-(const Fp& o) const {
    Fp r;
    r.v = mont_sub(v, o.v, params());
    return r;
  }
  Fp operator*(const Fp& o) const {
    Fp r;
    r.v = mont_mul(v, o.v, params());
    return r;
  }
  Fp neg() const { return zero() - *this; }
  Fp square() const { return *this * *this; }
  Fp dbl() const { return *this + *this; }

  template <std::size_t E>
  Fp pow(const Limbs<E>& exp) const {
    Fp r;
    r.v = mont_pow(v, exp, params());
    return r;
  }
  // Fermat inversion; inv(0) == 0.
  Fp inv() const { return pow(params().mod_minus_2); }

  // sqrt for p = 3 mod 4: a^((p+1)/4), verified. nullopt for non-residues.
  std::optional<Fp> sqrt() const;

  // true when the canonical value is > (p-1)/2 (compressed-point sign bit).
  bool lexicographically_largest() const;
};

// Scalar field (group order r), 255 bits, 4 limbs.
class Fr {
 public:
  static constexpr std::size_t kLimbs = 4;
  static constexpr std::size_t kBytes = 32;

  Limbs<kLimbs> v{};

  static const MontParams<kLimbs>& params();
  static const Limbs<kLimbs>& modulus() { return params().mod; }

  static Fr zero() { return Fr{}; }
  static Fr one() {
    Fr r;
    r.v = params().one;
    return r;
  }
  static Fr from_u64(limb_t x) {
    Fr r;
    r.v[0] = x;
    r.v = mont_mul(r.v, params().r2, params());
    return r;
  }
  static Fr from_hex(std::string_view hex) {
    Fr r;
    r.v = limbs_from_hex<kLimbs>(hex);
    if (cmp_n(r.v, params().mod) >= 0) throw std::invalid_argument("Fr constant >= modulus");
    r.v = mont_mul(r.v, params().r2, params());
    return r;
  }
  static std::optional<Fr> from_bytes(const std::uint8_t* in) {
    Fr r;
    r.v = limbs_from_bytes_be<kLimbs>(in, kBytes);
    if (cmp_n(r.v, params().mod) >= 0) return std::nullopt;
    r.v = mont_mul(r.v, params().r2, params());
    return r;
  }
  void to_bytes(std::uint8_t* out) const {
    Limbs<kLimbs> one_exp{};
    one_exp[0] = 1;
    limbs_to_bytes_be(mont_mul(v, one_exp, params()), out, kBytes);
  }
  // Plain little-endian limbs (for use as an exponent).
  Limbs<kLimbs> canonical() const {
    Limbs<kLimbs> one_exp{};
    one_exp[0] = 1;
    return mont_mul(v, one_exp, params());
  }

  bool is_zero() const { return is_zero_n(v); }
  bool operator==(const Fr& o) const { return v == o.v; }

  Fr operator+(const Fr& o) const {
    Fr r;
    r.v = mont_add(v, o.v, params());
    return r;
  }
  Fr operator-(const Fr& o) const {
    Fr r;
    r.v = mont_sub(v, o.v, params());
    return r;
  }
  Fr operator*(const Fr& o) const {
    Fr r;
    r.v = mont_mul(v, o.v, params());
    return r;
  }
  template <std::size_t E>
  Fr pow(const Limbs<E>& exp) const {
    Fr r;
    r.v = mont_pow(v, exp, params());
    return r;
  }
  Fr inv() const { return pow(params().mod_minus_2); }
};

}  // namespace dedupvault::bls

#endif
