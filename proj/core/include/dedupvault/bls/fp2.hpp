#ifndef DEDUPVAULT_BLS_FP2_HPP
#define DEDUPVAULT_BLS_FP2_HPP

#include "dedupvault/bls/fp.hpp"

namespace dedupvault::bls {

// Fp2 = Fp[u]/(u^2 + 1)
class Fp2 {
 public:
  Fp c0, c1;  // c0 + c1*u

  static Fp2 zero() { return {Fp::zero(), Fp::zero()}; }
  static Fp2 one() { return {Fp::one(), Fp::zero()}; }
  // xi = u + 1, the Fp6 non-residue
  static Fp2 xi() { return {Fp::one(), Fp::one()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool operator==(const Fp2& o) const { return c0 == o.c0 && c1 == o.c1; }

  Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
  Fp2 neg() const { return {c0.neg(), c1.neg()}; }
  Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

  Fp2 operator*(const Fp2& o) const {
    // Karatsuba: (a0+a1u)(b0+b1u) = (a0b0 - a1b1) + ((a0+a1)(b0+b1) - a0b0 - a1b1)u
    Fp t0 = c0 * o.c0;
    Fp t1 = c1 * o.c1;
    Fp t2 = (c0 + c1) * (o.c0 + o.c1);
    return {t0 - t1, t2 - t0 - t1};
  }
  Fp2 square() const {
    // (a0+a1u)^2 = (a0+a1)(a0-a1) + 2a0a1 u
    Fp t0 = (c0 + c1) * (c0 - c1);
    Fp t1 = (c0 * c1).dbl();
    return {t0, t1};
  }
  Fp2 mul_fp(const Fp& s) const { return {c0 * s, c1 * s}; }

  // multiply by xi = 1 + u: (a0 - a1) + (a0 + a1)u
  Fp2 mul_by_xi() const { return {c0 - c1, c0 + c1}; }

  Fp2 conjugate() const { return {c0, c1.neg()}; }

  Fp2 inv() const {
    // 1/(a0+a1u) = conj / (a0^2 + a1^2)
    Fp norm = c0.square() + c1.square();
    Fp ninv = norm.inv();
    return {c0 * ninv, c1.neg() * ninv};
  }

  template <std::size_t E>
  Fp2 pow(const Limbs<E>& exp) const {
    Fp2 acc = one();
    Fp2 base = *this;
    std::size_t bits = bit_length(exp);
    for (std::size_t i = bits; i-- > 0;) {
      acc = acc.square();
      if (bit_at(exp, i)) acc = acc * base;
    }
    return acc;
  }

  // Complex square root for p = 3 mod 4; verified, nullopt for non-residues.
  std::optional<Fp2> sqrt() const;

  // Sign convention for compressed G2 points: (c1, c0) lexicographic.
  bool lexicographically_largest() const {
    if (!c1.is_zero()) return c1.lexicographically_largest();
    return c0.lexicographically_largest();
  }
};

}  // namespace dedupvault::bls

#endif
