#ifndef DEDUPVAULT_BLS_FP12_HPP
#define DEDUPVAULT_BLS_FP12_HPP

#include "dedupvault/bls/fp6.hpp"

namespace dedupvault::bls {

// Fp12 = Fp6[w]/(w^2 - v)
class Fp12 {
 public:
  static constexpr std::size_t kBytes = 576;  // 12 * 48, fixed big-endian tower order

  Fp6 c0, c1;  // c0 + c1*w

  static Fp12 zero() { return {Fp6::zero(), Fp6::zero()}; }
  static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool is_one() const { return *this == one(); }
  bool operator==(const Fp12& o) const { return c0 == o.c0 && c1 == o.c1; }

  Fp12 operator+(const Fp12& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fp12 operator-(const Fp12& o) const { return {c0 - o.c0, c1 - o.c1}; }

  Fp12 operator*(const Fp12& o) const {
    Fp6 t0 = c0 * o.c0;
    Fp6 t1 = c1 * o.c1;
    Fp6 t2 = (c0 + c1) * (o.c0 + o.c1);
    return {t0 + t1.mul_by_v(), t2 - t0 - t1};
  }
  Fp12 square() const {
    // (a+bw)^2 = (a^2 + b^2 v) + 2ab w, computed with one less mul
    Fp6 ab = c0 * c1;
    Fp6 t = (c0 + c1) * (c0 + c1.mul_by_v());
    return {t - ab - ab.mul_by_v(), ab + ab};
  }

  // conjugation over Fp6 (equals the p^6 Frobenius)
  Fp12 conjugate() const { return {c0, c1.neg()}; }

  Fp12 inv() const {
    // 1/(a+bw) = (a - bw)/(a^2 - b^2 v)
    Fp6 t = (c0.square() - c1.square().mul_by_v()).inv();
    return {c0 * t, c1.neg() * t};
  }

  template <std::size_t E>
  Fp12 pow(const Limbs<E>& exp) const {
    std::size_t bits = bit_length(exp);
    if (bits == 0) return one();
    Fp12 table[16];
    table[1] = *this;
    for (int i = 2; i < 16; ++i) table[i] = table[i - 1] * *this;
    Fp12 acc = one();
    bool started = false;
    for (std::size_t ni = (bits + 3) / 4; ni-- > 0;) {
      if (started)
        for (int s = 0; s < 4; ++s) acc = acc.square();
      std::size_t bit = ni * 4;
      limb_t nib = (exp[bit / 64] >> (bit % 64)) & 0xf;
      if (nib) {
        acc = started ? acc * table[nib] : table[nib];
        started = true;
      }
    }
    return started ? acc : one();
  }

  // Canonical serialization: Fp coefficients big-endian, tower order
  // c0.c0.c0, c0.c0.c1, c0.c1.c0, ..., c1.c2.c1 (48 bytes each).
  void to_bytes(std::uint8_t* out) const;
  static std::optional<Fp12> from_bytes(const std::uint8_t* in);

  // p^2 Frobenius (cheap; coefficients lie in Fp)
  Fp12 frobenius_p2() const;
};

}  // namespace dedupvault::bls

#endif
