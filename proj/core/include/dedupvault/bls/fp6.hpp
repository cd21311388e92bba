#ifndef DEDUPVAULT_BLS_FP6_HPP
#define DEDUPVAULT_BLS_FP6_HPP

#include "dedupvault/bls/fp2.hpp"

namespace dedupvault::bls {

// Fp6 = Fp2[v]/(v^3 - xi), xi = u + 1
class Fp6 {
 public:
  Fp2 c0, c1, c2;  // c0 + c1*v + c2*v^2

  static Fp6 zero() { return {Fp2::zero(), Fp2::zero(), Fp2::zero()}; }
  static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
  bool operator==(const Fp6& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }

  Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
  Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
  Fp6 neg() const { return {c0.neg(), c1.neg(), c2.neg()}; }

  Fp6 operator*(const Fp6& o) const {
    Fp2 t0 = c0 * o.c0;
    Fp2 t1 = c1 * o.c1;
    Fp2 t2 = c2 * o.c2;
    Fp2 r0 = t0 + ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_xi();
    Fp2 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_xi();
    Fp2 r2 = (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1;
    return {r0, r1, r2};
  }
  Fp6 square() const { return *this * *this; }

  // multiply by v: (c0,c1,c2) -> (xi*c2, c0, c1)
  Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }
  Fp6 mul_fp2(const Fp2& s) const { return {c0 * s, c1 * s, c2 * s}; }

  Fp6 inv() const {
    Fp2 a0 = c0.square() - (c1 * c2).mul_by_xi();
    Fp2 a1 = c2.square().mul_by_xi() - c0 * c1;
    Fp2 a2 = c1.square() - c0 * c2;
    Fp2 t = (c0 * a0) + (c1 * a2).mul_by_xi() + (c2 * a1).mul_by_xi();
    Fp2 tinv = t.inv();
    return {a0 * tinv, a1 * tinv, a2 * tinv};
  }
};

}  // namespace dedupvault::bls

#endif
