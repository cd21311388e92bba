#ifndef DEDUPVAULT_BLS_CURVE_HPP
#define DEDUPVAULT_BLS_CURVE_HPP

#include "dedupvault/bls/fp12.hpp"

namespace dedupvault::bls {

// Jacobian point on y^2 = x^3 + b (a = 0). Infinity is z == 0.
template <typename F>
struct JacobianPoint {
  F x, y, z;

  static JacobianPoint infinity() { return {F::zero(), F::one(), F::zero()}; }
  static JacobianPoint from_affine(const F& ax, const F& ay) { return {ax, ay, F::one()}; }

  bool is_infinity() const { return z.is_zero(); }

  JacobianPoint neg() const { return {x, y.neg(), z}; }

  JacobianPoint dbl() const {
    if (is_infinity() || y.is_zero()) return infinity();
    F a = x.square();
    F b = y.square();
    F c = b.square();
    F d = ((x + b).square() - a - c).dbl();
    F e = a.dbl() + a;
    F f = e.square();
    F x3 = f - d.dbl();
    F y3 = e * (d - x3) - c.dbl().dbl().dbl();
    F z3 = (y * z).dbl();
    return {x3, y3, z3};
  }

  JacobianPoint add(const JacobianPoint& o) const {
    if (is_infinity()) return o;
    if (o.is_infinity()) return *this;
    F z1z1 = z.square();
    F z2z2 = o.z.square();
    F u1 = x * z2z2;
    F u2 = o.x * z1z1;
    F s1 = y * o.z * z2z2;
    F s2 = o.y * z * z1z1;
    if (u1 == u2) {
      if (s1 == s2) return dbl();
      return infinity();
    }
    F h = u2 - u1;
    F i = h.dbl().square();
    F j = h * i;
    F rr = (s2 - s1).dbl();
    F v = u1 * i;
    F x3 = rr.square() - j - v.dbl();
    F y3 = rr * (v - x3) - (s1 * j).dbl();
    F z3 = ((z + o.z).square() - z1z1 - z2z2) * h;
    return {x3, y3, z3};
  }

  template <std::size_t E>
  JacobianPoint mul(const Limbs<E>& scalar) const {
    JacobianPoint acc = infinity();
    std::size_t bits = bit_length(scalar);
    for (std::size_t i = bits; i-- > 0;) {
      acc = acc.dbl();
      if (bit_at(scalar, i)) acc = acc.add(*this);
    }
    return acc;
  }

  bool operator==(const JacobianPoint& o) const {
    bool inf_a = is_infinity(), inf_b = o.is_infinity();
    if (inf_a || inf_b) return inf_a == inf_b;
    F z1z1 = z.square();
    F z2z2 = o.z.square();
    if (!(x * z2z2 == o.x * z1z1)) return false;
    return y * (z2z2 * o.z) == o.y * (z1z1 * z);
  }

  // (x, y) in affine coordinates; must not be infinity.
  std::pair<F, F> to_affine() const {
    F zinv = z.inv();
    F zinv2 = zinv.square();
    return {x * zinv2, y * zinv2 * zinv};
  }
};

// G1: subgroup of order r on E(Fp): y^2 = x^3 + 4
class G1 {
 public:
  static constexpr std::size_t kBytes = 48;  // compressed

  JacobianPoint<Fp> p;

  static G1 generator();
  static G1 infinity() { return {JacobianPoint<Fp>::infinity()}; }

  bool is_infinity() const { return p.is_infinity(); }
  bool operator==(const G1& o) const { return p == o.p; }
  G1 add(const G1& o) const { return {p.add(o.p)}; }
  G1 dbl() const { return {p.dbl()}; }
  G1 neg() const { return {p.neg()}; }
  G1 mul(const Fr& k) const { return {p.mul(k.canonical())}; }

  bool is_on_curve() const;
  bool in_subgroup() const;  // r * P == infinity

  // ZCash-style compressed encoding (flags in the top bits of byte 0).
  void to_bytes(std::uint8_t* out) const;
  static std::optional<G1> from_bytes(const std::uint8_t* in);  // validates curve + subgroup
};

// G2: subgroup of order r on the M-twist E'(Fp2): y^2 = x^3 + 4(u+1)
class G2 {
 public:
  static constexpr std::size_t kBytes = 96;

  JacobianPoint<Fp2> p;

  static G2 generator();
  static G2 infinity() { return {JacobianPoint<Fp2>::infinity()}; }

  bool is_infinity() const { return p.is_infinity(); }
  bool operator==(const G2& o) const { return p == o.p; }
  G2 add(const G2& o) const { return {p.add(o.p)}; }
  G2 neg() const { return {p.neg()}; }
  G2 mul(const Fr& k) const { return {p.mul(k.canonical())}; }

  bool is_on_curve() const;
  bool in_subgroup() const;

  void to_bytes(std::uint8_t* out) const;
  static std::optional<G2> from_bytes(const std::uint8_t* in);
};

}  // namespace dedupvault::bls

#endif
