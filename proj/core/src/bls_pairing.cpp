#include "dedupvault/bls/pairing.hpp"

#include <stdexcept>

namespace dedupvault::bls {

namespace {

// |x| for BLS parameter x = -0xd201000000010000
constexpr limb_t kAbsX = 0xd201000000010000ULL;

// (p^4 - p^2 + 1) / r, 1268 bits. A unit test re-derives this from p and r.
const Limbs<20>& hard_exponent() {
  static const Limbs<20> e = limbs_from_hex<20>(
      "f686b3d807d01c0bd38c3195c899ed3cde88eeb996ca394506632528d6a9a2f2"
      "30063cf081517f68f7764c28b6f8ae5a72bce8d63cb9f827eca0ba621315b207"
      "6995003fc77a17988f8761bdc51dc2378b9039096d1b767f17fcbde783765915"
      "c97f36c6f18212ed0b283ed237db421d160aeb6a1e79983774940996754c8c71"
      "a2629b0dea236905ce937335d5b68fa9912aae208ccf1e516c3f438e3ba79");
  return e;
}

Fp12 embed_fp(const Fp& a) {
  Fp12 r = Fp12::zero();
  r.c0.c0.c0 = a;
  return r;
}

Fp12 embed_fp2(const Fp2& a) {
  Fp12 r = Fp12::zero();
  r.c0.c0 = a;
  return r;
}

struct Untwist {
  Fp12 winv2, winv3;  // w^-2 and w^-3
};

const Untwist& untwist_consts() {
  static const Untwist u = [] {
    Fp12 w2 = Fp12::zero();
    w2.c0.c1 = Fp2::one();  // w^2 = v
    Fp12 w3 = Fp12::zero();
    w3.c1.c1 = Fp2::one();  // w^3 = v*w
    return Untwist{w2.inv(), w3.inv()};
  }();
  return u;
}

struct AffineFp12 {
  Fp12 x, y;
};

// Miller loop over E(Fp12) in affine coordinates. ~68 Fp12 inversions total,
// fine at this scale.
Fp12 miller_loop(const AffineFp12& p, const AffineFp12& q) {
  Fp12 f = Fp12::one();
  AffineFp12 t = q;
  auto line_and_step = [&](const AffineFp12& a, bool tangent) {
    Fp12 lambda;
    if (tangent) {
      // 3x^2 / 2y
      Fp12 x2 = t.x.square();
      lambda = (x2 + x2 + x2) * (t.y + t.y).inv();
    } else {
      if (t.x == a.x) throw std::logic_error("pairing: degenerate addition step");
      lambda = (a.y - t.y) * (a.x - t.x).inv();
    }
    Fp12 line = p.y - t.y - lambda * (p.x - t.x);
    Fp12 x3 = lambda.square() - t.x - (tangent ? t.x : a.x);
    Fp12 y3 = lambda * (t.x - x3) - t.y;
    t = {x3, y3};
    return line;
  };
  for (int i = 62; i >= 0; --i) {
    f = f.square() * line_and_step(t, true);
    if ((kAbsX >> i) & 1) f = f * line_and_step(q, false);
  }
  // x < 0: conjugate (the p^6 Frobenius)
  return f.conjugate();
}

Fp12 final_exponentiation(const Fp12& f) {
  // easy part: f^((p^6 - 1)(p^2 + 1))
  Fp12 t = f.conjugate() * f.inv();
  t = t.frobenius_p2() * t;
  // hard part: exact (p^4 - p^2 + 1)/r
  return t.pow(hard_exponent());
}

}  // namespace

Fp12 pairing(const G1& p, const G2& q) {
  if (p.is_infinity() || q.is_infinity()) return Fp12::one();
  auto [px, py] = p.p.to_affine();
  auto [qx, qy] = q.p.to_affine();
  const Untwist& u = untwist_consts();
  AffineFp12 pe{embed_fp(px), embed_fp(py)};
  AffineFp12 qe{embed_fp2(qx) * u.winv2, embed_fp2(qy) * u.winv3};
  return final_exponentiation(miller_loop(pe, qe));
}

const Fp12& gt_generator() {
  static const Fp12 z = pairing(G1::generator(), G2::generator());
  return z;
}

}  // namespace dedupvault::bls
