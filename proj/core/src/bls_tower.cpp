#include "dedupvault/bls/fp12.hpp"

namespace dedupvault::bls {

std::optional<Fp2> Fp2::sqrt() const {
  auto verified = [this](const Fp2& cand) -> std::optional<Fp2> {
    if (cand.square() == *this) return cand;
    return std::nullopt;
  };
  if (c1.is_zero()) {
    if (auto s = c0.sqrt()) return verified({*s, Fp::zero()});
    // -1 is a non-residue (p = 3 mod 4), so -c0 must be square: sqrt = sqrt(-c0)*u
    if (auto s = c0.neg().sqrt()) return verified({Fp::zero(), *s});
    return std::nullopt;
  }
  // complex method: norm = a^2 + b^2, x^2 = (a +- sqrt(norm))/2, y = b/(2x)
  Fp norm = c0.square() + c1.square();
  auto d = norm.sqrt();
  if (!d) return std::nullopt;
  static const Fp inv2 = Fp::from_u64(2).inv();
  for (bool minus : {false, true}) {
    Fp t = (minus ? c0 - *d : c0 + *d) * inv2;
    auto x = t.sqrt();
    if (!x || x->is_zero()) continue;
    Fp y = c1 * x->dbl().inv();
    if (auto r = verified({*x, y})) return r;
  }
  return std::nullopt;
}

void Fp12::to_bytes(std::uint8_t* out) const {
  const Fp* coeffs[12] = {&c0.c0.c0, &c0.c0.c1, &c0.c1.c0, &c0.c1.c1,
                          &c0.c2.c0, &c0.c2.c1, &c1.c0.c0, &c1.c0.c1,
                          &c1.c1.c0, &c1.c1.c1, &c1.c2.c0, &c1.c2.c1};
  for (int i = 0; i < 12; ++i) coeffs[i]->to_bytes(out + i * Fp::kBytes);
}

std::optional<Fp12> Fp12::from_bytes(const std::uint8_t* in) {
  Fp12 r;
  Fp* coeffs[12] = {&r.c0.c0.c0, &r.c0.c0.c1, &r.c0.c1.c0, &r.c0.c1.c1,
                    &r.c0.c2.c0, &r.c0.c2.c1, &r.c1.c0.c0, &r.c1.c0.c1,
                    &r.c1.c1.c0, &r.c1.c1.c1, &r.c1.c2.c0, &r.c1.c2.c1};
  for (int i = 0; i < 12; ++i) {
    auto f = Fp::from_bytes(in + i * Fp::kBytes);
    if (!f) return std::nullopt;
    *coeffs[i] = *f;
  }
  return r;
}

Fp12 Fp12::frobenius_p2() const {
  // gamma_i = xi^(i*(p^2-1)/6), all in Fp. Basis over Fp2 in powers of w:
  // w^0:c0.c0  w^1:c1.c0  w^2:c0.c1  w^3:c1.c1  w^4:c0.c2  w^5:c1.c2
  static const std::array<Fp, 6> gamma = [] {
    Limbs<12> e = mul_wide(Fp::modulus(), Fp::modulus());
    Limbs<12> one{};
    one[0] = 1;
    sub_n(e, one);
    div_small(e, 6);
    Fp2 g1 = Fp2::xi().pow(e);
    // lies in Fp for this curve
    if (!g1.c1.is_zero()) throw std::logic_error("frobenius p^2 coefficient not in Fp");
    std::array<Fp, 6> g;
    g[0] = Fp::one();
    for (int i = 1; i < 6; ++i) g[i] = g[i - 1] * g1.c0;
    return g;
  }();
  Fp12 r = *this;
  r.c1.c0 = r.c1.c0.mul_fp(gamma[1]);
  r.c0.c1 = r.c0.c1.mul_fp(gamma[2]);
  r.c1.c1 = r.c1.c1.mul_fp(gamma[3]);
  r.c0.c2 = r.c0.c2.mul_fp(gamma[4]);
  r.c1.c2 = r.c1.c2.mul_fp(gamma[5]);
  return r;
}

}  // namespace dedupvault::bls
