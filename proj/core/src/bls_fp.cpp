#include "dedupvault/bls/fp.hpp"

namespace dedupvault::bls {

namespace {
constexpr std::string_view kModulusHex =
    "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
    "1eabfffeb153ffffb9feffffffffaaab";
constexpr std::string_view kOrderHex =
    "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";
}  // namespace

const MontParams<Fp::kLimbs>& Fp::params() {
  static const MontParams<kLimbs> p =
      MontParams<kLimbs>::make(limbs_from_hex<kLimbs>(kModulusHex), kBytes);
  return p;
}

const MontParams<Fr::kLimbs>& Fr::params() {
  static const MontParams<kLimbs> p =
      MontParams<kLimbs>::make(limbs_from_hex<kLimbs>(kOrderHex), kBytes);
  return p;
}

std::optional<Fp> Fp::sqrt() const {
  // (p+1)/4
  static const Limbs<kLimbs> exp = [] {
    Limbs<kLimbs> e = params().mod;
    Limbs<kLimbs> one{};
    one[0] = 1;
    add_n(e, one);  // p+1 never overflows 384 bits
    shr1_n(e);
    shr1_n(e);
    return e;
  }();
  Fp cand = pow(exp);
  if (cand.square() == *this) return cand;
  return std::nullopt;
}

bool Fp::lexicographically_largest() const {
  static const Limbs<kLimbs> half = [] {
    Limbs<kLimbs> h = params().mod;
    shr1_n(h);  // (p-1)/2 for odd p
    return h;
  }();
  return cmp_n(canonical(), half) > 0;
}

}  // namespace dedupvault::bls
