#include "dedupvault/bls/curve.hpp"

namespace dedupvault::bls {

namespace {

constexpr std::uint8_t kCompressedFlag = 0x80;
constexpr std::uint8_t kInfinityFlag = 0x40;
constexpr std::uint8_t kSignFlag = 0x20;

const Fp& g1_b() {
  static const Fp b = Fp::from_u64(4);
  return b;
}
const Fp2& g2_b() {
  static const Fp2 b{Fp::from_u64(4), Fp::from_u64(4)};
  return b;
}

}  // namespace

G1 G1::generator() {
  static const G1 g = [] {
    Fp x = Fp::from_hex(
        "17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
        "6c55e83ff97a1aeffb3af00adb22c6bb");
    Fp y = Fp::from_hex(
        "08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c04b3ed"
        "d03cc744a2888ae40caa232946c5e7e1");
    return G1{JacobianPoint<Fp>::from_affine(x, y)};
  }();
  return g;
}

G2 G2::generator() {
  static const G2 g = [] {
    Fp2 x{Fp::from_hex(
              "024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d177"
              "0bac0326a805bbefd48056c8c121bdb8"),
          Fp::from_hex(
              "13e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049"
              "334cf11213945d57e5ac7d055d042b7e")};
    Fp2 y{Fp::from_hex(
              "0ce5d527727d6e118cc9cdc6da2e351aadfd9baa8cbdd3a76d429a695160d12c"
              "923ac9cc3baca289e193548608b82801"),
          Fp::from_hex(
              "0606c4a02ea734cc32acd2b02bc28b99cb3e287e85a763af267492ab572e99ab"
              "3f370d275cec1da1aaa9075ff05f79be")};
    return G2{JacobianPoint<Fp2>::from_affine(x, y)};
  }();
  return g;
}

bool G1::is_on_curve() const {
  if (is_infinity()) return true;
  auto [x, y] = p.to_affine();
  return y.square() == x.square() * x + g1_b();
}

bool G2::is_on_curve() const {
  if (is_infinity()) return true;
  auto [x, y] = p.to_affine();
  return y.square() == x.square() * x + g2_b();
}

bool G1::in_subgroup() const { return p.mul(Fr::modulus()).is_infinity(); }
bool G2::in_subgroup() const { return p.mul(Fr::modulus()).is_infinity(); }

void G1::to_bytes(std::uint8_t* out) const {
  if (is_infinity()) {
    std::memset(out, 0, kBytes);
    out[0] = kCompressedFlag | kInfinityFlag;
    return;
  }
  auto [x, y] = p.to_affine();
  x.to_bytes(out);
  out[0] |= kCompressedFlag;
  if (y.lexicographically_largest()) out[0] |= kSignFlag;
}

std::optional<G1> G1::from_bytes(const std::uint8_t* in) {
  std::uint8_t flags = in[0];
  if (!(flags & kCompressedFlag)) return std::nullopt;
  std::uint8_t data[kBytes];
  std::memcpy(data, in, kBytes);
  data[0] &= 0x1f;
  if (flags & kInfinityFlag) {
    if (flags & kSignFlag) return std::nullopt;
    for (std::size_t i = 0; i < kBytes; ++i)
      if (data[i]) return std::nullopt;
    return infinity();
  }
  auto x = Fp::from_bytes(data);
  if (!x) return std::nullopt;
  auto y = (x->square() * *x + g1_b()).sqrt();
  if (!y) return std::nullopt;
  if (y->lexicographically_largest() != bool(flags & kSignFlag)) *y = y->neg();
  G1 pt{JacobianPoint<Fp>::from_affine(*x, *y)};
  if (!pt.in_subgroup()) return std::nullopt;
  return pt;
}

void G2::to_bytes(std::uint8_t* out) const {
  if (is_infinity()) {
    std::memset(out, 0, kBytes);
    out[0] = kCompressedFlag | kInfinityFlag;
    return;
  }
  auto [x, y] = p.to_affine();
  x.c1.to_bytes(out);       // imaginary part first
  x.c0.to_bytes(out + 48);
  out[0] |= kCompressedFlag;
  if (y.lexicographically_largest()) out[0] |= kSignFlag;
}

std::optional<G2> G2::from_bytes(const std::uint8_t* in) {
  std::uint8_t flags = in[0];
  if (!(flags & kCompressedFlag)) return std::nullopt;
  std::uint8_t data[kBytes];
  std::memcpy(data, in, kBytes);
  data[0] &= 0x1f;
  if (flags & kInfinityFlag) {
    if (flags & kSignFlag) return std::nullopt;
    for (std::size_t i = 0; i < kBytes; ++i)
      if (data[i]) return std::nullopt;
    return infinity();
  }
  auto xc1 = Fp::from_bytes(data);
  auto xc0 = Fp::from_bytes(data + 48);
  if (!xc0 || !xc1) return std::nullopt;
  Fp2 x{*xc0, *xc1};
  auto y = (x.square() * x + g2_b()).sqrt();
  if (!y) return std::nullopt;
  if (y->lexicographically_largest() != bool(flags & kSignFlag)) *y = y->neg();
  G2 pt{JacobianPoint<Fp2>::from_affine(x, *y)};
  if (!pt.in_subgroup()) return std::nullopt;
  return pt;
}

}  // namespace dedupvault::bls
