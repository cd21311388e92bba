#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dedupvault/bls/pairing.hpp"
#include "dedupvault/bytes.hpp"
#include "dedupvault/rng.hpp"

using namespace dedupvault;
using namespace dedupvault::bls;

namespace {

Fp random_fp(Rng& rng) {
  std::uint8_t buf[48];
  for (;;) {
    rng.fill(buf);
    buf[0] &= 0x1f;  // 381-bit field in 384 bits
    if (auto f = Fp::from_bytes(buf)) return *f;
  }
}

Fr random_fr(Rng& rng) {
  std::uint8_t buf[32];
  for (;;) {
    rng.fill(buf);
    buf[0] &= 0x7f;
    if (auto f = Fr::from_bytes(buf)) return *f;
  }
}

Fp2 random_fp2(Rng& rng) { return {random_fp(rng), random_fp(rng)}; }
Fp6 random_fp6(Rng& rng) { return {random_fp2(rng), random_fp2(rng), random_fp2(rng)}; }
Fp12 random_fp12(Rng& rng) { return {random_fp6(rng), random_fp6(rng)}; }

}  // namespace

TEST_CASE("limb helpers") {
  auto a = limbs_from_hex<4>("ffffffffffffffff0000000000000001");
  CHECK(a[0] == 1);
  CHECK(a[1] == 0xffffffffffffffffULL);
  CHECK(a[2] == 0);

  // (2^64 - 1)^2 = 2^128 - 2^65 + 1
  Limbs<1> m{0xffffffffffffffffULL};
  auto sq = mul_wide(m, m);
  CHECK(sq[0] == 1);
  CHECK(sq[1] == 0xfffffffffffffffeULL);

  Limbs<2> d{10, 3};  // 3*2^64 + 10
  limb_t rem = div_small(d, 6);
  // 3*2^64 + 10 = 6*q + r
  CHECK(rem == (limb_t)4);
  CHECK(d[0] == 0x8000000000000001ULL);
  CHECK(d[1] == 0);
}

TEST_CASE("final-exponentiation constant matches (p^4 - p^2 + 1)/r") {
  // recompute p^4 - p^2 + 1 and compare against hard * r
  const auto& p = Fp::modulus();
  const auto& r = Fr::modulus();
  Limbs<12> p2 = mul_wide(p, p);
  Limbs<24> p4 = mul_wide(p2, p2);
  Limbs<24> p2w{};
  std::copy(p2.begin(), p2.end(), p2w.begin());
  Limbs<24> expect = p4;
  CHECK(sub_n(expect, p2w) == 0);
  Limbs<24> one{};
  one[0] = 1;
  CHECK(add_n(expect, one) == 0);

  auto hard = limbs_from_hex<20>(
      "f686b3d807d01c0bd38c3195c899ed3cde88eeb996ca394506632528d6a9a2f2"
      "30063cf081517f68f7764c28b6f8ae5a72bce8d63cb9f827eca0ba621315b207"
      "6995003fc77a17988f8761bdc51dc2378b9039096d1b767f17fcbde783765915"
      "c97f36c6f18212ed0b283ed237db421d160aeb6a1e79983774940996754c8c71"
      "a2629b0dea236905ce937335d5b68fa9912aae208ccf1e516c3f438e3ba79");
  Limbs<24> product = mul_wide(hard, Limbs<4>{r[0], r[1], r[2], r[3]});
  CHECK(product == expect);
}

TEST_CASE("Fp arithmetic") {
  TestRng rng(1);
  for (int i = 0; i < 20; ++i) {
    Fp a = random_fp(rng);
    Fp b = random_fp(rng);
    Fp c = random_fp(rng);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a + a.neg() == Fp::zero());
    if (!a.is_zero()) CHECK(a * a.inv() == Fp::one());
  }
  // Fermat: a^p == a
  Fp a = random_fp(rng);
  CHECK(a.pow(Fp::modulus()) == a);

  // byte round-trip
  std::uint8_t buf[48], buf2[48];
  a.to_bytes(buf);
  auto back = Fp::from_bytes(buf);
  REQUIRE(back.has_value());
  CHECK(*back == a);
  back->to_bytes(buf2);
  CHECK(std::memcmp(buf, buf2, 48) == 0);

  // values >= p rejected
  std::uint8_t big[48];
  limbs_to_bytes_be(Fp::modulus(), big, 48);
  CHECK(!Fp::from_bytes(big).has_value());

  // sqrt of a square exists and squares back
  Fp sq = a.square();
  auto rt = sq.sqrt();
  REQUIRE(rt.has_value());
  CHECK(rt->square() == sq);
}

TEST_CASE("Fr arithmetic") {
  TestRng rng(2);
  for (int i = 0; i < 20; ++i) {
    Fr a = random_fr(rng);
    Fr b = random_fr(rng);
    CHECK((a + b) - b == a);
    if (!a.is_zero()) CHECK(a * a.inv() == Fr::one());
  }
  Fr a = random_fr(rng);
  CHECK(a.pow(Fr::modulus()) == a);
}

TEST_CASE("tower algebra") {
  TestRng rng(3);

  // u^2 = -1
  Fp2 u{Fp::zero(), Fp::one()};
  CHECK(u.square() == Fp2{Fp::one().neg(), Fp::zero()});

  // v^3 = xi in Fp6
  Fp6 v{Fp2::zero(), Fp2::one(), Fp2::zero()};
  Fp6 v3 = v * v * v;
  CHECK(v3 == Fp6{Fp2::xi(), Fp2::zero(), Fp2::zero()});

  // w^2 = v in Fp12
  Fp12 w{Fp6::zero(), Fp6::one()};
  Fp12 w2 = w.square();
  CHECK(w2 == Fp12{v, Fp6::zero()});

  for (int i = 0; i < 10; ++i) {
    Fp2 a2 = random_fp2(rng), b2 = random_fp2(rng);
    CHECK(a2 * b2 == b2 * a2);
    if (!a2.is_zero()) CHECK(a2 * a2.inv() == Fp2::one());
    CHECK(a2.mul_by_xi() == a2 * Fp2::xi());

    Fp6 a6 = random_fp6(rng), b6 = random_fp6(rng);
    CHECK((a6 + b6) * b6 == a6 * b6 + b6 * b6);
    if (!a6.is_zero()) CHECK(a6 * a6.inv() == Fp6::one());
    CHECK(a6.mul_by_v() == a6 * v);

    Fp12 a12 = random_fp12(rng), b12 = random_fp12(rng);
    CHECK(a12 * b12 == b12 * a12);
    CHECK(a12.square() == a12 * a12);
    if (!a12.is_zero()) CHECK(a12 * a12.inv() == Fp12::one());
  }

  // Fp2 sqrt on squares
  for (int i = 0; i < 10; ++i) {
    Fp2 a = random_fp2(rng);
    auto rt = a.square().sqrt();
    REQUIRE(rt.has_value());
    CHECK(rt->square() == a.square());
  }
}

TEST_CASE("Fp12 serialization round-trip") {
  TestRng rng(4);
  Fp12 a = random_fp12(rng);
  std::uint8_t buf[Fp12::kBytes];
  a.to_bytes(buf);
  auto back = Fp12::from_bytes(buf);
  REQUIRE(back.has_value());
  CHECK(*back == a);
}

TEST_CASE("frobenius p^2 equals pow(p^2)") {
  TestRng rng(5);
  Limbs<12> p2 = mul_wide(Fp::modulus(), Fp::modulus());
  Fp12 a = random_fp12(rng);
  CHECK(a.frobenius_p2() == a.pow(p2));
}

TEST_CASE("G1 group law and encoding") {
  G1 g = G1::generator();
  CHECK(g.is_on_curve());
  CHECK(g.in_subgroup());

  // known compressed generator bytes
  std::uint8_t buf[G1::kBytes];
  g.to_bytes(buf);
  CHECK(to_hex(ByteView(buf, sizeof buf)) ==
        "97f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
        "6c55e83ff97a1aeffb3af00adb22c6bb");
  auto back = G1::from_bytes(buf);
  REQUIRE(back.has_value());
  CHECK(*back == g);

  CHECK(g.add(g) == G1{g.p.dbl()});
  CHECK(g.add(g.neg()).is_infinity());

  TestRng rng(6);
  Fr a = random_fr(rng), b = random_fr(rng);
  CHECK(g.mul(a).add(g.mul(b)) == g.mul(a + b));

  // infinity encoding
  G1 inf = G1::infinity();
  inf.to_bytes(buf);
  CHECK(buf[0] == 0xc0);
  auto inf_back = G1::from_bytes(buf);
  REQUIRE(inf_back.has_value());
  CHECK(inf_back->is_infinity());
}

TEST_CASE("G2 group law and encoding") {
  G2 g = G2::generator();
  CHECK(g.is_on_curve());
  CHECK(g.in_subgroup());

  std::uint8_t buf[G2::kBytes];
  g.to_bytes(buf);
  CHECK(to_hex(ByteView(buf, sizeof buf)) ==
        "93e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049"
        "334cf11213945d57e5ac7d055d042b7e024aa2b2f08f0a91260805272dc51051"
        "c6e47ad4fa403b02b4510b647ae3d1770bac0326a805bbefd48056c8c121bdb8");
  auto back = G2::from_bytes(buf);
  REQUIRE(back.has_value());
  CHECK(*back == g);

  TestRng rng(7);
  Fr a = random_fr(rng), b = random_fr(rng);
  CHECK(g.mul(a).add(g.mul(b)) == g.mul(a + b));
}

TEST_CASE("pairing bilinearity and non-degeneracy") {
  const Fp12& z = gt_generator();
  CHECK(!z.is_one());
  CHECK(z.pow(Fr::modulus()).is_one());

  TestRng rng(8);
  for (int i = 0; i < 3; ++i) {
    Fr a = random_fr(rng), b = random_fr(rng);
    Fp12 lhs = pairing(G1::generator().mul(a), G2::generator().mul(b));
    Fp12 rhs = z.pow((a * b).canonical());
    CHECK(lhs == rhs);
  }

  // identity cases
  CHECK(pairing(G1::infinity(), G2::generator()).is_one());
  CHECK(pairing(G1::generator(), G2::infinity()).is_one());
}
