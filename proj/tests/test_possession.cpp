#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dedupvault/possession.hpp"
#include "dedupvault/sym.hpp"

using namespace dedupvault;
using namespace dedupvault::poss;

namespace {
Id16 fid(std::uint8_t tag) {
  Id16 id{};
  id.fill(tag);
  return id;
}
}  // namespace

TEST_CASE("region arithmetic") {
  // "first 0.5%" is (0, 50)
  RegionIndex first{0, 50};
  auto [lo, hi] = first.byte_range(10000);
  CHECK(lo == 0);
  CHECK(hi == 50);

  // 50 bp of a 10 MB file: floor(50 * 10485760 / 10000)
  const std::uint64_t mb10 = 10 * 1024 * 1024;
  auto [a, b] = RegionIndex{0, 50}.byte_range(mb10);
  CHECK(b - a == 50 * mb10 / 10000);
  CHECK(b - a == 52428);

  // interior starts give the floor-or-ceil width
  for (std::uint16_t s : {1, 7, 123, 9000}) {
    if (s + 50 > 10000) continue;
    auto [x, y] = RegionIndex{s, (std::uint16_t)(s + 50)}.byte_range(mb10);
    CHECK((y - x == 52428 || y - x == 52429));
  }
}

TEST_CASE("generate_index_set invariants") {
  TestRng rng(31);
  IndexSet x = generate_index_set(rng, 16);
  CHECK(x.size() == 16);
  std::set<RegionIndex> distinct(x.begin(), x.end());
  CHECK(distinct.size() == 16);
  for (const auto& r : x) {
    CHECK(r.start_bp < r.end_bp);
    CHECK(r.end_bp <= 10000);
    std::uint16_t w = r.end_bp - r.start_bp;
    CHECK(w >= kMinWidthBp);
    CHECK(w <= kMaxWidthBp);
  }
}

TEST_CASE("hash code set") {
  TestRng rng(32);

  // 10000 zero bytes, X = {(0,50)} -> SHA-256 of 50 zero bytes
  Bytes zeros(10000, 0);
  HashCodeSet hc = compute_hash_code_set(zeros, {{0, 50}});
  REQUIRE(hc.size() == 1);
  CHECK(to_hex(hc[0]) == "cc2786e1f9910a9d811400edcddaf7075195f7a16b216dcbefba3bc7c4f2ae51");

  // determinism
  Bytes f = rng.bytes(30000);
  IndexSet x = generate_index_set(rng, 16);
  CHECK(compute_hash_code_set(f, x) == compute_hash_code_set(f, x));

  // single-byte sensitivity inside a range
  auto [lo, hi] = x[3].byte_range(f.size());
  Bytes f2 = f;
  f2[lo] ^= 0xff;
  HashCodeSet h1 = compute_hash_code_set(f, x);
  HashCodeSet h2 = compute_hash_code_set(f2, x);
  CHECK(h1[3] != h2[3]);

  // too-small file
  Bytes small(9999, 0);
  CHECK_THROWS_AS(compute_hash_code_set(small, x), Error);
}

TEST_CASE("subsample alignment") {
  TestRng rng(33);
  Bytes f = rng.bytes(20000);
  IndexSet x = generate_index_set(rng, 16);
  HashCodeSet hc = compute_hash_code_set(f, x);

  auto [xs, hs] = subsample(x, hc, 8, rng);
  CHECK(xs.size() == 8);
  CHECK(hs.size() == 8);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto [lo, hi] = xs[i].byte_range(f.size());
    CHECK(hs[i] == sym::hash(ByteView(f).subspan(lo, hi - lo)));
  }

  // k == n keeps everything
  auto [all_x, all_h] = subsample(x, hc, x.size(), rng);
  CHECK(all_x == x);
  CHECK(all_h == hc);
}

TEST_CASE("challenge completeness: honest holder passes 1000/1000") {
  TestRng rng(34);
  Bytes f = rng.bytes(25000);
  IndexSet x = generate_index_set(rng, 16);
  HashCodeSet hc = compute_hash_code_set(f, x);
  auto [xs, hs] = subsample(x, hc, 8, rng);

  int passes = 0;
  for (int i = 0; i < 1000; ++i) {
    Challenge ch = make_challenge(fid(1), xs, rng);
    CHECK(ch.indices.size() == kDefaultChallengeSize);
    ChallengeResponse resp = respond(ch, f);
    if (verify_response(xs, hs, ch, resp)) ++passes;
  }
  CHECK(passes == 1000);
}

TEST_CASE("soundness: hash-only adversary fails 1000/1000") {
  TestRng rng(35);
  Bytes f = rng.bytes(25000);
  IndexSet x = generate_index_set(rng, 16);
  HashCodeSet hc = compute_hash_code_set(f, x);
  auto [xs, hs] = subsample(x, hc, 8, rng);
  Digest tag = sym::hash(f);  // all the adversary holds

  int passes = 0;
  for (int i = 0; i < 1000; ++i) {
    Challenge ch = make_challenge(fid(1), xs, rng);
    // best effort without the plaintext: digests derived from the tag
    ChallengeResponse resp;
    resp.f_id = ch.f_id;
    resp.nonce = ch.nonce;
    for (std::size_t j = 0; j < ch.indices.size(); ++j) {
      Bytes guess(tag.begin(), tag.end());
      guess.push_back((std::uint8_t)j);
      resp.digests.push_back(sym::hash(guess));
    }
    if (verify_response(xs, hs, ch, resp)) ++passes;
  }
  CHECK(passes == 0);
}

TEST_CASE("nonce echo enforced") {
  TestRng rng(36);
  Bytes f = rng.bytes(15000);
  IndexSet x = generate_index_set(rng, 16);
  HashCodeSet hc = compute_hash_code_set(f, x);
  auto [xs, hs] = subsample(x, hc, 8, rng);

  Challenge ch = make_challenge(fid(2), xs, rng);
  ChallengeResponse resp = respond(ch, f);
  resp.nonce[0] ^= 1;  // replayed/stale response
  CHECK_THROWS_AS(verify_response(xs, hs, ch, resp), Error);
  try {
    verify_response(xs, hs, ch, resp);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonceMismatch);
  }
}
