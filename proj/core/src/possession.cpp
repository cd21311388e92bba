#include "dedupvault/possession.hpp"

#include <algorithm>
#include <set>

#include "dedupvault/sym.hpp"

namespace dedupvault::poss {

IndexSet generate_index_set(Rng& rng, std::size_t n) {
  if (n < 1) throw Error(ErrorCode::Internal, "index count must be >= 1");
  std::set<RegionIndex> seen;
  IndexSet out;
  while (out.size() < n) {
    std::uint16_t width =
        (std::uint16_t)(kMinWidthBp + rng.below(kMaxWidthBp - kMinWidthBp + 1));
    std::uint16_t start = (std::uint16_t)rng.below(kBpScale - width + 1);
    RegionIndex r{start, (std::uint16_t)(start + width)};
    if (seen.insert(r).second) out.push_back(r);
  }
  return out;
}

HashCodeSet compute_hash_code_set(ByteView f, const IndexSet& x) {
  if (f.size() < kMinFileBytes) throw Error(ErrorCode::FileTooSmall);
  HashCodeSet out;
  out.reserve(x.size());
  for (const RegionIndex& r : x) {
    auto [lo, hi] = r.byte_range(f.size());
    out.push_back(sym::hash(f.subspan(lo, hi - lo)));
  }
  return out;
}

std::pair<IndexSet, HashCodeSet> subsample(const IndexSet& x, const HashCodeSet& hc,
                                           std::size_t k, Rng& rng) {
  if (hc.size() != x.size()) throw Error(ErrorCode::Internal, "misaligned hash code set");
  if (k > x.size()) throw Error(ErrorCode::Internal, "subsample larger than set");
  // Floyd's sampling of k distinct positions, emitted in original order
  std::set<std::size_t> chosen;
  for (std::size_t j = x.size() - k; j < x.size(); ++j) {
    std::size_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  IndexSet xs;
  HashCodeSet hs;
  for (std::size_t i : chosen) {
    xs.push_back(x[i]);
    hs.push_back(hc[i]);
  }
  return {std::move(xs), std::move(hs)};
}

Challenge make_challenge(const Id16& f_id, const IndexSet& retained, Rng& rng, std::size_t c) {
  if (c > retained.size()) c = retained.size();
  Challenge ch;
  ch.f_id = f_id;
  rng.fill(ch.nonce);
  std::set<std::size_t> chosen;
  while (chosen.size() < c) chosen.insert(rng.below(retained.size()));
  for (std::size_t i : chosen) ch.indices.push_back(retained[i]);
  return ch;
}

ChallengeResponse respond(const Challenge& ch, ByteView f) {
  ChallengeResponse resp;
  resp.f_id = ch.f_id;
  resp.nonce = ch.nonce;
  resp.digests = compute_hash_code_set(f, ch.indices);
  return resp;
}

bool verify_response(const IndexSet& retained_x, const HashCodeSet& retained_hc,
                     const Challenge& ch, const ChallengeResponse& resp) {
  if (resp.nonce != ch.nonce) throw Error(ErrorCode::NonceMismatch);
  if (resp.f_id != ch.f_id) return false;
  if (resp.digests.size() != ch.indices.size()) return false;
  for (std::size_t i = 0; i < ch.indices.size(); ++i) {
    auto it = std::find(retained_x.begin(), retained_x.end(), ch.indices[i]);
    if (it == retained_x.end()) return false;
    std::size_t pos = (std::size_t)(it - retained_x.begin());
    if (!ct_equal(resp.digests[i], retained_hc[pos])) return false;
  }
  return true;
}

}  // namespace dedupvault::poss
