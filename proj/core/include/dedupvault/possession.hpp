#ifndef DEDUPVAULT_POSSESSION_HPP
#define DEDUPVAULT_POSSESSION_HPP

#include <utility>
#include <vector>

#include "dedupvault/bytes.hpp"
#include "dedupvault/errors.hpp"
#include "dedupvault/rng.hpp"

namespace dedupvault::poss {

// Proof-of-possession over randomly selected file regions. Regions are
// expressed in basis points of the file length so the byte ranges are
// bit-exact across implementations (floor arithmetic).

inline constexpr std::size_t kBpScale = 10000;
inline constexpr std::uint16_t kMinWidthBp = 50;   // 0.5%
inline constexpr std::uint16_t kMaxWidthBp = 500;  // 5%
inline constexpr std::size_t kMinFileBytes = 10000;

inline constexpr std::size_t kDefaultIndexCount = 16;   // |X|
inline constexpr std::size_t kDefaultRetained = 8;      // |X'| kept at Pri-CSP
inline constexpr std::size_t kDefaultChallengeSize = 3; // indices per challenge

struct RegionIndex {
  std::uint16_t start_bp = 0;
  std::uint16_t end_bp = 0;  // exclusive; 0 < end_bp <= 10000, start < end

  // [floor(start*L/10000), floor(end*L/10000))
  std::pair<std::uint64_t, std::uint64_t> byte_range(std::uint64_t file_len) const {
    return {start_bp * file_len / kBpScale, end_bp * file_len / kBpScale};
  }
  auto operator<=>(const RegionIndex&) const = default;
};

using IndexSet = std::vector<RegionIndex>;   // X
using HashCodeSet = std::vector<Digest>;     // HC(F)

// n distinct random regions, widths in [kMinWidthBp, kMaxWidthBp].
IndexSet generate_index_set(Rng& rng, std::size_t n = kDefaultIndexCount);

// Positional digests; throws Error(FileTooSmall) below kMinFileBytes.
HashCodeSet compute_hash_code_set(ByteView f, const IndexSet& x);

// k aligned pairs chosen uniformly without replacement (original order kept).
std::pair<IndexSet, HashCodeSet> subsample(const IndexSet& x, const HashCodeSet& hc,
                                           std::size_t k, Rng& rng);

struct Challenge {
  Id16 f_id{};
  std::array<std::uint8_t, 16> nonce{};
  IndexSet indices;  // drawn from the stored X'
};

struct ChallengeResponse {
  Id16 f_id{};
  std::array<std::uint8_t, 16> nonce{};
  HashCodeSet digests;
};

Challenge make_challenge(const Id16& f_id, const IndexSet& retained, Rng& rng,
                         std::size_t c = kDefaultChallengeSize);

// Prover side: digests over the challenged regions of the full plaintext.
ChallengeResponse respond(const Challenge& ch, ByteView f);

// Verifier side: nonce echo must match (throws Error(NonceMismatch) otherwise);
// returns true iff every challenged region is retained with an equal digest.
bool verify_response(const IndexSet& retained_x, const HashCodeSet& retained_hc,
                     const Challenge& ch, const ChallengeResponse& resp);

}  // namespace dedupvault::poss

#endif
