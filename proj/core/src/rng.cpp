#include "dedupvault/rng.hpp"

#include <openssl/rand.h>
#include <openssl/sha.h>

#include <cstdlib>
#include <cstring>

namespace dedupvault {

std::uint64_t Rng::next_u64() {
  std::uint8_t b[8];
  fill(b);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // rejection sampling to avoid modulo bias
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

void SystemRng::fill(std::span<std::uint8_t> out) {
  if (RAND_bytes(out.data(), (int)out.size()) != 1) std::abort();
}

TestRng::TestRng(std::uint64_t seed) {
  std::uint8_t s[8];
  for (int i = 0; i < 8; ++i) s[i] = (std::uint8_t)(seed >> (56 - 8 * i));
  SHA256(s, 8, seed_.data());
}

void TestRng::fill(std::span<std::uint8_t> out) {
  std::size_t pos = 0;
  while (pos < out.size()) {
    if (avail_ == 0) {
      std::uint8_t buf[40];
      std::memcpy(buf, seed_.data(), 32);
      for (int i = 0; i < 8; ++i) buf[32 + i] = (std::uint8_t)(counter_ >> (56 - 8 * i));
      ++counter_;
      SHA256(buf, sizeof buf, block_.data());
      avail_ = 32;
    }
    std::size_t n = std::min(avail_, out.size() - pos);
    std::memcpy(out.data() + pos, block_.data() + (32 - avail_), n);
    avail_ -= n;
    pos += n;
  }
}

}  // namespace dedupvault
