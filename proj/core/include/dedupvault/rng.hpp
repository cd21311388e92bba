#ifndef DEDUPVAULT_RNG_HPP
#define DEDUPVAULT_RNG_HPP

#include <cstdint>
#include <span>

#include "dedupvault/bytes.hpp"

namespace dedupvault {

// All randomness flows through this interface so tests and the bench harness
// can run fully deterministic under a seed.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  Bytes bytes(std::size_t n) {
    Bytes b(n);
    fill(b);
    return b;
  }
  std::uint64_t next_u64();
  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);
};

// CSPRNG (OpenSSL RAND_bytes). Fatal on failure.
class SystemRng final : public Rng {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Deterministic stream: SHA-256(seed || counter). Not for production keys.
class TestRng final : public Rng {
 public:
  explicit TestRng(std::uint64_t seed);
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::array<std::uint8_t, 32> seed_{};
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 32> block_{};
  std::size_t avail_ = 0;
};

}  // namespace dedupvault

#endif
