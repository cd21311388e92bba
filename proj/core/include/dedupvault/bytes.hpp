#ifndef DEDUPVAULT_BYTES_HPP
#define DEDUPVAULT_BYTES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dedupvault {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

using Digest = std::array<std::uint8_t, 32>;  // SHA-256 output
using Id16 = std::array<std::uint8_t, 16>;    // u_id / F_id

std::string to_hex(ByteView data);
Bytes from_hex(const std::string& hex);  // throws std::invalid_argument on bad input

inline Bytes to_bytes(ByteView v) { return Bytes(v.begin(), v.end()); }

template <std::size_t N>
std::string to_hex(const std::array<std::uint8_t, N>& a) {
  return to_hex(ByteView(a.data(), a.size()));
}

// Constant-time equality for fixed-size secrets.
bool ct_equal(ByteView a, ByteView b);

}  // namespace dedupvault

#endif
