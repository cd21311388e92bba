#ifndef DEDUPVAULT_BLS_LIMBS_HPP
#define DEDUPVAULT_BLS_LIMBS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string_view>

namespace dedupvault::bls {

using limb_t = std::uint64_t;
using dlimb_t = unsigned __int128;

template <std::size_t N>
using Limbs = std::array<limb_t, N>;

// ---- plain multiprecision helpers (little-endian limb order) ----

template <std::size_t N>
inline int cmp_n(const Limbs<N>& a, const Limbs<N>& b) {
  for (std::size_t i = N; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

template <std::size_t N>
inline bool is_zero_n(const Limbs<N>& a) {
  for (auto l : a)
    if (l) return false;
  return true;
}

// a += b, returns carry
template <std::size_t N>
inline limb_t add_n(Limbs<N>& a, const Limbs<N>& b) {
  dlimb_t carry = 0;
  for (std::size_t i = 0; i < N; ++i) {
    dlimb_t cur = (dlimb_t)a[i] + b[i] + carry;
    a[i] = (limb_t)cur;
    carry = cur >> 64;
  }
  return (limb_t)carry;
}

// a -= b, returns borrow
template <std::size_t N>
inline limb_t sub_n(Limbs<N>& a, const Limbs<N>& b) {
  dlimb_t borrow = 0;
  for (std::size_t i = 0; i < N; ++i) {
    dlimb_t cur = (dlimb_t)a[i] - b[i] - borrow;
    a[i] = (limb_t)cur;
    borrow = (cur >> 64) & 1;
  }
  return (limb_t)borrow;
}

// out = a * b (schoolbook, full width)
template <std::size_t N, std::size_t M>
inline Limbs<N + M> mul_wide(const Limbs<N>& a, const Limbs<M>& b) {
  Limbs<N + M> out{};
  for (std::size_t i = 0; i < N; ++i) {
    dlimb_t carry = 0;
    for (std::size_t j = 0; j < M; ++j) {
      dlimb_t cur = (dlimb_t)out[i + j] + (dlimb_t)a[i] * b[j] + carry;
      out[i + j] = (limb_t)cur;
      carry = cur >> 64;
    }
    out[i + M] = (limb_t)carry;
  }
  return out;
}

// in-place divide by a small constant, returns remainder
template <std::size_t N>
inline limb_t div_small(Limbs<N>& a, limb_t d) {
  dlimb_t rem = 0;
  for (std::size_t i = N; i-- > 0;) {
    dlimb_t cur = (rem << 64) | a[i];
    a[i] = (limb_t)(cur / d);
    rem = cur % d;
  }
  return (limb_t)rem;
}

template <std::size_t N>
inline void shr1_n(Limbs<N>& a) {
  for (std::size_t i = 0; i + 1 < N; ++i) a[i] = (a[i] >> 1) | (a[i + 1] << 63);
  a[N - 1] >>= 1;
}

template <std::size_t N>
inline Limbs<N> limbs_from_hex(std::string_view hex) {
  Limbs<N> out{};
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  std::size_t bit = 0;
  for (std::size_t i = hex.size(); i-- > 0;) {
    char c = hex[i];
    limb_t nib;
    if (c >= '0' && c <= '9') nib = (limb_t)(c - '0');
    else if (c >= 'a' && c <= 'f') nib = (limb_t)(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') nib = (limb_t)(c - 'A' + 10);
    else throw std::invalid_argument("bad hex digit");
    if (bit / 64 >= N) {
      if (nib) throw std::invalid_argument("hex constant too wide");
    } else {
      out[bit / 64] |= nib << (bit % 64);
    }
    bit += 4;
  }
  return out;
}

template <std::size_t N>
inline void limbs_to_bytes_be(const Limbs<N>& a, std::uint8_t* out, std::size_t nbytes) {
  for (std::size_t i = 0; i < nbytes; ++i) {
    std::size_t bit = 8 * (nbytes - 1 - i);
    out[i] = (bit / 64 < N) ? (std::uint8_t)(a[bit / 64] >> (bit % 64)) : 0;
  }
}

template <std::size_t N>
inline Limbs<N> limbs_from_bytes_be(const std::uint8_t* in, std::size_t nbytes) {
  Limbs<N> out{};
  for (std::size_t i = 0; i < nbytes; ++i) {
    std::size_t bit = 8 * (nbytes - 1 - i);
    if (bit / 64 < N) out[bit / 64] |= (limb_t)in[i] << (bit % 64);
  }
  return out;
}

template <std::size_t N>
inline std::size_t bit_length(const Limbs<N>& a) {
  for (std::size_t i = N; i-- > 0;) {
    if (a[i]) return 64 * i + (64 - (std::size_t)__builtin_clzll(a[i]));
  }
  return 0;
}

template <std::size_t N>
inline bool bit_at(const Limbs<N>& a, std::size_t i) {
  return (a[i / 64] >> (i % 64)) & 1;
}

// ---- Montgomery arithmetic ----

template <std::size_t N>
struct MontParams {
  Limbs<N> mod{};
  limb_t n0 = 0;            // -mod^{-1} mod 2^64
  Limbs<N> one{};           // R mod mod (Montgomery form of 1)
  Limbs<N> r2{};            // R^2 mod mod
  Limbs<N> mod_minus_2{};   // Fermat inversion exponent
  std::size_t nbytes = 0;   // canonical big-endian width

  static MontParams make(const Limbs<N>& mod, std::size_t nbytes) {
    MontParams p;
    p.mod = mod;
    p.nbytes = nbytes;
    // n0 by Newton iteration mod 2^64 (mod must be odd)
    limb_t inv = 1;
    for (int i = 0; i < 6; ++i) inv *= 2 - mod[0] * inv;
    p.n0 = (limb_t)(0 - inv);
    // R mod p by repeated doubling of 1, then R^2 by doubling further
    Limbs<N> acc{};
    acc[0] = 1;
    auto dbl = [&](Limbs<N>& v) {
      limb_t carry = add_n(v, v);
      if (carry || cmp_n(v, mod) >= 0) sub_n(v, mod);
    };
    for (std::size_t i = 0; i < 64 * N; ++i) dbl(acc);
    p.one = acc;
    for (std::size_t i = 0; i < 64 * N; ++i) dbl(acc);
    p.r2 = acc;
    p.mod_minus_2 = mod;
    Limbs<N> two{};
    two[0] = 2;
    sub_n(p.mod_minus_2, two);
    return p;
  }
};

// CIOS Montgomery multiplication; inputs < mod, output < mod.
template <std::size_t N>
inline Limbs<N> mont_mul(const Limbs<N>& a, const Limbs<N>& b, const MontParams<N>& P) {
  limb_t t[N + 1] = {0};
  limb_t t_hi = 0;  // bit above t[N]
  for (std::size_t i = 0; i < N; ++i) {
    dlimb_t carry = 0;
    for (std::size_t j = 0; j < N; ++j) {
      dlimb_t cur = (dlimb_t)t[j] + (dlimb_t)a[j] * b[i] + carry;
      t[j] = (limb_t)cur;
      carry = cur >> 64;
    }
    dlimb_t cur = (dlimb_t)t[N] + carry;
    t[N] = (limb_t)cur;
    t_hi = (limb_t)(cur >> 64);

    limb_t m = t[0] * P.n0;
    dlimb_t cur0 = (dlimb_t)t[0] + (dlimb_t)m * P.mod[0];
    carry = cur0 >> 64;
    for (std::size_t j = 1; j < N; ++j) {
      dlimb_t curj = (dlimb_t)t[j] + (dlimb_t)m * P.mod[j] + carry;
      t[j - 1] = (limb_t)curj;
      carry = curj >> 64;
    }
    dlimb_t curn = (dlimb_t)t[N] + carry;
    t[N - 1] = (limb_t)curn;
    t[N] = t_hi + (limb_t)(curn >> 64);
  }
  Limbs<N> out;
  std::copy(t, t + N, out.begin());
  if (t[N] != 0 || cmp_n(out, P.mod) >= 0) sub_n(out, P.mod);
  return out;
}

template <std::size_t N>
inline Limbs<N> mont_add(const Limbs<N>& a, const Limbs<N>& b, const MontParams<N>& P) {
  Limbs<N> out = a;
  limb_t carry = add_n(out, b);
  if (carry || cmp_n(out, P.mod) >= 0) sub_n(out, P.mod);
  return out;
}

template <std::size_t N>
inline Limbs<N> mont_sub(const Limbs<N>& a, const Limbs<N>& b, const MontParams<N>& P) {
  Limbs<N> out = a;
  if (sub_n(out, b)) add_n(out, P.mod);
  return out;
}

// base^exp with a fixed 4-bit window; exponent is plain little-endian limbs.
template <std::size_t N, std::size_t E>
inline Limbs<N> mont_pow(const Limbs<N>& base, const Limbs<E>& exp, const MontParams<N>& P) {
  Limbs<N> table[16];
  table[0] = P.one;
  table[1] = base;
  for (int i = 2; i < 16; ++i) table[i] = mont_mul(table[i - 1], base, P);
  std::size_t bits = bit_length(exp);
  if (bits == 0) return P.one;
  std::size_t top = (bits + 3) / 4;  // number of nibbles
  Limbs<N> acc = P.one;
  bool started = false;
  for (std::size_t ni = top; ni-- > 0;) {
    if (started) {
      acc = mont_mul(acc, acc, P);
      acc = mont_mul(acc, acc, P);
      acc = mont_mul(acc, acc, P);
      acc = mont_mul(acc, acc, P);
    }
    std::size_t bit = ni * 4;  // nibble windows never straddle a 64-bit limb
    limb_t nib = (exp[bit / 64] >> (bit % 64)) & 0xf;
    if (nib) {
      acc = started ? mont_mul(acc, table[nib], P) : table[nib];
      started = true;
    } else if (!started) {
      continue;
    }
  }
  return acc;
}

}  // namespace dedupvault::bls

#endif
