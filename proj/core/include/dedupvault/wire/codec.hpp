#ifndef DEDUPVAULT_WIRE_CODEC_HPP
#define DEDUPVAULT_WIRE_CODEC_HPP

#include <concepts>
#include <cstring>

#include "dedupvault/bytes.hpp"
#include "dedupvault/errors.hpp"

namespace dedupvault::wire {

// Canonical deterministic binary encoding: fixed field order, big-endian
// fixed-width integers, u32 length prefixes on variable byte strings.

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) {
    buf_.push_back((std::uint8_t)(v >> 8));
    buf_.push_back((std::uint8_t)v);
  }
  void u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) buf_.push_back((std::uint8_t)(v >> s));
  }
  void u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) buf_.push_back((std::uint8_t)(v >> s));
  }
  void raw(ByteView v) { buf_.insert(buf_.end(), v.begin(), v.end()); }
  template <std::size_t N>
  void arr(const std::array<std::uint8_t, N>& a) {
    raw(ByteView(a.data(), N));
  }
  void bytes(ByteView v) {
    u32((std::uint32_t)v.size());
    raw(v);
  }
  std::size_t size() const { return buf_.size(); }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() {
    auto b = take(2);
    return (std::uint16_t)((b[0] << 8) | b[1]);
  }
  std::uint32_t u32() {
    auto b = take(4);
    return ((std::uint32_t)b[0] << 24) | ((std::uint32_t)b[1] << 16) |
           ((std::uint32_t)b[2] << 8) | b[3];
  }
  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
    return v;
  }
  ByteView raw(std::size_t n) { return take(n); }
  template <std::size_t N>
  std::array<std::uint8_t, N> arr() {
    auto b = take(N);
    std::array<std::uint8_t, N> a;
    std::memcpy(a.data(), b.data(), N);
    return a;
  }
  ByteView bytes() {
    std::uint32_t n = u32();
    if (n > remaining()) throw Error(ErrorCode::MalformedFrame, "length prefix overruns frame");
    return take(n);
  }
  std::size_t remaining() const { return data_.size() - pos_; }
  void expect_done() const {
    if (remaining()) throw Error(ErrorCode::MalformedFrame, "trailing bytes");
  }

 private:
  ByteView take(std::size_t n) {
    if (n > remaining()) throw Error(ErrorCode::MalformedFrame, "truncated");
    ByteView v = data_.subspan(pos_, n);
    pos_ += n;
    return v;
  }
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace dedupvault::wire

#endif
