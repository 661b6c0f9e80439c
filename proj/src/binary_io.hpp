#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "streamsplit/errors.hpp"

namespace streamsplit::detail {

inline void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf{};
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> buf{};
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

inline void write_i64(std::ostream& out, std::int64_t v) { write_u64(out, static_cast<std::uint64_t>(v)); }

/// Returns false on clean EOF before the first byte; throws FormatError on a
/// truncated value.
inline bool try_read_u64(std::istream& in, std::uint64_t& v) {
  std::array<unsigned char, 8> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  const auto got = in.gcount();
  if (got == 0) return false;
  if (got != 8) throw FormatError("truncated 64-bit value");
  v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return true;
}

inline std::uint64_t read_u64(std::istream& in, const char* what) {
  std::uint64_t v = 0;
  if (!try_read_u64(in, v)) throw FormatError(std::string("unexpected end of data reading ") + what);
  return v;
}

inline std::uint32_t read_u32(std::istream& in, const char* what) {
  std::array<unsigned char, 4> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (in.gcount() != 4) throw FormatError(std::string("unexpected end of data reading ") + what);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

inline void expect_magic(std::istream& in, const std::array<char, 8>& magic, const char* what) {
  std::array<char, 8> got{};
  in.read(got.data(), got.size());
  if (in.gcount() != 8 || got != magic) throw FormatError(std::string("bad magic for ") + what);
}

}  // namespace streamsplit::detail
