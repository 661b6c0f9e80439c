#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "streamsplit/core.hpp"

namespace streamsplit {

/// csv: "x,y" decimal lines with an optional leading "x,y" header.
/// bin: u64 record count, then that many (i64 x, i64 y) pairs, little-endian.
enum class StreamFormat { csv, bin };

StreamFormat parse_stream_format(std::string_view text);
std::string_view to_string(StreamFormat format);

/// Pull-based reader; holds one record at a time.
class StreamReader {
 public:
  StreamReader(std::istream& in, StreamFormat format);

  /// Next record, or nullopt at end of input. Throws FormatError with the
  /// 1-based line (csv) or record (bin) number on malformed input.
  std::optional<LabeledPoint> next();

  /// Records returned so far.
  std::uint64_t records_read() const { return records_; }

 private:
  std::optional<LabeledPoint> next_csv();
  std::optional<LabeledPoint> next_bin();

  std::istream& in_;
  StreamFormat format_;
  std::uint64_t records_ = 0;
  std::uint64_t line_ = 0;
  std::optional<std::uint64_t> declared_;  // bin record count
  bool header_checked_ = false;
};

std::vector<LabeledPoint> read_stream(std::istream& in, StreamFormat format);
void write_stream(std::ostream& out, std::span<const LabeledPoint> points, StreamFormat format,
                  bool csv_header = true);

}  // namespace streamsplit
