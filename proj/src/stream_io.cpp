#include "streamsplit/stream_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "binary_io.hpp"

namespace streamsplit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

StreamFormat parse_stream_format(std::string_view text) {
  if (text == "csv") return StreamFormat::csv;
  if (text == "bin") return StreamFormat::bin;
  throw ConfigError("unknown stream format '" + std::string(text) + "'");
}

std::string_view to_string(StreamFormat format) { return format == StreamFormat::csv ? "csv" : "bin"; }

StreamReader::StreamReader(std::istream& in, StreamFormat format) : in_(in), format_(format) {}

std::optional<LabeledPoint> StreamReader::next() {
  return format_ == StreamFormat::csv ? next_csv() : next_bin();
}

std::optional<LabeledPoint> StreamReader::next_csv() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (!header_checked_) {
      header_checked_ = true;
      if (body == "x,y") continue;
    }
    const auto comma = body.find(',');
    LabeledPoint p;
    if (comma == std::string_view::npos || !parse_int(body.substr(0, comma), p.x) ||
        !parse_int(body.substr(comma + 1), p.y)) {
      throw FormatError(line_, "line " + std::to_string(line_) + ": expected 'x,y', got '" + std::string(body) + "'");
    }
    ++records_;
    return p;
  }
  if (in_.bad()) throw IoError("read error on input stream");
  return std::nullopt;
}

std::optional<LabeledPoint> StreamReader::next_bin() {
  if (!declared_) {
    std::uint64_t count = 0;
    if (!detail::try_read_u64(in_, count)) return std::nullopt;  // empty input
    declared_ = count;
  }
  if (records_ >= *declared_) return std::nullopt;
  const std::uint64_t record = records_ + 1;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  try {
    if (!detail::try_read_u64(in_, x) || !detail::try_read_u64(in_, y)) {
      throw FormatError(record, "record " + std::to_string(record) + ": input ends before the declared " +
                                    std::to_string(*declared_) + " records");
    }
  } catch (const FormatError& e) {
    if (e.line() != 0) throw;
    throw FormatError(record, "record " + std::to_string(record) + ": truncated");
  }
  ++records_;
  return LabeledPoint{static_cast<std::int64_t>(x), static_cast<std::int64_t>(y)};
}

std::vector<LabeledPoint> read_stream(std::istream& in, StreamFormat format) {
  StreamReader reader(in, format);
  std::vector<LabeledPoint> out;
  while (auto p = reader.next()) out.push_back(*p);
  return out;
}

void write_stream(std::ostream& out, std::span<const LabeledPoint> points, StreamFormat format, bool csv_header) {
  if (format == StreamFormat::csv) {
    if (csv_header) out << "x,y\n";
    for (const auto& p : points) out << p.x << ',' << p.y << '\n';
  } else {
    detail::write_u64(out, points.size());
    for (const auto& p : points) {
      detail::write_i64(out, p.x);
      detail::write_i64(out, p.y);
    }
  }
  if (!out) throw IoError("failed writing stream");
}

}  // namespace streamsplit
