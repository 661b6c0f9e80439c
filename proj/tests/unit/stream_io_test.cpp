#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "brute_force.hpp"
#include "streamsplit/stream_io.hpp"

namespace ss = streamsplit;
using ss::LabeledPoint;

TEST(StreamIo, CsvWithAndWithoutHeader) {
  std::istringstream with("x,y\n1,2\n\n3,-1\n");
  EXPECT_EQ(ss::read_stream(with, ss::StreamFormat::csv), (std::vector<LabeledPoint>{{1, 2}, {3, -1}}));
  std::istringstream without("5,0\r\n6,1");
  EXPECT_EQ(ss::read_stream(without, ss::StreamFormat::csv), (std::vector<LabeledPoint>{{5, 0}, {6, 1}}));
  std::istringstream empty("");
  EXPECT_TRUE(ss::read_stream(empty, ss::StreamFormat::csv).empty());
}

TEST(StreamIo, MalformedCsvReportsLine) {
  std::istringstream bad("x,y\n1,2\n3;4\n");
  try {
    ss::read_stream(bad, ss::StreamFormat::csv);
    FAIL();
  } catch (const ss::FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  for (const char* text : {"1,2,3\n", "a,1\n", "1,\n", "99999999999999999999,1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(ss::read_stream(in, ss::StreamFormat::csv), ss::FormatError) << text;
  }
}

TEST(StreamIo, CsvBinaryRoundTrip) {
  std::mt19937_64 rng(17);
  auto pts = brute::random_stream(rng, 500, 1000, 9, false);
  pts.push_back({INT64_MAX, INT64_MIN});
  for (auto fmt : {ss::StreamFormat::csv, ss::StreamFormat::bin}) {
    std::stringstream buf;
    ss::write_stream(buf, pts, fmt);
    EXPECT_EQ(ss::read_stream(buf, fmt), pts);
  }
  std::stringstream csv, bin;
  ss::write_stream(csv, pts, ss::StreamFormat::csv);
  const auto via_csv = ss::read_stream(csv, ss::StreamFormat::csv);
  ss::write_stream(bin, via_csv, ss::StreamFormat::bin);
  EXPECT_EQ(ss::read_stream(bin, ss::StreamFormat::bin), pts);
}

TEST(StreamIo, BinaryLayoutIsLittleEndianCountPrefixed) {
  std::stringstream buf;
  ss::write_stream(buf, std::vector<LabeledPoint>{{1, -1}}, ss::StreamFormat::bin);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 24u);
  EXPECT_EQ(bytes[0], 1);
  EXPECT_EQ(bytes[8], 1);
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 0xffu);
}

TEST(StreamIo, TruncatedBinaryIsAFormatError) {
  std::stringstream buf;
  ss::write_stream(buf, std::vector<LabeledPoint>{{1, 1}, {2, 0}}, ss::StreamFormat::bin);
  std::string bytes = buf.str();
  bytes.resize(bytes.size() - 4);
  std::istringstream cut(bytes);
  EXPECT_THROW(ss::read_stream(cut, ss::StreamFormat::bin), ss::FormatError);
  std::istringstream empty("");
  EXPECT_TRUE(ss::read_stream(empty, ss::StreamFormat::bin).empty());
}

TEST(StreamIo, ReaderIsPullBased) {
  std::istringstream in("1,1\n2,2\n3,3\n");
  ss::StreamReader reader(in, ss::StreamFormat::csv);
  EXPECT_EQ(*reader.next(), (LabeledPoint{1, 1}));
  EXPECT_EQ(reader.records_read(), 1u);
  reader.next();
  reader.next();
  EXPECT_FALSE(reader.next().has_value());
  EXPECT_EQ(reader.records_read(), 3u);
}

TEST(StreamIo, FormatNames) {
  EXPECT_EQ(ss::parse_stream_format("csv"), ss::StreamFormat::csv);
  EXPECT_EQ(ss::parse_stream_format("bin"), ss::StreamFormat::bin);
  EXPECT_THROW(ss::parse_stream_format("xml"), ss::ConfigError);
}
