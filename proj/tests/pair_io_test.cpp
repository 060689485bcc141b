#include <gtest/gtest.h>

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "chh/datagen.hpp"
#include "chh/pair_io.hpp"

namespace {

using chh::PairFormat;
using chh::StreamPair;

TEST(PairIo, BinaryLayoutIsLittleEndian) {
  std::ostringstream out;
  std::vector<StreamPair> pairs{{0x04030201u, 0x08070605u}};
  chh::write_pairs(out, pairs, PairFormat::binary);
  EXPECT_EQ(out.str(), std::string("\x01\x02\x03\x04\x05\x06\x07\x08", 8));
}

TEST(PairIo, RoundTripBothFormats) {
  chh::StreamSpec spec;
  spec.n = 10007;
  spec.seed = 1;
  const auto pairs = chh::gen_stream(spec);
  for (auto fmt : {PairFormat::binary, PairFormat::csv}) {
    std::stringstream buf;
    chh::write_pairs(buf, pairs, fmt);
    EXPECT_EQ(chh::read_all_pairs(buf, fmt), pairs);
  }
}

TEST(PairIo, TruncatedBinaryRecord) {
  std::istringstream in(std::string(7, '\0'));
  try {
    chh::read_all_pairs(in, PairFormat::binary);
    FAIL() << "expected parse_error";
  } catch (const chh::parse_error& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(PairIo, TruncatedRecordAfterChunkBoundary) {
  // 5000 whole records then 3 stray bytes: the reader's 4096-record chunks
  // must still report the absolute offset.
  std::istringstream in(std::string(5000 * 8 + 3, '\x01'));
  try {
    chh::read_all_pairs(in, PairFormat::binary);
    FAIL() << "expected parse_error";
  } catch (const chh::parse_error& e) {
    EXPECT_EQ(e.offset(), 40000u);
  }
}

TEST(PairIo, EmptyInputHasNoPairs) {
  std::istringstream bin(""), csv("");
  EXPECT_TRUE(chh::read_all_pairs(bin, PairFormat::binary).empty());
  EXPECT_TRUE(chh::read_all_pairs(csv, PairFormat::csv).empty());
}

TEST(PairIo, CsvToleratesBlankLinesAndCrlf) {
  std::istringstream in("1,2\r\n\n 3 , 4\n");
  auto pairs = chh::read_all_pairs(in, PairFormat::csv);
  EXPECT_EQ(pairs, (std::vector<StreamPair>{{1, 2}, {3, 4}}));
}

TEST(PairIo, CsvErrorsCarryLineNumber) {
  for (const auto& [text, line] : std::vector<std::pair<std::string, std::uint64_t>>{
           {"1,2\n3,x\n", 2}, {"1,2\n\n5\n", 3}, {"-1,2\n", 1}, {"1,99999999999\n", 1}}) {
    std::istringstream in(text);
    try {
      chh::read_all_pairs(in, PairFormat::csv);
      FAIL() << "expected parse_error for " << text;
    } catch (const chh::parse_error& e) {
      EXPECT_EQ(e.offset(), line) << text;
    }
  }
}

TEST(PairIo, FormatNames) {
  EXPECT_EQ(chh::parse_pair_format("binary"), PairFormat::binary);
  EXPECT_EQ(chh::parse_pair_format("csv"), PairFormat::csv);
  EXPECT_THROW(chh::parse_pair_format("xml"), std::invalid_argument);
}

}  // namespace
