#pragma once

// Pair stream files. Binary: little-endian u32 x, u32 y per record, no
// header. CSV: one "x,y" per line, blank lines ignored.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chh/datagen.hpp"
#include "chh/errors.hpp"

namespace chh {

enum class PairFormat { binary, csv };

inline PairFormat parse_pair_format(std::string_view name) {
  if (name == "binary" || name == "bin") return PairFormat::binary;
  if (name == "csv") return PairFormat::csv;
  throw std::invalid_argument("unknown pair format: " + std::string(name));
}

namespace detail {

inline void put_u32le(char* p, std::uint32_t v) noexcept {
  p[0] = static_cast<char>(v & 0xffu);
  p[1] = static_cast<char>((v >> 8) & 0xffu);
  p[2] = static_cast<char>((v >> 16) & 0xffu);
  p[3] = static_cast<char>((v >> 24) & 0xffu);
}

inline std::uint32_t get_u32le(const char* p) noexcept {
  const auto* u = reinterpret_cast<const unsigned char*>(p);
  return std::uint32_t{u[0]} | (std::uint32_t{u[1]} << 8) |
         (std::uint32_t{u[2]} << 16) | (std::uint32_t{u[3]} << 24);
}

}  // namespace detail

inline void write_pairs(std::ostream& out, std::span<const StreamPair> pairs,
                        PairFormat format) {
  if (format == PairFormat::csv) {
    for (const auto& p : pairs) out << p.x << ',' << p.y << '\n';
    return;
  }
  constexpr std::size_t kChunk = 4096;
  std::vector<char> buf(kChunk * 8);
  for (std::size_t i = 0; i < pairs.size(); i += kChunk) {
    const std::size_t n = std::min(kChunk, pairs.size() - i);
    for (std::size_t j = 0; j < n; ++j) {
      detail::put_u32le(&buf[j * 8], pairs[i + j].x);
      detail::put_u32le(&buf[j * 8 + 4], pairs[i + j].y);
    }
    out.write(buf.data(), static_cast<std::streamsize>(n * 8));
  }
}

/// Chunked pull reader. read() fills a prefix of `out` and returns its
/// length; 0 means end of input. Throws parse_error on malformed input.
class PairReader {
 public:
  virtual ~PairReader() = default;
  virtual std::size_t read(std::span<StreamPair> out) = 0;
};

class BinaryPairReader final : public PairReader {
 public:
  explicit BinaryPairReader(std::istream& in) : in_(in) {}

  std::size_t read(std::span<StreamPair> out) override {
    if (out.empty() || done_) return 0;
    buf_.resize(out.size() * 8);
    in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    const auto got = static_cast<std::size_t>(in_.gcount());
    const std::size_t records = got / 8;
    for (std::size_t i = 0; i < records; ++i) {
      out[i] = {detail::get_u32le(&buf_[i * 8]),
                detail::get_u32le(&buf_[i * 8 + 4])};
    }
    const std::size_t tail = got % 8;
    if (got < buf_.size()) done_ = true;
    if (tail != 0) {
      // Offset of the first field that could not be read completely.
      const std::uint64_t at = offset_ + records * 8 + (tail >= 4 ? 4 : 0);
      throw parse_error("truncated binary pair record at byte offset " +
                            std::to_string(at),
                        at);
    }
    offset_ += got;
    return records;
  }

 private:
  std::istream& in_;
  std::vector<char> buf_;
  std::uint64_t offset_ = 0;
  bool done_ = false;
};

class CsvPairReader final : public PairReader {
 public:
  explicit CsvPairReader(std::istream& in) : in_(in) {}

  std::size_t read(std::span<StreamPair> out) override {
    std::size_t n = 0;
    while (n < out.size() && std::getline(in_, line_)) {
      ++line_no_;
      std::string_view s = trim(line_);
      if (s.empty()) continue;
      const auto comma = s.find(',');
      if (comma == std::string_view::npos) fail("expected two fields");
      out[n++] = {field(s.substr(0, comma)), field(s.substr(comma + 1))};
    }
    return n;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
      s.remove_suffix(1);
    }
    return s;
  }

  std::uint32_t field(std::string_view s) const {
    s = trim(s);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      fail("field is not an unsigned 32-bit integer: '" + std::string(s) + "'");
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw parse_error("csv line " + std::to_string(line_no_) + ": " + why,
                      line_no_);
  }

  std::istream& in_;
  std::string line_;
  std::uint64_t line_no_ = 0;
};

inline std::unique_ptr<PairReader> make_pair_reader(std::istream& in,
                                                    PairFormat format) {
  if (format == PairFormat::csv) return std::make_unique<CsvPairReader>(in);
  return std::make_unique<BinaryPairReader>(in);
}

inline std::vector<StreamPair> read_all_pairs(std::istream& in,
                                              PairFormat format) {
  auto reader = make_pair_reader(in, format);
  std::vector<StreamPair> all;
  std::array<StreamPair, 4096> chunk;
  while (const std::size_t n = reader->read(chunk)) {
    all.insert(all.end(), chunk.begin(), chunk.begin() + n);
  }
  return all;
}

}  // namespace chh
