#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chh {

/// Capacity of a summary or sketch was zero.
class invalid_capacity : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thresholds or error bounds outside their admissible ranges.
class invalid_params : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No equal-space configuration fits in the requested byte budget.
class infeasible_space : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class empty_stream : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed pair input. `offset()` is a byte offset for binary input and a
/// 1-based line number for CSV input.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace chh
