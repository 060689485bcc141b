#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chh/csschh.hpp"
#include "chh/datagen.hpp"
#include "chh/evaluation.hpp"
#include "chh/pair_io.hpp"
#include "chh/report_io.hpp"

namespace chh::cli {

enum class Algorithm { csschh, mgchh, exact };

Algorithm parse_algorithm(const std::string& name);
const char* algorithm_name(Algorithm a);

/// Bad flag combination; maps to exit code 2.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// How counter capacities are chosen. Exactly one mode may be given:
/// tolerances (eps1, eps2), explicit counters (k1/k2 and/or s1/s2), or an
/// equal-space byte budget.
struct SizingOptions {
  std::optional<double> eps1, eps2;
  std::optional<std::uint64_t> k1, k2, s1, s2;
  std::optional<std::uint64_t> space_bytes;
  std::uint64_t space_ratio = kDefaultPrimaryRatio;

  /// Throws usage_error unless exactly one mode is present.
  void check_single_mode() const;
};

/// Capacities resolved for one algorithm: (k1, k2) or (s1, s2).
struct Capacities {
  std::uint64_t first = 0;
  std::uint64_t second = 0;
};

Capacities resolve_capacities(Algorithm algo, const SizingOptions& sizing,
                              Thresholds t);

struct RunConfig {
  Algorithm algorithm = Algorithm::csschh;
  SizingOptions sizing;
  Thresholds thresholds{0.01, 0.1};
  std::string input = "-";
  PairFormat input_format = PairFormat::binary;
  std::uint64_t seed = 1;
  ReportFormat report_format = ReportFormat::json;
  std::string out = "-";
  bool pipelined = false;
  bool exact_column = false;
};

/// Streams the input through one algorithm and writes its report.
void cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct CompareConfig {
  std::vector<Algorithm> algorithms{Algorithm::csschh, Algorithm::mgchh};
  SizingOptions sizing;
  Thresholds thresholds{0.01, 0.1};
  std::string input = "-";
  PairFormat input_format = PairFormat::binary;
  std::uint64_t seed = 1;
  int timing_runs = 3;
  ReportFormat report_format = ReportFormat::json;
  std::string out = "-";
  std::uint64_t oracle_cap = 100'000'000;
};

struct ComparisonRow {
  Algorithm algorithm;
  Capacities capacities;
  EvalResult result;
};

/// Runs the oracle once and scores every algorithm against it.
std::vector<ComparisonRow> compare_on(std::span<const StreamPair> stream,
                                      const std::vector<Algorithm>& algorithms,
                                      const SizingOptions& sizing, Thresholds t,
                                      std::uint64_t seed, int timing_runs,
                                      std::uint64_t oracle_cap, std::ostream& err);

void cmd_compare(const CompareConfig& cfg, std::ostream& out, std::ostream& err);

struct GenerateConfig {
  StreamSpec spec;
  PairFormat format = PairFormat::binary;
  std::string out = "-";
};

void cmd_generate(const GenerateConfig& cfg, std::ostream& out);

enum class SweepAxis { n, rho, space, phi1, phi2 };

SweepAxis parse_axis(const std::string& name);

struct SweepConfig {
  SweepAxis axis = SweepAxis::rho;
  std::vector<double> values;
  StreamSpec base;
  SizingOptions sizing;
  Thresholds thresholds{0.01, 0.1};
  std::vector<Algorithm> algorithms{Algorithm::csschh, Algorithm::mgchh};
  int trials = 10;
  int timing_runs = 3;
  std::string out = "-";
};

inline constexpr const char* kSweepCsvPrefix =
    "axis,value,trial,seed,algo,n,rho,phi1,phi2,c1,c2,truth_size,reported,";

/// One CSV row per (value, trial, algorithm); trial t uses seed base.seed + t.
void cmd_sweep(const SweepConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Returns the process exit code: 0 on success,
/// 1 on runtime errors (I/O, malformed input), 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace chh::cli
