#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "chh/datagen.hpp"
#include "chh/errors.hpp"
#include "chh/keys.hpp"
#include "chh/report.hpp"

namespace chh {

/// Accuracy of a report against the exact answer, plus optional throughput
/// and modeled space. Errors are measured over reported tuples that are true
/// correlated heavy hitters.
struct EvalResult {
  double recall = 1;
  double precision = 1;
  double abs_err_max = 0;
  double abs_err_mean = 0;
  double rel_err_max = 0;
  double rel_err_mean = 0;
  double updates_per_ms = 0;
  std::uint64_t space_bytes_model = 0;
  std::uint64_t reported = 0;
  std::uint64_t true_positives = 0;
  std::uint64_t truth_size = 0;
};

/// `truth` must come from the exact oracle on the same stream and thresholds.
inline EvalResult score(const ChhReport& report, const ChhReport& truth) {
  std::unordered_map<PairKey, Count, PairKeyHash> exact;
  exact.reserve(truth.chhs.size());
  for (const auto& e : truth.chhs) exact.emplace(e.key(), e.freq);

  EvalResult r;
  r.reported = report.chhs.size();
  r.truth_size = truth.chhs.size();
  double abs_sum = 0;
  double rel_sum = 0;
  for (const auto& e : report.chhs) {
    auto it = exact.find(e.key());
    if (it == exact.end()) continue;
    ++r.true_positives;
    const double f = static_cast<double>(it->second);
    const double err = std::abs(f - static_cast<double>(e.freq));
    abs_sum += err;
    rel_sum += err / f;
    r.abs_err_max = std::max(r.abs_err_max, err);
    r.rel_err_max = std::max(r.rel_err_max, err / f);
  }
  const auto hits = static_cast<double>(r.true_positives);
  r.recall = r.truth_size == 0 ? 1.0 : hits / static_cast<double>(r.truth_size);
  r.precision = r.reported == 0 ? 1.0 : hits / static_cast<double>(r.reported);
  if (r.true_positives > 0) {
    r.abs_err_mean = abs_sum / hits;
    r.rel_err_mean = rel_sum / hits;
  }
  return r;
}

/// Counter counts giving both algorithms the same modeled footprint:
/// 12 k1 + 16 k2 == 12 (s1 + s1 s2) == bytes, with k1 == s1.
struct SpaceConfig {
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
  std::uint64_t bytes = 0;

  friend bool operator==(const SpaceConfig&, const SpaceConfig&) = default;
};

/// Primary counters per secondary counter in the reference configurations
/// (4200/20, 8400/40, 16800/80, 33600/160).
inline constexpr std::uint64_t kDefaultPrimaryRatio = 210;

/// Largest configuration with s1 = ratio * s2 that fits in `budget` bytes and
/// has an integral k2 = 3 s1 s2 / 4. The returned `bytes` may be below the
/// budget when the budget is not exactly realizable.
inline SpaceConfig equal_space_config(std::uint64_t budget,
                                      std::uint64_t ratio = kDefaultPrimaryRatio) {
  if (ratio == 0) throw invalid_params("primary ratio must be at least 1");
  auto bytes_for = [&](std::uint64_t s2) { return 12 * ratio * s2 * (s2 + 1); };
  // bytes_for is increasing in s2; bound it by the square root first.
  auto s2 = static_cast<std::uint64_t>(
      std::sqrt(static_cast<double>(budget) / (12.0 * static_cast<double>(ratio))));
  while (s2 > 0 && bytes_for(s2) > budget) --s2;
  while (bytes_for(s2 + 1) <= budget) ++s2;
  for (; s2 >= 1; --s2) {
    const std::uint64_t s1 = ratio * s2;
    if ((3 * s1 * s2) % 4 == 0) {
      SpaceConfig c{s1, 3 * s1 * s2 / 4, s1, s2, bytes_for(s2)};
      return c;
    }
  }
  throw infeasible_space("byte budget too small for an equal-space configuration");
}

struct ThroughputStats {
  double median = 0;
  double min = 0;
  double max = 0;
  std::vector<double> runs;
};

/// Times only the update loop. `make` builds a fresh sketch per run (outside
/// the timed region); the sketch must expose update(x, y). Reports updates
/// per millisecond.
template <typename MakeSketch>
ThroughputStats measure_throughput(MakeSketch&& make,
                                   std::span<const StreamPair> stream,
                                   int runs = 3) {
  if (stream.empty()) throw empty_stream("cannot time an empty stream");
  if (runs < 1) runs = 1;
  ThroughputStats t;
  for (int i = 0; i < runs; ++i) {
    auto sketch = make();
    const auto start = std::chrono::steady_clock::now();
    for (const auto& p : stream) sketch.update(p.x, p.y);
    const auto stop = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    t.runs.push_back(static_cast<double>(stream.size()) / std::max(ms, 1e-9));
  }
  std::vector<double> sorted = t.runs;
  std::sort(sorted.begin(), sorted.end());
  t.min = sorted.front();
  t.max = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  t.median = sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
  return t;
}

}  // namespace chh
