#pragma once

// Cascaded Space Saving for correlated heavy hitters: one Space Saving
// summary over primary items and an independent one over (primary, secondary)
// tuples. Neither summary is nested inside the other, so a primary eviction
// never has to discard tuple state.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>

#include "chh/errors.hpp"
#include "chh/keys.hpp"
#include "chh/report.hpp"
#include "chh/space_saving.hpp"

namespace chh {

struct Thresholds {
  double phi1 = 0;
  double phi2 = 0;

  void validate() const {
    if (!(phi1 > 0 && phi1 < 1) || !(phi2 > 0 && phi2 < 1)) {
      throw invalid_params("thresholds must satisfy 0 < phi < 1");
    }
  }
};

/// Support thresholds and error tolerances of the approximate problem.
struct ChhParams {
  double phi1 = 0;
  double phi2 = 0;
  double eps1 = 0;
  double eps2 = 0;

  Thresholds thresholds() const noexcept { return {phi1, phi2}; }

  void validate() const {
    thresholds().validate();
    if (!(eps1 > 0 && eps1 < phi1)) {
      throw invalid_params("eps1 must satisfy 0 < eps1 < phi1");
    }
    if (!(eps2 > 0 && eps2 < phi2)) {
      throw invalid_params("eps2 must satisfy 0 < eps2 < phi2");
    }
  }
};

struct ChhSizing {
  double beta = 0;
  double gamma = 0;
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
};

namespace detail {

// Ceiling that ignores binary floating-point noise on values that are
// integral in decimal (1 / 0.001 must give 1000, not 1001).
inline std::uint64_t ceil_count(double x) {
  const double slack = 1e-9 * std::max(1.0, std::abs(x));
  return static_cast<std::uint64_t>(std::ceil(x - slack));
}

}  // namespace detail

/// Minimal (k1, k2) meeting both error tolerances:
///   beta  = 1 / (eps2 phi1)
///   gamma = (eps2 + phi2) / (eps2 phi1)
///   k1    = ceil(max(1/eps1, gamma + sqrt(beta gamma)))
///   k2    = ceil(beta k1 / (k1 - gamma)),  using the integer k1.
inline ChhSizing chh_sizing(const ChhParams& p) {
  p.validate();
  ChhSizing s;
  s.beta = 1.0 / (p.eps2 * p.phi1);
  s.gamma = (p.eps2 + p.phi2) / (p.eps2 * p.phi1);
  const double k1_real =
      std::max(1.0 / p.eps1, s.gamma + std::sqrt(s.beta * s.gamma));
  s.k1 = detail::ceil_count(k1_real);
  const double k1 = static_cast<double>(s.k1);
  s.k2 = detail::ceil_count(s.beta * k1 / (k1 - s.gamma));
  return s;
}

/// Lower bound on the tuple error coefficient: every reported tuple has
/// f_xy > (phi2 - tuple_error_factor) f_x. Requires k1 phi1 > 1.
inline double tuple_error_factor(std::uint64_t k1, std::uint64_t k2,
                                 double phi1, double phi2) {
  const double a = static_cast<double>(k1);
  const double b = static_cast<double>(k2);
  return (b * phi2 + a) / (b * (a * phi1 - 1.0));
}

class CsschhSketch {
 public:
  using PrimarySummary = StreamSummary<Item, ItemHash>;
  using TupleSummary = StreamSummary<PairKey, PairKeyHash>;

  /// Explicit capacities; thresholds must then be supplied at query time.
  CsschhSketch(std::uint64_t k1, std::uint64_t k2)
      : primary_(k1), tuples_(k2) {}

  /// Sized from the error tolerances; the thresholds become query defaults.
  explicit CsschhSketch(const ChhParams& p)
      : CsschhSketch(chh_sizing(p), p.thresholds()) {}

  std::uint64_t k1() const noexcept { return primary_.capacity(); }
  std::uint64_t k2() const noexcept { return tuples_.capacity(); }
  Count n() const noexcept { return n_; }
  const std::optional<Thresholds>& default_thresholds() const noexcept {
    return defaults_;
  }

  const PrimarySummary& primary_summary() const noexcept { return primary_; }
  const TupleSummary& tuple_summary() const noexcept { return tuples_; }

  void update(Item x, Item y) {
    const PairKey key{x, y};
    const auto h = TupleSummary::hash(key);
    tuples_.prefetch(h);
    primary_.update(x);
    tuples_.update_hashed(key, h);
    ++n_;
  }

  /// Queries with the thresholds given at construction.
  ChhReport query() const {
    if (!defaults_) {
      throw invalid_params("sketch built from explicit capacities: pass phi1, phi2");
    }
    return query(*defaults_);
  }

  /// Primary candidates: f^_r > phi1 N. Tuples (r, s): r is a candidate and
  /// f^_rs > phi2 (f^_r - N / k1). Both comparisons are strict and done in
  /// double precision.
  ChhReport query(Thresholds t) const {
    t.validate();
    ChhReport report;
    const double total = static_cast<double>(n_);
    const double primary_cut = t.phi1 * total;
    std::unordered_map<Item, Count, ItemHash> frequent;
    primary_.for_each([&](Item r, Count f) {
      if (static_cast<double>(f) > primary_cut) {
        frequent.emplace(r, f);
        report.primaries.push_back({r, f});
      }
    });
    if (frequent.empty()) return report;
    const double slack = total / static_cast<double>(k1());
    tuples_.for_each([&](const PairKey& key, Count f) {
      auto it = frequent.find(key.primary);
      if (it == frequent.end()) return;
      const double cut = t.phi2 * (static_cast<double>(it->second) - slack);
      if (static_cast<double>(f) > cut) {
        report.chhs.push_back({key.primary, key.secondary, f});
      }
    });
    return report;
  }

  /// Modeled footprint with 32-bit items and 64-bit counts: 12 bytes per
  /// primary counter, 16 per tuple counter.
  std::uint64_t space_bytes_model() const noexcept {
    return 12 * k1() + 16 * k2();
  }

 private:
  CsschhSketch(const ChhSizing& s, Thresholds t)
      : primary_(s.k1), tuples_(s.k2), defaults_(t) {}

  PrimarySummary primary_;
  TupleSummary tuples_;
  Count n_ = 0;
  std::optional<Thresholds> defaults_;
};

}  // namespace chh
