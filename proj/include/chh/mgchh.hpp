#pragma once

// Nested Misra-Gries baseline for correlated heavy hitters. Each monitored
// primary d carries its own Misra-Gries summary H_d over the secondaries that
// arrived with it.

#include <cstdint>

#include "chh/csschh.hpp"
#include "chh/errors.hpp"
#include "chh/keys.hpp"
#include "chh/misra_gries.hpp"
#include "chh/random.hpp"
#include "chh/report.hpp"

namespace chh {

struct MgchhSizing {
  double alpha = 0;
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
};

/// With alpha = (1 + phi2) / (phi1 - eps1):
///   eps1 >= eps2 / (2 alpha):  s1 = 2 alpha / eps2,  s2 = 2 / eps2
///   otherwise:                 s1 = 1 / eps1,        s2 = 1 / (eps2 - alpha eps1)
/// rounded up. Also requires eps1 <= phi1 / 2.
inline MgchhSizing mgchh_sizing(const ChhParams& p) {
  p.validate();
  if (p.eps1 > p.phi1 / 2) {
    throw invalid_params("mgchh requires eps1 <= phi1 / 2");
  }
  MgchhSizing s;
  s.alpha = (1.0 + p.phi2) / (p.phi1 - p.eps1);
  if (p.eps1 >= p.eps2 / (2.0 * s.alpha)) {
    s.s1 = detail::ceil_count(2.0 * s.alpha / p.eps2);
    s.s2 = detail::ceil_count(2.0 / p.eps2);
  } else {
    s.s1 = detail::ceil_count(1.0 / p.eps1);
    s.s2 = detail::ceil_count(1.0 / (p.eps2 - s.alpha * p.eps1));
  }
  return s;
}

class MgchhSketch {
 public:
  using Secondary = MgSummary<Item, NoPayload, ItemHash>;

  struct PrimaryState {
    Secondary secondary;
  };

  using Primary = MgSummary<Item, PrimaryState, ItemHash>;

  static constexpr std::uint64_t kDefaultSeed = 0x5eed;

  MgchhSketch(std::uint64_t s1, std::uint64_t s2,
              std::uint64_t seed = kDefaultSeed)
      : s2_(s2), table_(s1), rng_(seed) {
    if (s2 == 0) throw invalid_capacity("mgchh s2 must be at least 1");
  }

  explicit MgchhSketch(const ChhParams& p, std::uint64_t seed = kDefaultSeed)
      : MgchhSketch(mgchh_sizing(p), seed) {
    defaults_ = p.thresholds();
  }

  std::uint64_t s1() const noexcept { return table_.capacity(); }
  std::uint64_t s2() const noexcept { return s2_; }
  Count n() const noexcept { return n_; }
  const Primary& table() const noexcept { return table_; }

  void update(Item x, Item y) {
    ++n_;
    if (auto* d = table_.find(x)) {
      ++d->count;
      Secondary& h = d->payload.secondary;
      if (auto* e = h.find(y)) {
        ++e->count;
      } else if (!h.full()) {
        h.install(y, NoPayload{});
      } else {
        h.decrement_all([](Item, Count, NoPayload&) {});
      }
      return;
    }
    if (!table_.full()) {
      auto& d = table_.install(x, PrimaryState{Secondary(s2_)});
      d.payload.secondary.install(y, NoPayload{});
      return;
    }
    // Surviving primaries also lose one unit from a random secondary so that
    // the secondary counts never sum past the primary count.
    table_.decrement_all([this](Item, Count, PrimaryState& st) {
      Secondary& h = st.secondary;
      if (h.empty()) return;
      h.decrement_at(rng_.bounded(static_cast<std::uint32_t>(h.size())));
    });
  }

  ChhReport query() const {
    if (!defaults_) {
      throw invalid_params("sketch built from explicit capacities: pass phi1, phi2");
    }
    return query(*defaults_);
  }

  /// Primaries: f^_d >= (phi1 - 1/s1) N. Tuples (d, t):
  /// f^_dt >= (phi2 - 1/s2) f^_d - N/s1. Non-strict comparisons.
  ChhReport query(Thresholds t) const {
    t.validate();
    ChhReport report;
    const double total = static_cast<double>(n_);
    const double inv_s1 = 1.0 / static_cast<double>(s1());
    const double inv_s2 = 1.0 / static_cast<double>(s2_);
    const double primary_cut = (t.phi1 - inv_s1) * total;
    for (const auto& d : table_.entries()) {
      const double fd = static_cast<double>(d.count);
      if (fd < primary_cut) continue;
      report.primaries.push_back({d.item, d.count});
      const double cut = (t.phi2 - inv_s2) * fd - total * inv_s1;
      for (const auto& e : d.payload.secondary.entries()) {
        if (static_cast<double>(e.count) >= cut) {
          report.chhs.push_back({d.item, e.item, e.count});
        }
      }
    }
    return report;
  }

  /// 12 bytes per counter, s1 primary counters each with s2 secondaries.
  std::uint64_t space_bytes_model() const noexcept {
    return 12 * (s1() + s1() * s2_);
  }

  /// Capacity bounds plus sum over H_d <= f^_d for every monitored d.
  bool check_invariants() const {
    if (!table_.check_invariants()) return false;
    for (const auto& d : table_.entries()) {
      const Secondary& h = d.payload.secondary;
      if (h.capacity() != s2_ || !h.check_invariants()) return false;
      if (h.total() > d.count) return false;
    }
    return true;
  }

 private:
  MgchhSketch(const MgchhSizing& s, std::uint64_t seed)
      : MgchhSketch(s.s1, s.s2, seed) {}

  std::uint64_t s2_;
  Primary table_;
  Pcg32 rng_;
  Count n_ = 0;
  std::optional<Thresholds> defaults_;
};

}  // namespace chh
