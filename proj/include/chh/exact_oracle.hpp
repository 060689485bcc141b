#pragma once

#include <cstddef>
#include <unordered_map>

#include "chh/csschh.hpp"
#include "chh/keys.hpp"
#include "chh/report.hpp"

namespace chh {

/// Exact f_x and f_xy for every item seen. Memory grows with the number of
/// distinct pairs.
class ExactCounts {
 public:
  void update(Item x, Item y) {
    ++fx_[x];
    ++fxy_[PairKey{x, y}];
    ++n_;
  }

  Count n() const noexcept { return n_; }
  std::size_t distinct_primaries() const noexcept { return fx_.size(); }
  std::size_t distinct_pairs() const noexcept { return fxy_.size(); }

  Count fx(Item x) const {
    auto it = fx_.find(x);
    return it == fx_.end() ? 0 : it->second;
  }

  Count fxy(Item x, Item y) const {
    auto it = fxy_.find(PairKey{x, y});
    return it == fxy_.end() ? 0 : it->second;
  }

  const std::unordered_map<Item, Count, ItemHash>& primaries() const noexcept {
    return fx_;
  }
  const std::unordered_map<PairKey, Count, PairKeyHash>& pairs() const noexcept {
    return fxy_;
  }

  /// Exact answer: primaries with f_x > phi1 N, tuples of those primaries
  /// with f_xy > phi2 f_x. Frequencies in the report are exact.
  ChhReport echh(Thresholds t) const {
    t.validate();
    ChhReport report;
    const double cut = t.phi1 * static_cast<double>(n_);
    for (const auto& [x, f] : fx_) {
      if (static_cast<double>(f) > cut) report.primaries.push_back({x, f});
    }
    if (report.primaries.empty()) return report;
    std::unordered_map<Item, Count, ItemHash> frequent;
    for (const auto& p : report.primaries) frequent.emplace(p.item, p.freq);
    for (const auto& [key, f] : fxy_) {
      auto it = frequent.find(key.primary);
      if (it == frequent.end()) continue;
      if (static_cast<double>(f) > t.phi2 * static_cast<double>(it->second)) {
        report.chhs.push_back({key.primary, key.secondary, f});
      }
    }
    return report;
  }

 private:
  Count n_ = 0;
  std::unordered_map<Item, Count, ItemHash> fx_;
  std::unordered_map<PairKey, Count, PairKeyHash> fxy_;
};

}  // namespace chh
