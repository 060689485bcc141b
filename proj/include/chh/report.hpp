#pragma once

#include <algorithm>
#include <tuple>
#include <vector>

#include "chh/keys.hpp"

namespace chh {

struct PrimaryEntry {
  Item item = 0;
  Count freq = 0;

  friend bool operator==(const PrimaryEntry&, const PrimaryEntry&) = default;
};

struct ChhEntry {
  Item primary = 0;
  Item secondary = 0;
  Count freq = 0;

  PairKey key() const noexcept { return {primary, secondary}; }
  friend bool operator==(const ChhEntry&, const ChhEntry&) = default;
};

/// Result of a correlated heavy hitters query: the frequent primary
/// candidates and the correlated tuples, each with its frequency (estimated,
/// or exact when produced by the oracle). Every tuple's primary appears in
/// `primaries`.
struct ChhReport {
  std::vector<PrimaryEntry> primaries;
  std::vector<ChhEntry> chhs;

  bool empty() const noexcept { return primaries.empty() && chhs.empty(); }

  /// Canonical order: primaries by item, tuples by (primary, secondary).
  void sort() {
    std::sort(primaries.begin(), primaries.end(),
              [](const auto& a, const auto& b) { return a.item < b.item; });
    std::sort(chhs.begin(), chhs.end(), [](const auto& a, const auto& b) {
      return std::tie(a.primary, a.secondary) < std::tie(b.primary, b.secondary);
    });
  }

  friend bool operator==(const ChhReport&, const ChhReport&) = default;
};

}  // namespace chh
