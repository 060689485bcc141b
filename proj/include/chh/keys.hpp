#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "chh/random.hpp"

namespace chh {

using Item = std::uint64_t;
using Count = std::uint64_t;

/// A (primary, secondary) tuple treated as one atomic 128-bit item.
struct PairKey {
  Item primary = 0;
  Item secondary = 0;

  friend bool operator==(const PairKey&, const PairKey&) = default;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    return static_cast<std::size_t>(mix64(k.primary ^ mix64(k.secondary)));
  }
};

/// Hash for 64-bit items. std::hash<uint64_t> is the identity on libstdc++,
/// which clusters badly for structured keys.
struct ItemHash {
  std::size_t operator()(Item v) const noexcept {
    return static_cast<std::size_t>(mix64(v));
  }
};

}  // namespace chh

template <>
struct std::hash<chh::PairKey> : chh::PairKeyHash {};
