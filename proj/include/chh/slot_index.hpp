#pragma once

// Open-addressing index from items to slot numbers for the counter arrays.
// Keys are not stored here: each entry is a slot number plus the low 32 bits
// of the item's hash, and the item itself is read from the caller's slots
// only when the hash bits agree. Linear probing with backward-shift deletion
// keeps the table free of tombstones under constant replacement.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace chh::detail {

template <typename T, typename Hash>
class SlotIndex {
 public:
  using Index = std::uint32_t;
  static constexpr Index kNone = ~Index{0};

  SlotIndex() = default;

  // At most `capacity` entries; the table is kept at most a quarter full.
  explicit SlotIndex(std::size_t capacity)
      : table_(std::bit_ceil(std::max<std::size_t>(4 * capacity, 8)), kEmpty),
        mask_(table_.size() - 1) {}

  std::size_t size() const noexcept { return size_; }

  static std::uint64_t hash(const T& item) { return static_cast<std::uint64_t>(Hash{}(item)); }

  void prefetch(std::uint64_t h) const { __builtin_prefetch(&table_[h & mask_]); }

  /// Slot holding `item`, or kNone. `item_of(slot)` reads a slot's item.
  template <typename ItemOf>
  Index find(const T& item, std::uint64_t h, const ItemOf& item_of) const {
    const auto tag = static_cast<std::uint32_t>(h);
    for (std::size_t i = h & mask_;; i = (i + 1) & mask_) {
      const std::uint64_t e = table_[i];
      if (e == kEmpty) return kNone;
      if (tag_of(e) == tag && item_of(slot_of(e)) == item) return slot_of(e);
    }
  }

  /// `item` must be absent.
  void insert(std::uint64_t h, Index slot) {
    std::size_t i = h & mask_;
    while (table_[i] != kEmpty) i = (i + 1) & mask_;
    table_[i] = pack(static_cast<std::uint32_t>(h), slot);
    ++size_;
  }

  /// Removes the entry for `slot`, whose item hashes to `h` (low 32 bits suffice).
  void erase(std::uint64_t h, Index slot) {
    std::size_t i = h & mask_;
    while (slot_of(table_[i]) != slot) i = (i + 1) & mask_;
    for (std::size_t j = (i + 1) & mask_;; j = (j + 1) & mask_) {
      const std::uint64_t e = table_[j];
      if (e == kEmpty) break;
      const std::size_t home = tag_of(e) & mask_;
      // Entry j may fill the hole at i unless its home lies cyclically in (i, j].
      const bool stays = i <= j ? (i < home && home <= j) : (i < home || home <= j);
      if (!stays) {
        table_[i] = e;
        i = j;
      }
    }
    table_[i] = kEmpty;
    --size_;
  }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  static std::uint64_t pack(std::uint32_t tag, Index slot) {
    return (std::uint64_t{tag} << 32) | slot;
  }
  static std::uint32_t tag_of(std::uint64_t e) { return static_cast<std::uint32_t>(e >> 32); }
  static Index slot_of(std::uint64_t e) { return static_cast<Index>(e); }

  std::vector<std::uint64_t> table_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace chh::detail
