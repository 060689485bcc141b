#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <absl/container/flat_hash_map.h>
#include <utility>
#include <vector>

#include "chh/errors.hpp"
#include "chh/keys.hpp"

namespace chh {

struct NoPayload {};

/// Misra-Gries (Frequent) summary with at most `capacity` positive counters.
/// Estimates never exceed the true frequency.
///
/// Entries live in a dense vector (swap-remove on eviction) so a uniformly
/// random entry can be drawn in O(1); an optional per-entry payload lets a
/// caller attach state that is destroyed together with the counter.
template <typename T, typename Payload = NoPayload, typename Hash = std::hash<T>>
class MgSummary {
 public:
  struct Entry {
    T item;
    Count count;
    Payload payload;
  };

  explicit MgSummary(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
      throw invalid_capacity("misra-gries capacity must be at least 1");
    }
  }

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool full() const noexcept { return entries_.size() == capacity_; }
  bool empty() const noexcept { return entries_.empty(); }

  Entry* find(const T& item) {
    auto it = index_.find(item);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }
  const Entry* find(const T& item) const {
    auto it = index_.find(item);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  Count estimate(const T& item) const {
    const Entry* e = find(item);
    return e ? e->count : 0;
  }

  /// Standard Frequent update: increment if monitored, install if there is
  /// room, otherwise decrement every counter. The arriving item is not
  /// installed in the decrementing step.
  void update(const T& item) {
    if (Entry* e = find(item)) {
      ++e->count;
    } else if (!full()) {
      install(item, Payload{});
    } else {
      decrement_all([](const T&, Count, Payload&) {});
    }
  }

  /// Installs `item` with count 1. Precondition: not monitored and not full.
  Entry& install(const T& item, Payload payload) {
    index_.emplace(item, entries_.size());
    entries_.push_back(Entry{item, 1, std::move(payload)});
    return entries_.back();
  }

  /// Decrements every counter by one and evicts those reaching zero; `hook`
  /// then runs on each surviving entry as hook(item, new_count, payload).
  template <typename Hook>
  void decrement_all(Hook&& hook) {
    std::size_t i = 0;
    while (i < entries_.size()) {
      Entry& e = entries_[i];
      if (--e.count == 0) {
        remove_at(i);
      } else {
        hook(e.item, e.count, e.payload);
        ++i;
      }
    }
  }

  /// Decrements a single entry by position, evicting it at zero.
  void decrement_at(std::size_t pos) {
    if (--entries_[pos].count == 0) remove_at(pos);
  }

  /// Entry at dense position `pos` in [0, size()); positions shift on eviction.
  Entry& at(std::size_t pos) { return entries_[pos]; }
  const Entry& at(std::size_t pos) const { return entries_[pos]; }

  const std::vector<Entry>& entries() const noexcept { return entries_; }

  Count total() const noexcept {
    Count sum = 0;
    for (const auto& e : entries_) sum += e.count;
    return sum;
  }

  bool check_invariants() const {
    if (entries_.size() > capacity_ || index_.size() != entries_.size()) {
      return false;
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].count == 0) return false;
      auto it = index_.find(entries_[i].item);
      if (it == index_.end() || it->second != i) return false;
    }
    return true;
  }

 private:
  void remove_at(std::size_t pos) {
    index_.erase(entries_[pos].item);
    if (pos + 1 != entries_.size()) {
      entries_[pos] = std::move(entries_.back());
      index_[entries_[pos].item] = pos;
    }
    entries_.pop_back();
  }

  std::size_t capacity_;
  std::vector<Entry> entries_;
  absl::flat_hash_map<T, std::size_t, Hash> index_;
};

}  // namespace chh
