#pragma once

// Space Saving over a "stream summary": counters are grouped into buckets of
// equal frequency, and buckets form a doubly linked list in ascending order of
// frequency. Every update touches at most two adjacent buckets, so the cost
// does not depend on the capacity.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "chh/errors.hpp"
#include "chh/keys.hpp"
#include "chh/slot_index.hpp"

namespace chh {

template <typename T>
struct Counter {
  T item;
  Count freq;
};

template <typename T, typename Hash = std::hash<T>>
class StreamSummary {
 public:
  using item_type = T;
  using counter_type = Counter<T>;

  explicit StreamSummary(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
      throw invalid_capacity("stream summary capacity must be at least 1");
    }
    if (capacity >= kNil) {
      throw invalid_capacity("stream summary capacity too large");
    }
    slots_.resize(capacity);
    buckets_.resize(capacity);
    free_buckets_.reserve(capacity);
    for (std::size_t i = capacity; i-- > 0;) {
      free_buckets_.push_back(static_cast<Index>(i));
    }
    index_ = Index_(capacity);
  }

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return occupied_; }
  bool full() const noexcept { return occupied_ == capacity_; }
  bool empty() const noexcept { return occupied_ == 0; }

  /// Number of items processed since construction.
  Count processed() const noexcept { return processed_; }

  /// Bucket-list link/unlink operations performed so far. Tests use it to
  /// check that update cost is independent of the capacity.
  std::uint64_t bucket_ops() const noexcept { return bucket_ops_; }

  void update(const T& item) { update_hashed(item, Index_::hash(item)); }

  /// Hash of `item` as used by the index; lets callers prefetch ahead.
  static std::uint64_t hash(const T& item) { return Index_::hash(item); }

  void prefetch(std::uint64_t h) const { index_.prefetch(h); }

  /// update(item) for a precomputed h == hash(item).
  void update_hashed(const T& item, std::uint64_t h) {
    ++processed_;
    const Index found = index_.find(item, h, item_of());
    if (found != kNil) {
      increment(found);
      return;
    }
    if (occupied_ < capacity_) {
      const auto slot = static_cast<Index>(occupied_++);
      slots_[slot].item = item;
      slots_[slot].tag = static_cast<std::uint32_t>(h);
      index_.insert(h, slot);
      insert_with_unit_freq(slot);
      return;
    }
    // Full: take over the least recently arrived counter of the minimum bucket.
    const Index slot = buckets_[min_bucket_].head;
    index_.erase(slots_[slot].tag, slot);
    slots_[slot].item = item;
    slots_[slot].tag = static_cast<std::uint32_t>(h);
    index_.insert(h, slot);
    increment(slot);
    // The next eviction takes the new head of the minimum bucket.
    const Index next_victim = buckets_[min_bucket_].head;
    __builtin_prefetch(&slots_[next_victim]);
    if (slots_[next_victim].next != kNil) __builtin_prefetch(&slots_[slots_[next_victim].next]);
  }

  /// Estimated frequency of a monitored item; nullopt when unmonitored.
  std::optional<Count> estimate(const T& item) const {
    const Index slot = index_.find(item, Index_::hash(item), item_of());
    if (slot == kNil) return std::nullopt;
    return buckets_[slots_[slot].bucket].freq;
  }

  /// Upper bound on the frequency of any item, monitored or not.
  Count upper_bound(const T& item) const {
    return estimate(item).value_or(min_freq());
  }

  /// Minimum monitored frequency, or 0 while free slots remain.
  Count min_freq() const noexcept {
    if (!full()) return 0;
    return buckets_[min_bucket_].freq;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < occupied_; ++i) {
      f(slots_[i].item, buckets_[slots_[i].bucket].freq);
    }
  }

  std::vector<counter_type> counters() const {
    std::vector<counter_type> out;
    out.reserve(occupied_);
    for_each([&](const T& item, Count f) { out.push_back({item, f}); });
    return out;
  }

  /// Counters in descending frequency order (walks the bucket list).
  std::vector<counter_type> counters_by_freq() const {
    std::vector<counter_type> out;
    out.reserve(occupied_);
    for (Index b = max_bucket_; b != kNil; b = buckets_[b].prev) {
      for (Index c = buckets_[b].head; c != kNil; c = slots_[c].next) {
        out.push_back({slots_[c].item, buckets_[b].freq});
      }
    }
    return out;
  }

  /// Sum of all monitored frequencies, O(k).
  Count total() const noexcept {
    Count sum = 0;
    for_each([&](const T&, Count f) { sum += f; });
    return sum;
  }

  /// Full structural check: bucket ordering, membership, lookup bijection and
  /// the sum law. O(k); for tests.
  bool check_invariants() const {
    if (occupied_ > capacity_ || index_.size() != occupied_) return false;
    std::size_t seen = 0;
    Count sum = 0;
    Count last = 0;
    Index prev = kNil;
    for (Index b = min_bucket_; b != kNil; b = buckets_[b].next) {
      const Bucket& bk = buckets_[b];
      if (bk.prev != prev || bk.freq <= last || bk.head == kNil) return false;
      Index pc = kNil;
      for (Index c = bk.head; c != kNil; c = slots_[c].next) {
        if (slots_[c].bucket != b || slots_[c].prev != pc) return false;
        if (index_.find(slots_[c].item, Index_::hash(slots_[c].item), item_of()) != c) {
          return false;
        }
        if (++seen > occupied_) return false;
        sum += bk.freq;
        pc = c;
      }
      if (bk.tail != pc) return false;
      last = bk.freq;
      prev = b;
    }
    return prev == max_bucket_ && seen == occupied_ && sum == processed_;
  }

 private:
  using Index = std::uint32_t;
  static constexpr Index kNil = std::numeric_limits<Index>::max();

  struct Slot {
    T item{};
    Index bucket = kNil;
    Index prev = kNil;
    Index next = kNil;
    std::uint32_t tag = 0;  // low hash bits, for removal from the index
  };

  struct Bucket {
    Count freq = 0;
    Index head = kNil;
    Index tail = kNil;
    Index prev = kNil;
    Index next = kNil;
  };

  Index new_bucket(Count freq, Index after) {
    const Index b = free_buckets_.back();
    free_buckets_.pop_back();
    Bucket& bk = buckets_[b];
    bk.freq = freq;
    bk.head = bk.tail = kNil;
    bk.prev = after;
    bk.next = after == kNil ? min_bucket_ : buckets_[after].next;
    if (bk.next != kNil) {
      buckets_[bk.next].prev = b;
    } else {
      max_bucket_ = b;
    }
    if (after != kNil) {
      buckets_[after].next = b;
    } else {
      min_bucket_ = b;
    }
    ++bucket_ops_;
    return b;
  }

  void free_bucket(Index b) {
    Bucket& bk = buckets_[b];
    if (bk.prev != kNil) {
      buckets_[bk.prev].next = bk.next;
    } else {
      min_bucket_ = bk.next;
    }
    if (bk.next != kNil) {
      buckets_[bk.next].prev = bk.prev;
    } else {
      max_bucket_ = bk.prev;
    }
    free_buckets_.push_back(b);
    ++bucket_ops_;
  }

  void append(Index b, Index c) {
    Bucket& bk = buckets_[b];
    Slot& s = slots_[c];
    s.bucket = b;
    s.prev = bk.tail;
    s.next = kNil;
    if (bk.tail != kNil) {
      slots_[bk.tail].next = c;
    } else {
      bk.head = c;
    }
    bk.tail = c;
    ++bucket_ops_;
  }

  void unlink(Index c) {
    Slot& s = slots_[c];
    Bucket& bk = buckets_[s.bucket];
    if (s.prev != kNil) {
      slots_[s.prev].next = s.next;
    } else {
      bk.head = s.next;
    }
    if (s.next != kNil) {
      slots_[s.next].prev = s.prev;
    } else {
      bk.tail = s.prev;
    }
    ++bucket_ops_;
  }

  void insert_with_unit_freq(Index c) {
    Index b = min_bucket_;
    if (b == kNil || buckets_[b].freq != 1) b = new_bucket(1, kNil);
    append(b, c);
  }

  void increment(Index c) {
    const Index b = slots_[c].bucket;
    Bucket& bk = buckets_[b];
    const Count target = bk.freq + 1;
    const Index nb = bk.next;
    if (nb != kNil && buckets_[nb].freq == target) {
      unlink(c);
      append(nb, c);
      if (bk.head == kNil) free_bucket(b);
    } else if (bk.head == c && bk.tail == c) {
      // Sole occupant: the bucket itself moves up one step in place.
      bk.freq = target;
    } else {
      unlink(c);
      append(new_bucket(target, b), c);
    }
  }

  std::size_t capacity_;
  std::size_t occupied_ = 0;
  Count processed_ = 0;
  std::uint64_t bucket_ops_ = 0;
  std::vector<Slot> slots_;
  std::vector<Bucket> buckets_;
  std::vector<Index> free_buckets_;
  Index min_bucket_ = kNil;
  Index max_bucket_ = kNil;
  auto item_of() const {
    return [this](Index slot) -> const T& { return slots_[slot].item; };
  }

  using Index_ = detail::SlotIndex<T, Hash>;
  Index_ index_;
};

}  // namespace chh
