#include <gtest/gtest.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chh/misra_gries.hpp"
#include "chh/random.hpp"

namespace {

using chh::Count;
using Summary = chh::MgSummary<std::uint64_t>;

std::map<std::uint64_t, Count> state(const Summary& s) {
  std::map<std::uint64_t, Count> m;
  for (const auto& e : s.entries()) m[e.item] = e.count;
  return m;
}

Summary feed(std::size_t k, const std::string& stream) {
  Summary s(k);
  for (char c : stream) s.update(static_cast<std::uint64_t>(c));
  return s;
}

TEST(MgSummary, ZeroCapacityRejected) {
  EXPECT_THROW(Summary(0), chh::invalid_capacity);
}

TEST(MgSummary, DecrementAllOnOverflow) {
  EXPECT_EQ(state(feed(2, "abac")), (std::map<std::uint64_t, Count>{{'a', 1}}));
}

TEST(MgSummary, NoContention) {
  EXPECT_EQ(state(feed(2, "aa")), (std::map<std::uint64_t, Count>{{'a', 2}}));
}

TEST(MgSummary, SingleCounterTrace) {
  // 'a' is decremented away by the first 'b'; the second 'b' is installed.
  EXPECT_EQ(state(feed(1, "abb")), (std::map<std::uint64_t, Count>{{'b', 1}}));
}

TEST(MgSummary, HookFiresOnlyForSurvivors) {
  auto s = feed(2, "aab");
  std::vector<std::uint64_t> seen;
  s.decrement_all([&](std::uint64_t item, Count, chh::NoPayload&) { seen.push_back(item); });
  EXPECT_EQ(state(s), (std::map<std::uint64_t, Count>{{'a', 1}}));
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{'a'}));
}

TEST(MgSummary, HookNeverFiresWhenEmptyOrAllEvicted) {
  Summary empty(3);
  int calls = 0;
  auto hook = [&](std::uint64_t, Count, chh::NoPayload&) { ++calls; };
  empty.decrement_all(hook);
  EXPECT_TRUE(empty.empty());

  auto single = feed(3, "a");
  single.decrement_all(hook);
  EXPECT_TRUE(single.empty());
  EXPECT_EQ(calls, 0);
}

TEST(MgSummary, PayloadTravelsWithEntry) {
  chh::MgSummary<std::uint64_t, std::string> s(3);
  s.install(1, "one");
  s.install(2, "two");
  s.install(3, "three");
  s.find(3)->count = 5;
  // Evicting 1 and 2 swap-removes; 3's payload must follow it.
  s.decrement_all([](std::uint64_t, Count, std::string&) {});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.find(3)->payload, "three");
  EXPECT_EQ(s.find(3)->count, 4u);
  EXPECT_TRUE(s.check_invariants());
}

TEST(MgSummary, UnderestimationBounds) {
  chh::Pcg32 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t k = 1 + rng.bounded(32);
    const std::uint32_t universe = 2 + rng.bounded(300);
    const int n = 1 + static_cast<int>(rng.bounded(10000));
    Summary s(k);
    std::map<std::uint64_t, Count> exact;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform01();
      const auto v = static_cast<std::uint64_t>(u * u * universe);
      s.update(v);
      ++exact[v];
      ASSERT_LE(s.size(), k);
    }
    for (const auto& [v, f] : exact) {
      const Count est = s.estimate(v);
      ASSERT_LE(est, f);
      // Contract bound N/k, and the tighter N/(k+1).
      ASSERT_LE((f - est) * k, static_cast<Count>(n));
      ASSERT_LE((f - est) * (k + 1), static_cast<Count>(n));
    }
    ASSERT_TRUE(s.check_invariants());
  }
}

}  // namespace
