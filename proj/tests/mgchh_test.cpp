#include <gtest/gtest.h>

#include <cstdint>
#include <map>
#include <set>
#include <utility>

#include "chh/datagen.hpp"
#include "chh/exact_oracle.hpp"
#include "chh/mgchh.hpp"

namespace {

using chh::ChhParams;
using chh::Count;
using chh::MgchhSketch;

using Table = std::map<chh::Item, std::pair<Count, std::map<chh::Item, Count>>>;

Table dump(const MgchhSketch& s) {
  Table t;
  for (const auto& d : s.table().entries()) {
    auto& row = t[d.item];
    row.first = d.count;
    for (const auto& e : d.payload.secondary.entries()) row.second[e.item] = e.count;
  }
  return t;
}

// Expected sizings evaluated independently with exact rational arithmetic.
TEST(MgchhSizing, FirstBranch) {
  const auto s = chh::mgchh_sizing({0.1, 0.1, 0.05, 0.05});
  EXPECT_DOUBLE_EQ(s.alpha, 22.0);
  EXPECT_EQ(s.s1, 880u);
  EXPECT_EQ(s.s2, 40u);
}

TEST(MgchhSizing, SecondBranch) {
  // alpha = 1.1 / 0.0995 = 2200/199; eps2 / (2 alpha) ~ 0.00226 > eps1.
  // s2 = ceil(1 / (0.05 - alpha * 0.0005)) = ceil(22.486) = 23.
  const auto s = chh::mgchh_sizing({0.1, 0.1, 0.0005, 0.05});
  EXPECT_NEAR(s.alpha, 2200.0 / 199.0, 1e-12);
  EXPECT_EQ(s.s1, 2000u);
  EXPECT_EQ(s.s2, 23u);
}

TEST(MgchhSizing, RejectsEpsOneAboveHalfPhiOne) {
  EXPECT_THROW(chh::mgchh_sizing({0.1, 0.1, 0.06, 0.05}), chh::invalid_params);
  EXPECT_THROW(chh::mgchh_sizing({0.1, 0.1, 0.2, 0.05}), chh::invalid_params);
}

TEST(MgchhSketch, Construction) {
  EXPECT_THROW(MgchhSketch(0, 4), chh::invalid_capacity);
  EXPECT_THROW(MgchhSketch(4, 0), chh::invalid_capacity);
  MgchhSketch s(4200, 20);
  EXPECT_EQ(s.space_bytes_model(), 1058400u);
  MgchhSketch sized(ChhParams{0.1, 0.1, 0.05, 0.05});
  EXPECT_EQ(sized.s1(), 880u);
  EXPECT_EQ(sized.s2(), 40u);
}

TEST(MgchhSketch, MonitoredPrimaryCases) {
  MgchhSketch s(4, 4);
  s.update('a', 'x');
  s.update('a', 'x');
  s.update('a', 'y');
  EXPECT_EQ(dump(s), (Table{{'a', {3, {{'x', 2}, {'y', 1}}}}}));
}

TEST(MgchhSketch, PrimaryDecrementDoesNotInstallArrival) {
  MgchhSketch s(1, 4);
  s.update('a', 'x');
  s.update('b', 'y');
  EXPECT_TRUE(dump(s).empty());
  EXPECT_EQ(s.n(), 2u);
}

TEST(MgchhSketch, SecondaryDecrementDoesNotInstallArrival) {
  MgchhSketch s(4, 1);
  s.update('a', 'x');
  s.update('a', 'y');
  EXPECT_EQ(dump(s), (Table{{'a', {2, {}}}}));
  s.update('a', 'y');
  EXPECT_EQ(dump(s), (Table{{'a', {3, {{'y', 1}}}}}));
}

TEST(MgchhSketch, CaseThreeDecrementsOneSecondaryPerSurvivor) {
  MgchhSketch s(2, 4);
  for (int i = 0; i < 3; ++i) s.update('a', 'x');
  s.update('a', 'y');
  s.update('b', 'z');
  s.update('c', 'w');  // a: 4 -> 3 plus one of {x, y}; b evicted
  auto t = dump(s);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t['a'].first, 3u);
  Count sum = 0;
  for (auto& [_, c] : t['a'].second) sum += c;
  EXPECT_EQ(sum, 3u);
}

TEST(MgchhSketch, EmptyQuery) {
  MgchhSketch s(8, 8);
  EXPECT_TRUE(s.query({0.4, 0.5}).empty());
}

TEST(MgchhSketch, QueryPredicates) {
  MgchhSketch s(8, 8);
  for (int i = 0; i < 3; ++i) s.update('a', 'x');
  s.update('b', 'x');
  // a: 3 >= (0.4 - 0.125) * 4 = 1.1; b: 1 < 1.1.
  // (a,x): 3 >= (0.5 - 0.125) * 3 - 0.5 = 0.625.
  auto r = s.query({0.4, 0.5});
  ASSERT_EQ(r.primaries.size(), 1u);
  EXPECT_EQ(r.primaries[0], (chh::PrimaryEntry{'a', 3}));
  ASSERT_EQ(r.chhs.size(), 1u);
  EXPECT_EQ(r.chhs[0], (chh::ChhEntry{'a', 'x', 3}));
  // 3 < (0.95 - 0.125) * 4 = 3.3
  EXPECT_TRUE(s.query({0.95, 0.5}).empty());
}

TEST(MgchhSketch, QueryComparisonIsNonStrict) {
  MgchhSketch s(4, 4);
  for (int i = 0; i < 4; ++i) s.update(1, 1);
  for (int i = 0; i < 4; ++i) s.update(2, 2);
  // (0.75 - 0.25) * 8 = 4 and f^_1 = 4: reported.
  EXPECT_EQ(s.query({0.75, 0.5}).primaries.size(), 2u);
}

TEST(MgchhSketch, InvariantsAndDeterminism) {
  chh::StreamSpec spec;
  spec.n = 20000;
  spec.rho = 0.9;
  spec.m1 = 300;
  spec.m2 = 40;
  spec.seed = 17;
  const auto stream = chh::gen_stream(spec);
  MgchhSketch a(16, 4, 123), b(16, 4, 123);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    a.update(stream[i].x, stream[i].y);
    b.update(stream[i].x, stream[i].y);
    if (i % 97 == 0) ASSERT_TRUE(a.check_invariants()) << "step " << i;
  }
  EXPECT_TRUE(a.check_invariants());
  EXPECT_EQ(dump(a), dump(b));
}

TEST(MgchhSketch, NoFalseNegativesAgainstOracle) {
  const double rhos[] = {0.8, 1.1, 1.4};
  for (int trial = 0; trial < 18; ++trial) {
    chh::StreamSpec spec;
    spec.n = 20000;
    spec.rho = rhos[trial % 3];
    spec.m1 = 400;
    spec.m2 = 60;
    spec.seed = 500 + trial;
    const ChhParams p{0.05, 0.1, 0.02, 0.05};
    MgchhSketch s(p, trial);
    chh::ExactCounts exact;
    for (const auto& e : chh::gen_stream(spec)) {
      s.update(e.x, e.y);
      exact.update(e.x, e.y);
    }
    const auto report = s.query();
    std::set<std::pair<chh::Item, chh::Item>> got;
    for (const auto& e : report.chhs) got.insert({e.primary, e.secondary});
    for (const auto& e : exact.echh(p.thresholds()).chhs) {
      EXPECT_TRUE(got.count({e.primary, e.secondary}));
    }
    for (const auto& e : report.primaries) {
      EXPECT_GT(static_cast<double>(exact.fx(e.item)),
                (p.phi1 - p.eps1) * static_cast<double>(spec.n));
    }
  }
}

}  // namespace
