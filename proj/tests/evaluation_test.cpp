#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "chh/csschh.hpp"
#include "chh/evaluation.hpp"
#include "chh/exact_oracle.hpp"
#include "chh/mgchh.hpp"
#include "chh/report_io.hpp"

namespace {

using chh::ChhReport;
using chh::EvalResult;

TEST(Score, SetArithmetic) {
  ChhReport truth{{{'a', 10}}, {{'a', 'x', 6}}};
  ChhReport reported{{{'a', 10}}, {{'a', 'x', 6}, {'a', 'c', 3}}};
  const auto r = chh::score(reported, truth);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
}

TEST(Score, IdentityIsPerfect) {
  ChhReport truth{{{'a', 10}, {'b', 8}}, {{'a', 'x', 6}, {'b', 'y', 5}}};
  const auto r = chh::score(truth, truth);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  EXPECT_EQ(r.abs_err_max, 0.0);
  EXPECT_EQ(r.rel_err_mean, 0.0);
}

TEST(Score, ErrorsOverTruePositivesOnly) {
  ChhReport truth{{{'a', 10}}, {{'a', 'x', 4}, {'a', 'y', 5}}};
  ChhReport reported{{{'a', 10}}, {{'a', 'x', 6}, {'a', 'y', 5}, {'a', 'z', 100}}};
  const auto r = chh::score(reported, truth);
  EXPECT_DOUBLE_EQ(r.abs_err_max, 2.0);
  EXPECT_DOUBLE_EQ(r.abs_err_mean, 1.0);
  EXPECT_DOUBLE_EQ(r.rel_err_max, 0.5);
  EXPECT_DOUBLE_EQ(r.rel_err_mean, 0.25);
  EXPECT_NEAR(r.precision, 2.0 / 3.0, 1e-15);
}

TEST(Score, EmptyConventions) {
  ChhReport empty;
  ChhReport truth{{{'a', 10}}, {{'a', 'x', 6}}};
  EXPECT_DOUBLE_EQ(chh::score(empty, empty).recall, 1.0);
  EXPECT_DOUBLE_EQ(chh::score(empty, truth).recall, 0.0);
  EXPECT_DOUBLE_EQ(chh::score(empty, truth).precision, 1.0);
}

TEST(EqualSpace, ReferenceRows) {
  struct Row {
    std::uint64_t bytes, k1, k2, s2;
  };
  for (const Row& row : {Row{1058400, 4200, 63000, 20}, Row{4132800, 8400, 252000, 40},
                         Row{16329600, 16800, 1008000, 80},
                         Row{64915200, 33600, 4032000, 160}}) {
    const auto c = chh::equal_space_config(row.bytes);
    EXPECT_EQ(c.k1, row.k1);
    EXPECT_EQ(c.s1, row.k1);
    EXPECT_EQ(c.k2, row.k2);
    EXPECT_EQ(c.s2, row.s2);
    EXPECT_EQ(c.bytes, row.bytes);
  }
}

// 15120 = 12 * 210 * 2 * 3 is the smallest budget feasible for every ratio below.
TEST(EqualSpace, ByteEquationsHoldForAnyBudget) {
  for (std::uint64_t budget = 15120; budget < 3000000; budget = budget * 13 / 10 + 17) {
    for (std::uint64_t ratio : {1u, 3u, 100u, 210u}) {
      const auto c = chh::equal_space_config(budget, ratio);
      EXPECT_EQ(c.k1, c.s1);
      EXPECT_EQ(12 * c.k1 + 16 * c.k2, c.bytes);
      EXPECT_EQ(12 * (c.s1 + c.s1 * c.s2), c.bytes);
      EXPECT_LE(c.bytes, budget);
      EXPECT_GE(c.s2, 1u);
    }
  }
}

TEST(EqualSpace, RoundsDownBetweenRows) {
  const auto c = chh::equal_space_config(1058400 + 5000);
  EXPECT_EQ(c.s2, 20u);
  EXPECT_EQ(c.bytes, 1058400u);
  // Odd s2 would make k2 fractional with ratio 210; 5 is skipped for 4.
  const auto d = chh::equal_space_config(12 * 210 * 5 * 6);
  EXPECT_EQ(d.s2, 4u);
}

TEST(EqualSpace, Infeasible) {
  EXPECT_THROW(chh::equal_space_config(100), chh::infeasible_space);
}

TEST(EqualSpace, SketchModelsAgree) {
  const auto c = chh::equal_space_config(4132800);
  EXPECT_EQ(chh::CsschhSketch(c.k1, c.k2).space_bytes_model(),
            chh::MgchhSketch(c.s1, c.s2).space_bytes_model());
}

TEST(Throughput, EmptyStreamRejected) {
  std::vector<chh::StreamPair> none;
  EXPECT_THROW(chh::measure_throughput([] { return chh::CsschhSketch(4, 4); }, none),
               chh::empty_stream);
}

TEST(Throughput, MedianOfRuns) {
  std::vector<chh::StreamPair> stream(20000);
  for (std::uint32_t i = 0; i < stream.size(); ++i) stream[i] = {i % 97, i % 13};
  const auto t = chh::measure_throughput([] { return chh::CsschhSketch(64, 256); }, stream, 3);
  ASSERT_EQ(t.runs.size(), 3u);
  EXPECT_GT(t.median, 0);
  EXPECT_LE(t.min, t.median);
  EXPECT_GE(t.max, t.median);
}

TEST(ReportIo, JsonLinesAndCsv) {
  ChhReport r{{{1, 3}}, {{1, 9, 2}, {1, 4, 1}}};
  chh::ExactCounts exact;
  exact.update(1, 9);
  exact.update(1, 9);
  exact.update(1, 4);

  std::ostringstream json;
  chh::write_report(json, r, chh::ReportFormat::json);
  EXPECT_EQ(json.str(),
            "{\"primary\":1,\"secondary\":4,\"est_freq\":1}\n"
            "{\"primary\":1,\"secondary\":9,\"est_freq\":2}\n");

  std::ostringstream csv;
  chh::write_report(csv, r, chh::ReportFormat::csv, &exact);
  EXPECT_EQ(csv.str(), "primary,secondary,est_freq,exact_freq\n1,4,1,1\n1,9,2,2\n");
}

TEST(ReportIo, EvalResultJsonRoundTrip) {
  EvalResult r;
  r.recall = 1;
  r.precision = 0.75;
  r.rel_err_max = 0.125;
  r.updates_per_ms = 1234.5;
  r.space_bytes_model = 1058400;
  const auto back = chh::eval_result_from_json(chh::to_json(r));
  EXPECT_EQ(back.precision, 0.75);
  EXPECT_EQ(back.rel_err_max, 0.125);
  EXPECT_EQ(back.updates_per_ms, 1234.5);
  EXPECT_EQ(back.space_bytes_model, 1058400u);
}

}  // namespace
