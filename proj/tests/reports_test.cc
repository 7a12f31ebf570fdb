#include "fastjl/reports.h"

#include <gtest/gtest.h>

#include "fastjl/bench.h"
#include "fastjl/errors.h"

namespace fastjl {
namespace {

TEST(Reports, JlpRoundTrip) {
  const JlpReport a = jlp_failure_rate(TransformKind::kDenseGaussian, 64, 8, 0.5, 200,
                                       VectorFamily::kSpike, 12);
  const JlpReport b = jlp_report_from_json(Json::parse(to_json(a).dump()));
  EXPECT_EQ(a, b);
  const JlpReport c = jlp_failure_rate(TransformKind::kNewRademacher, 64, 4, 0.5, 50,
                                       VectorFamily::kBasis, 12);
  EXPECT_EQ(c, jlp_report_from_json(Json::parse(to_json(c).dump())));
  EXPECT_TRUE(to_json(c)["exact_failure_probability"].is_null());
}

TEST(Reports, ThresholdKeys) {
  const Json j = to_json(w_threshold_breakdown(1.0, 0.1, 64));
  for (const char* k : {"single_release", "second_moment", "streaming", "value", "binding"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["binding"][0], "second_moment");
}

TEST(Reports, AttackKeys) {
  AttackReport r;
  r.target = "hash-sparse";
  r.predicted_rate = 0.25;
  const Json j = to_json(r);
  EXPECT_EQ(j["target"], "hash-sparse");
  EXPECT_EQ(j["predicted_rate"], 0.25);
  EXPECT_EQ(j["advantage_ci"].size(), 2u);
}

TEST(Reports, TailCurveAndSurvey) {
  const TailCurve c = block_nonzero_check(256, 4, 0.5, 20, 3);
  const Json j = to_json(c);
  EXPECT_EQ(j["thresholds"].size(), c.thresholds.size());
  EXPECT_TRUE(j["lower_tail"].get<bool>());
  const Json s = to_json(rip_survey(TransformKind::kDenseGaussian, 16, 8, 2, 3, 1));
  EXPECT_EQ(s["deltas"].size(), 3u);
}

TEST(Bench, PowerOfTwoRange) {
  EXPECT_EQ(power_of_two_range(4, 32), (std::vector<std::size_t>{4, 8, 16, 32}));
  EXPECT_THROW(power_of_two_range(3, 32), Error);
  EXPECT_THROW(power_of_two_range(64, 32), Error);
}

TEST(Bench, ReportShape) {
  const BenchReport b = run_bench(TransformKind::kNewRademacher, {256, 512}, 4, 1, 30, 5);
  ASSERT_EQ(b.median_ns.size(), 2u);
  ASSERT_EQ(b.doubling_ratios.size(), 1u);
  EXPECT_GT(b.median_ns[0], 0.0);
  EXPECT_NEAR(b.doubling_ratios[0], b.median_ns[1] / b.median_ns[0], 1e-12);
  const Json j = to_json(b);
  EXPECT_EQ(j["sizes"][1]["n"], 512);
  EXPECT_EQ(j["sizes"][1]["r"], 4);
}

}  // namespace
}  // namespace fastjl
