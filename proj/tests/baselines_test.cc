// Copyright 2026 The dpci Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpci/baselines.h"

#include <cmath>
#include <vector>

#include "dpci/core.h"
#include "dpci/mechanisms.h"
#include "dpci/random.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpci {
namespace {

std::vector<double> NormalSample(std::uint64_t seed, int n,
                                 const DataBounds& bounds) {
  SeededRandom rng(seed);
  std::vector<double> v(n);
  rng.FillNormal(v, 0, 1);
  ClampInPlace(v, bounds);
  return v;
}

TEST(VadhanParamsTest, EqualSplit) {
  const auto p = VadhanParams::EqualSplit(0.05, 0.1, {-6, 6});
  EXPECT_DOUBLE_EQ(p.alpha0, 0.0125);
  EXPECT_DOUBLE_EQ(p.alpha3, 0.0125);
  EXPECT_DOUBLE_EQ(p.eps1, 0.05);
  EXPECT_DOUBLE_EQ(p.eps2, 0.05);
  EXPECT_EQ(p.eps3, 0);
  EXPECT_EQ(p.mean_min, -6);
  EXPECT_EQ(p.mean_max, 6);
  EXPECT_DOUBLE_EQ(p.sd_max, 3);
  EXPECT_TRUE(ValidateVadhanParams(p).ok());
}

TEST(VadhanParamsTest, Validation) {
  VadhanParams p;
  p.alpha2 = 0;
  EXPECT_FALSE(ValidateVadhanParams(p).ok());
  p = {};
  p.eps1 = 0;
  EXPECT_FALSE(ValidateVadhanParams(p).ok());
  p = {};
  p.mean_min = p.mean_max;
  EXPECT_FALSE(ValidateVadhanParams(p).ok());
  p = {};
  p.sd_min = 2;
  EXPECT_FALSE(ValidateVadhanParams(p).ok());
}

TEST(RangeFinderTest, TailBoundWindow) {
  VadhanParams p;
  p.mean_min = -1;
  p.mean_max = 2;
  p.sd_max = 0.5;
  p.alpha3 = 0.01;
  TailBoundRangeFinder finder;
  testing::ZeroNoiseRandom rng;
  const std::vector<double> v(100, 0.0);
  auto r = finder.FindRange(v, p, rng);
  ASSERT_TRUE(r.ok());
  const double reach = 0.5 * std::sqrt(2 * std::log(2 * 100 / 0.01));
  EXPECT_NEAR(r->range.xmin, -1 - reach, 1e-12);
  EXPECT_NEAR(r->range.xmax, 2 + reach, 1e-12);
  EXPECT_EQ(r->epsilon_spent, 0);
}

TEST(VadhanCiTest, ConstantDataCollapsesWithoutNoise) {
  VadhanParams p;
  p.alpha2 = 0.5;
  p.alpha1 = 1 - 1e-9;
  testing::ZeroNoiseRandom rng;
  FixedRangeFinder finder({0, 10});
  auto ci = VadhanCi(std::vector<double>(20, 4.0), p, rng, nullptr, &finder);
  ASSERT_TRUE(ci.ok());
  EXPECT_NEAR(ci->lower, 4, 1e-8);
  EXPECT_NEAR(ci->upper, 4, 1e-8);
  EXPECT_FALSE(ci->spread_floored);
}

TEST(VadhanCiTest, InflationTermNonNegative) {
  for (double a2 : {0.001, 0.0125, 0.2, 0.5}) {
    EXPECT_GE(std::log(1 / (2 * a2)), 0);
  }
}

TEST(VadhanCiTest, NeverNarrowerThanPublicWithoutNoise) {
  for (int seed = 0; seed < 30; ++seed) {
    const auto v = NormalSample(seed, 10 + seed * 7, {-6, 6});
    VadhanParams p = VadhanParams::EqualSplit(0.05, 1.0, {-6, 6});
    p.alpha2 = 0.5 - 0.01 * (seed % 10);
    testing::ZeroNoiseRandom rng;
    FixedRangeFinder finder({-6, 6});
    auto vadhan = VadhanCi(v, p, rng, nullptr, &finder);
    auto pub = PublicCi(v, p.alpha0);
    ASSERT_TRUE(vadhan.ok());
    EXPECT_GE(vadhan->moe, pub->moe);
  }
}

TEST(VadhanCiTest, NegativeVarianceIsFlooredAndFlagged) {
  VadhanParams p;
  p.alpha2 = 0.5;
  // Mean draw zero, variance draw strongly negative.
  testing::ScriptedRandom rng({0.5, 1e-9});
  FixedRangeFinder finder({0, 10});
  auto ci = VadhanCi(std::vector<double>{1, 1, 1}, p, rng, nullptr, &finder);
  ASSERT_TRUE(ci.ok());
  EXPECT_TRUE(ci->spread_floored);
  EXPECT_EQ(ci->spread, 0);
  EXPECT_GE(ci->moe, 0);
}

TEST(VadhanCiTest, ChargesEps1PlusEps2) {
  VadhanParams p = VadhanParams::EqualSplit(0.05, 0.3, {-6, 6});
  p.eps2 = 0.2;
  const auto v = NormalSample(1, 100, {-6, 6});
  SeededRandom rng(2);
  PrivacyLedger ledger;
  ASSERT_TRUE(VadhanCi(v, p, rng, &ledger).ok());
  EXPECT_NEAR(ledger.Total(), p.eps1 + p.eps2 + p.eps3, 1e-15);
  EXPECT_EQ(ledger.charges().front().label, "vadhan.range");
  EXPECT_EQ(ledger.charges().front().epsilon, 0);
}

TEST(VadhanCiTest, RejectsTinyInput) {
  SeededRandom rng(1);
  EXPECT_EQ(VadhanCi(std::vector<double>{1}, VadhanParams{}, rng)
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(VadhanCiTest, CoverageIsConservative) {
  VadhanParams p = VadhanParams::EqualSplit(0.05, 0.1, {-6, 6});
  FixedRangeFinder finder({-6, 6});
  int covered = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const auto v = NormalSample(40000 + t, 2000, {-6, 6});
    SeededRandom rng(t);
    covered += VadhanCi(v, p, rng, nullptr, &finder)->Covers(0) ? 1 : 0;
  }
  EXPECT_GE(covered, 950);
}

TEST(PartitionTest, PairsAndRemainder) {
  const std::vector<double> ten(10, 1.0);
  auto parts = PartitionSubsets(ten, 5);
  ASSERT_TRUE(parts.ok());
  ASSERT_EQ(parts->size(), 5u);
  for (const auto& part : *parts) EXPECT_EQ(part.size(), 2u);

  const std::vector<double> eleven(11, 1.0);
  parts = PartitionSubsets(eleven, 5);
  ASSERT_TRUE(parts.ok());
  EXPECT_EQ(parts->back().size(), 3u);
  EXPECT_FALSE(PartitionSubsets(eleven, 6).ok());
  EXPECT_FALSE(PartitionSubsets(eleven, 0).ok());
}

TEST(OraTest, ConstantDataWithScriptedDraws) {
  // Zero Laplace noise; both quartile draws land at the bottom of their bin.
  testing::ScriptedRandom rng({0.5, 0.5, 1e-12, 0.5, 1e-12, 0.5});
  OraTrace trace;
  auto out = OraEstimate(std::vector<double>(20, 2.0), 1.0, {0, 4}, {}, rng,
                         nullptr, &trace);
  ASSERT_TRUE(out.ok());
  EXPECT_DOUBLE_EQ(out->center, 2);
  EXPECT_EQ(trace.subsets, 10);
  EXPECT_LT(trace.upper_quartile, 1e-9);
  EXPECT_NEAR(out->spread, 0, 1e-9);
}

TEST(OraTest, TraceIsConsistent) {
  const auto v = NormalSample(6, 500, {-6, 6});
  SeededRandom rng(3);
  OraTrace trace;
  auto out = OraEstimate(v, 1.0, {-6, 6}, {}, rng, nullptr, &trace);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(trace.subsets, 250);
  ASSERT_EQ(trace.standard_errors.size(), 250u);
  double sum = 0;
  for (double s : trace.standard_errors) {
    EXPECT_GE(s, trace.winsor_low);
    EXPECT_LE(s, trace.winsor_high);
    sum += s;
  }
  EXPECT_NEAR(sum / 250, trace.winsorized_mean, 1e-12);
  EXPECT_GE(trace.lower_quartile, trace.quartile_bounds.xmin);
  EXPECT_LT(trace.upper_quartile, trace.quartile_bounds.xmax);
  EXPECT_GE(out->spread, 0);
}

TEST(OraTest, LedgerFollowsTheListingScales) {
  const auto v = NormalSample(7, 200, {-6, 6});
  SeededRandom rng(3);
  PrivacyLedger ledger;
  ASSERT_TRUE(OraEstimate(v, 0.4, {-6, 6}, {}, rng, &ledger).ok());
  ASSERT_EQ(ledger.charges().size(), 4u);
  EXPECT_EQ(ledger.charges()[0].label, "ora.mean");
  EXPECT_NEAR(ledger.charges()[0].epsilon, 0.2, 1e-15);
  EXPECT_NEAR(ledger.charges()[1].epsilon, 0.1, 1e-15);
  EXPECT_NEAR(ledger.charges()[2].epsilon, 0.1, 1e-15);
  EXPECT_EQ(ledger.charges()[3].label, "ora.standard_error");
  EXPECT_NEAR(ledger.charges()[3].epsilon, 0.2, 1e-15);
  // The listing's scales compose to 1.5 epsilon, not epsilon.
  EXPECT_NEAR(ledger.Total(), 0.6, 1e-12);
}

TEST(OraTest, Validation) {
  SeededRandom rng(1);
  const std::vector<double> v = {1, 2, 3};
  EXPECT_EQ(OraEstimate(v, 1.0, {0, 4}, {}, rng).status().code(),
            absl::StatusCode::kFailedPrecondition);
  const std::vector<double> eight(8, 1.0);
  EXPECT_FALSE(OraEstimate(eight, 1.0, {0, 4}, {5, 0}, rng).ok());
  EXPECT_FALSE(OraEstimate(eight, 0.0, {0, 4}, {}, rng).ok());
  EXPECT_FALSE(OraEstimate(eight, 1.0, {0, 4}, {0, -1}, rng).ok());
  EXPECT_FALSE(OraEstimate(std::vector<double>(8, 9.0), 1.0, {0, 4}, {}, rng)
                   .ok());
}

}  // namespace
}  // namespace dpci
