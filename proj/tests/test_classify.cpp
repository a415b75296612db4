// Copyright 2026 The levelset Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "levelset/classify.hpp"
#include "levelset/error.hpp"
#include "levelset/normal.hpp"
#include "test_util.hpp"

namespace levelset {
namespace {

using testing::diagonal_state;
using testing::single_point;

Membership of(std::vector<bool> flags) { return Membership(std::move(flags)); }

TEST(BetaFromDelta, Examples) {
  EXPECT_NEAR(beta_from_delta(0.975), 1.959964, 1e-6);
  EXPECT_EQ(beta_from_delta(0.5), 0.0);
  EXPECT_NEAR(beta_from_delta(0.841345), 1.0, 1e-3);
}

TEST(BetaFromDelta, RejectsOutsideUnitInterval) {
  for (const double d : {0.0, 1.0, -0.2, 1.5, std::nan("")}) {
    try {
      beta_from_delta(d);
      ADD_FAILURE() << "delta " << d << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidDelta);
    }
  }
}

TEST(ClassifyParams, RejectsNegativeShiftAndInconsistentBeta) {
  EXPECT_THROW(ClassifyParams::make(0.0, 0.975, -1e-3), Error);
  ClassifyParams p = ClassifyParams::make(0.0, 0.975);
  p.beta = 1.5;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Classify, InsideWhenLowerBoundClearsThreshold) {
  const GpState s = single_point(0.0, 1.0, 1.0);
  const ClassifyParams p{-2.0, 0.975, 1.96, 0.0};
  EXPECT_TRUE(classify(s, p).contains(0));
}

TEST(Classify, BoundaryIsExcluded) {
  const double beta = beta_from_delta(0.975);
  // mean - beta * 1 == 0 exactly.
  const GpState s = single_point(beta, 1.0, 1.0);
  EXPECT_FALSE(classify(s, ClassifyParams::make(0.0, 0.975)).contains(0));
  EXPECT_TRUE(classify(s, ClassifyParams::make(0.0, 0.975, 1e-9)).contains(0));
}

TEST(Classify, ShiftGivesSuperset) {
  const GpState s = diagonal_state({-1.0, 0.0, 0.5, 2.0, 3.9}, {1.0, 0.25, 0.01, 1.0, 4.0}, 1.0);
  const Membership base = classify(s, ClassifyParams::make(0.0, 0.9));
  for (const double eps : {1e-12, 0.1, 1.0, 5.0}) {
    const Membership wide = classify(s, ClassifyParams::make(0.0, 0.9, eps));
    EXPECT_TRUE(base.subset_of(wide)) << "eps = " << eps;
    EXPECT_GE(wide.size(), base.size());
  }
}

TEST(Confusion, PartialOverlap) {
  const Confusion c = confusion(of({false, true, true, false}), of({false, false, true, true}));
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.fn_, 1u);
  EXPECT_EQ(c.tn, 1u);
  EXPECT_DOUBLE_EQ(c.precision, 0.5);
  EXPECT_DOUBLE_EQ(c.recall, 0.5);
  EXPECT_DOUBLE_EQ(c.f1, 0.5);
}

TEST(Confusion, PerfectPrediction) {
  const Membership truth = of({true, false, true});
  const Confusion c = confusion(truth, truth);
  EXPECT_EQ(c.f1, 1.0);
  EXPECT_EQ(c.precision, 1.0);
  EXPECT_EQ(c.recall, 1.0);
}

TEST(Confusion, DegenerateCases) {
  const Confusion empty_pred = confusion(of({false, false}), of({true, false}));
  EXPECT_EQ(empty_pred.precision, 0.0);
  EXPECT_EQ(empty_pred.recall, 0.0);
  EXPECT_EQ(empty_pred.f1, 0.0);

  const Confusion empty_truth = confusion(of({true, false}), of({false, false}));
  EXPECT_EQ(empty_truth.precision, 0.0);
  EXPECT_EQ(empty_truth.recall, 0.0);
  EXPECT_EQ(empty_truth.f1, 0.0);

  const Confusion both_empty = confusion(of({false}), of({false}));
  EXPECT_EQ(both_empty.tn, 1u);
  EXPECT_EQ(both_empty.f1, 0.0);
}

TEST(Confusion, RejectsLengthMismatch) {
  try {
    confusion(of({true}), of({true, false}));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

TEST(ExpectedWeightedError, SeventyPercentAtEvenOdds) {
  // P(f > 0) = 0.7 with unit variance.
  const GpState s = single_point(normal_quantile(0.7), 1.0, 1.0);
  const ClassifyParams p = ClassifyParams::make(0.0, 0.5);
  EXPECT_NEAR(expected_weighted_error(s, 0, true, p), 0.15, 1e-12);
  EXPECT_NEAR(expected_weighted_error(s, 0, false, p), 0.35, 1e-12);
  EXPECT_TRUE(classify(s, p).contains(0));
}

TEST(ExpectedWeightedError, TieAtBoundaryPicksOut) {
  const double delta = 0.8;
  const GpState s = single_point(beta_from_delta(delta), 1.0, 1.0);
  const ClassifyParams p = ClassifyParams::make(0.0, delta);
  EXPECT_NEAR(expected_weighted_error(s, 0, true, p), delta * (1.0 - delta), 1e-12);
  EXPECT_NEAR(expected_weighted_error(s, 0, false, p), delta * (1.0 - delta), 1e-12);
  EXPECT_FALSE(classify(s, p).contains(0));
}

TEST(ExpectedWeightedError, VanishingVariance) {
  const GpState s = single_point(1.0, 1e-30, 1.0);
  const ClassifyParams p = ClassifyParams::make(0.0, 0.975);
  EXPECT_NEAR(expected_weighted_error(s, 0, true, p), 0.0, 1e-12);
  EXPECT_NEAR(expected_weighted_error(s, 0, false, p), 0.025, 1e-12);
}

TEST(ExpectedWeightedError, ZeroVarianceAtThresholdCountsAsOut) {
  const GpState s = single_point(0.0, 0.0, 1.0);
  const ClassifyParams p = ClassifyParams::make(0.0, 0.975);
  EXPECT_NEAR(expected_weighted_error(s, 0, true, p), 0.975, 1e-12);
  EXPECT_NEAR(expected_weighted_error(s, 0, false, p), 0.0, 1e-12);
}

TEST(ExpectedWeightedError, RejectsBadIndex) {
  const GpState s = single_point(0.0, 1.0, 1.0);
  EXPECT_THROW(expected_weighted_error(s, 3, true, ClassifyParams::make(0.0, 0.9)), Error);
}

}  // namespace
}  // namespace levelset
