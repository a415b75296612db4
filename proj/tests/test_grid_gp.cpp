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

#include "levelset/error.hpp"
#include "levelset/grid_gp.hpp"
#include "levelset/oracle.hpp"
#include "levelset/rng.hpp"
#include "test_util.hpp"

namespace levelset {
namespace {

using testing::diagonal_state;
using testing::single_point;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::Io;
}

GridDomain unit_grid(std::size_t rows, std::size_t cols) {
  const std::vector<double> lower{0.0, 0.0}, upper{1.0, 1.0};
  const std::vector<std::size_t> res{rows, cols};
  return GridDomain::box(lower, upper, res);
}

TEST(GridDomain, BoxIsRowMajorInclusiveLinspace) {
  const std::vector<double> lower{-5.0, 0.0}, upper{5.0, 1.0};
  const std::vector<std::size_t> res{3, 2};
  const GridDomain d = GridDomain::box(lower, upper, res);
  ASSERT_EQ(d.size(), 6u);
  ASSERT_EQ(d.dim(), 2u);
  EXPECT_DOUBLE_EQ(d.point(0)(0), -5.0);
  EXPECT_DOUBLE_EQ(d.point(0)(1), 0.0);
  EXPECT_DOUBLE_EQ(d.point(1)(0), -5.0);
  EXPECT_DOUBLE_EQ(d.point(1)(1), 1.0);
  EXPECT_DOUBLE_EQ(d.point(2)(0), 0.0);
  EXPECT_DOUBLE_EQ(d.point(5)(0), 5.0);
  EXPECT_DOUBLE_EQ(d.point(5)(1), 1.0);
}

TEST(GridDomain, ResolutionOnePlacesNodeAtLower) {
  const std::vector<double> lower{2.0}, upper{3.0};
  const std::vector<std::size_t> res{1};
  const GridDomain d = GridDomain::box(lower, upper, res);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.point(0)(0), 2.0);
}

TEST(GridDomain, RejectsDuplicatesAndEmpty) {
  Matrix pts(2, 2);
  pts << 0.5, 0.5, 0.5, 0.5;
  EXPECT_EQ(code_of([&] { GridDomain d(pts); }), ErrorCode::InvalidDomain);
  EXPECT_EQ(code_of([] { GridDomain d(Matrix(0, 2)); }), ErrorCode::InvalidDomain);
  Matrix bad(1, 1);
  bad << std::nan("");
  EXPECT_EQ(code_of([&] { GridDomain d(bad); }), ErrorCode::InvalidDomain);
}

TEST(BuildPrior, SinglePoint) {
  Matrix pts(1, 2);
  pts << 0.3, 0.7;
  PriorSpec prior;
  prior.mean = 0.25;
  prior.kernel = KernelSpec{1.0, 0.5};
  const GpState s = build_prior(GridDomain(pts), prior);
  EXPECT_EQ(s.cov()(0, 0), 1.0);
  EXPECT_EQ(s.mean_at(0), 0.25);
}

TEST(BuildPrior, SquaredExponentialKernel) {
  const double l = 0.4;
  Matrix pts(3, 2);
  pts << 0.0, 0.0, l, 0.0, l, l;  // distances l and sqrt(2) l from the origin
  PriorSpec prior;
  prior.kernel = KernelSpec{1.0, l};
  const GpState s = build_prior(GridDomain(pts), prior);
  EXPECT_NEAR(s.covariance(0, 1), 0.606531, 1e-6);
  EXPECT_NEAR(s.covariance(0, 1), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(s.covariance(0, 2), std::exp(-1.0), 1e-15);
}

TEST(BuildPrior, ScalesWithSigmaKerSquared) {
  PriorSpec prior;
  prior.kernel = KernelSpec{3.0, 0.3};
  const GpState s = build_prior(unit_grid(3, 3), prior);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_DOUBLE_EQ(s.variance(i), 9.0);
}

TEST(BuildPrior, RejectsBadHyperparameters) {
  PriorSpec prior;
  prior.kernel = KernelSpec{0.0, 1.0};
  EXPECT_EQ(code_of([&] { build_prior(unit_grid(2, 2), prior); }), ErrorCode::InvalidHyperparameter);
  prior.kernel = KernelSpec{1.0, -1.0};
  EXPECT_EQ(code_of([&] { build_prior(unit_grid(2, 2), prior); }), ErrorCode::InvalidHyperparameter);
  prior.kernel = KernelSpec{1.0, 1.0};
  prior.noise_var = 0.0;
  EXPECT_EQ(code_of([&] { build_prior(unit_grid(2, 2), prior); }), ErrorCode::InvalidHyperparameter);
  prior.noise_var = 1.0;
  prior.mean = Vector::Zero(3);
  EXPECT_EQ(code_of([&] { build_prior(unit_grid(2, 2), prior); }), ErrorCode::InvalidInput);
}

TEST(BuildPrior, RejectsIndefiniteMatrix) {
  Matrix cov(2, 2);
  cov << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  EXPECT_EQ(code_of([&] { build_prior(Vector::Zero(2), cov, 1.0); }), ErrorCode::PriorNotPositiveDefinite);
}

TEST(BuildPrior, AcceptsNumericallySingularBenchmarkPrior) {
  const std::vector<double> lower{-5.0, -5.0}, upper{5.0, 5.0};
  const std::vector<std::size_t> res{30, 30};
  PriorSpec prior;
  prior.kernel = KernelSpec{std::exp(4.0), std::exp(1.0)};
  prior.noise_var = 0.01;
  EXPECT_NO_THROW(build_prior(GridDomain::box(lower, upper, res), prior));
}

TEST(Observe, SinglePointUpdate) {
  const GpState s = observe(single_point(0.0, 1.0, 1.0), Observation{0, 2.0});
  EXPECT_DOUBLE_EQ(s.mean_at(0), 1.0);
  EXPECT_DOUBLE_EQ(s.variance(0), 0.5);
  EXPECT_EQ(s.n_obs(), 1u);
}

TEST(Observe, ZeroCovarianceLeavesOtherPointAlone) {
  const GpState prior = diagonal_state({0.3, -0.7}, {1.0, 2.0}, 0.5);
  const GpState s = observe(prior, Observation{0, 5.0});
  EXPECT_EQ(s.mean_at(1), -0.7);
  EXPECT_EQ(s.variance(1), 2.0);
  EXPECT_EQ(s.covariance(0, 1), 0.0);
}

TEST(Observe, RepeatedSamplingMatchesClosedForm) {
  GpState s = single_point(0.0, 1.0, 4.0);
  for (int k = 0; k < 4; ++k) s = observe(std::move(s), Observation{0, 0.1 * k});
  EXPECT_NEAR(s.variance(0), 0.5, 1e-15);
}

TEST(Observe, CovarianceDoesNotDependOnOutcome) {
  PriorSpec prior;
  prior.kernel = KernelSpec{1.3, 0.4};
  prior.noise_var = 0.2;
  const GpState base = build_prior(unit_grid(3, 4), prior);
  const GpState a = observe(base, Observation{5, -3.0});
  const GpState b = observe(base, Observation{5, 11.0});
  EXPECT_EQ(a.cov(), b.cov());
}

TEST(Observe, StaysSymmetric) {
  PriorSpec prior;
  prior.kernel = KernelSpec{1.0, 0.3};
  prior.noise_var = 0.1;
  GpState s = build_prior(unit_grid(4, 4), prior);
  for (std::size_t k = 0; k < 30; ++k) s = observe(std::move(s), Observation{(k * 7) % 16, 0.5});
  EXPECT_EQ(s.cov(), s.cov().transpose());
}

TEST(Observe, RejectsBadIndex) {
  EXPECT_EQ(code_of([] { observe(single_point(0.0, 1.0, 1.0), Observation{1, 0.0}); }),
            ErrorCode::IndexOutOfRange);
}

TEST(GpState, RejectsAsymmetricOrNegativeDiagonal) {
  Matrix cov(2, 2);
  cov << 1.0, 0.5, 0.4, 1.0;
  EXPECT_ANY_THROW(GpState(Vector::Zero(2), cov, 1.0));
  Matrix neg(1, 1);
  neg << -1e-6;
  EXPECT_EQ(code_of([&] { GpState(Vector::Zero(1), neg, 1.0); }), ErrorCode::NumericalBreakdown);
}

TEST(GpState, ClampsRoundingNoiseOnDiagonal) {
  Matrix tiny(1, 1);
  tiny << -1e-13;
  const GpState s(Vector::Zero(1), tiny, 1.0);
  EXPECT_EQ(s.variance(0), 0.0);
}

TEST(BatchCondition, EmptyListIsPrior) {
  PriorSpec prior;
  prior.kernel = KernelSpec{1.0, 0.3};
  const GridDomain d = unit_grid(3, 3);
  const GpState a = build_prior(d, prior);
  const GpState b = batch_posterior(d, prior, {});
  EXPECT_EQ(max_state_deviation(a, b), 0.0);
}

TEST(BatchCondition, SingleObservationMatchesObserve) {
  PriorSpec prior;
  prior.mean = 0.2;
  prior.kernel = KernelSpec{1.5, 0.35};
  prior.noise_var = 0.3;
  const GridDomain d = unit_grid(4, 4);
  const std::vector<Observation> obs{{6, 1.7}};
  const GpState a = batch_posterior(d, prior, obs);
  const GpState b = observe(build_prior(d, prior), obs[0]);
  EXPECT_LE(max_state_deviation(a, b), 1e-10);
}

TEST(BatchCondition, TwentyObservationsAnyOrder) {
  PriorSpec prior;
  prior.kernel = KernelSpec{1.0, 0.3};
  prior.noise_var = 0.1;
  const GridDomain d = unit_grid(4, 4);
  RandomStream rng(9);
  std::vector<Observation> obs(20);
  for (auto& o : obs) o = Observation{rng.index(16), 4.0 * rng.uniform() - 2.0};
  const GpState a = batch_posterior(d, prior, obs);
  shuffle(std::span<Observation>(obs), rng);
  const GpState b = batch_posterior(d, prior, obs);
  EXPECT_LE(max_state_deviation(a, b), 1e-8);
}

TEST(OneStepVariance, Examples) {
  const GpState s = single_point(0.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(one_step_variance(s, 0, 0), 0.5);
  const GpState d = diagonal_state({0.0, 0.0}, {1.0, 3.0}, 1.0);
  EXPECT_EQ(one_step_variance(d, 1, 0), 3.0);
}

TEST(OneStepVariance, MatchesObserveDiagonal) {
  PriorSpec prior;
  prior.kernel = KernelSpec{1.2, 0.3};
  prior.noise_var = 0.25;
  const GpState s = build_prior(unit_grid(3, 4), prior);
  for (std::size_t at = 0; at < s.size(); at += 5) {
    const GpState next = observe(s, Observation{at, 123.0});
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(one_step_variance(s, i, at), next.variance(i), 1e-14);
    }
  }
}

TEST(LimitOutcome, SelfTargetValue) {
  const GpState s = single_point(0.0, 1.0, 1.0);
  const auto y = limit_outcome(s, 0, 0, 0.0, 1.96);
  ASSERT_TRUE(y.has_value());
  EXPECT_NEAR(*y, 2.771859, 1e-6);
  EXPECT_NEAR(*y, 2.0 * 1.96 * std::sqrt(0.5), 1e-14);
}

TEST(LimitOutcome, ZeroCovarianceIsEmpty) {
  const GpState s = diagonal_state({0.0, 0.0}, {1.0, 1.0}, 1.0);
  EXPECT_FALSE(limit_outcome(s, 1, 0, 0.0, 1.96).has_value());
}

TEST(LimitOutcome, RoundTripsThroughObserve) {
  PriorSpec prior;
  prior.mean = 0.4;
  prior.kernel = KernelSpec{1.1, 0.35};
  prior.noise_var = 0.2;
  const GpState s = build_prior(unit_grid(3, 3), prior);
  const double t = 0.1, beta = 1.7;
  for (std::size_t target = 0; target < s.size(); ++target) {
    for (std::size_t at = 0; at < s.size(); ++at) {
      const auto y = limit_outcome(s, target, at, t, beta);
      if (!y) continue;
      const GpState next = observe(s, Observation{at, *y});
      EXPECT_NEAR(next.mean_at(target) - beta * next.stddev(target), t, 1e-8);
    }
  }
}

TEST(NegligibleCovariance, UsesRelativeTolerance) {
  Matrix cov(2, 2);
  cov << 4.0, 1e-12, 1e-12, 4.0;
  const GpState s(Vector::Zero(2), cov, 1.0);
  EXPECT_TRUE(negligible_covariance(s, 0, 1));
  cov(0, 1) = cov(1, 0) = 1e-11;
  EXPECT_FALSE(negligible_covariance(GpState(Vector::Zero(2), cov, 1.0), 0, 1));
}

}  // namespace
}  // namespace levelset
