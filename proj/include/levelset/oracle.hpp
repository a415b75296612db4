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

// Brute-force and Monte-Carlo references for the closed forms. Nothing here
// calls into the closed-form acquisition code; the estimators only sample
// outcomes, condition through observe() and count.

#ifndef LEVELSET_ORACLE_HPP
#define LEVELSET_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levelset/classify.hpp"
#include "levelset/grid_gp.hpp"
#include "levelset/rng.hpp"

namespace levelset {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(n_samples)
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Draws y ~ N(mean(x+), var(x+) + noise), conditions with observe() and
/// counts the classified set at the unshifted threshold. Requires
/// n_samples >= 100.
///
/// When every draw yields the same count std_error is 0 even though the
/// expectation may sit a tail probability away from that count; compare
/// against max(std_error, 1 / n_samples), the estimator's resolution.
McEstimate mc_expected_set_size(const GpState& state, std::size_t sample_at,
                                const ClassifyParams& classify, std::size_t n_samples,
                                std::uint64_t seed);

struct VarReductionIdentity {
  McEstimate mc;
  double closed = 0.0;
};

/// Monte-Carlo estimate of E sum_x [(mean+ - beta sd+) - (mean - beta sd)]
/// (the threshold integral of the set-size change, evaluated exactly per
/// sample) next to its closed form -beta sum_x (sd+(x) - sd(x)).
/// Comparison band used by the self-checks: 4 * max(std_error, 1 / n).
bool within_band(double closed, const McEstimate& mc);

VarReductionIdentity mc_var_reduction_identity(const GpState& state, std::size_t sample_at,
                                               double beta, std::size_t n_samples,
                                               std::uint64_t seed);

/// Posterior variance after K noisy samples at one point:
/// sigma_eps^2 / (K + sigma_eps^2 / sigma0^2). Throws InvalidInput.
double repeated_sampling_variance(double sigma0_sq, double sigma_eps_sq, std::size_t k);

using UpdateFn = std::function<GpState(GpState, const Observation&)>;

struct LawCheck {
  std::string name;
  bool passed = true;
  double max_deviation = 0.0;
};

struct GpLawReport {
  std::vector<LawCheck> checks;
  bool passed() const;
};

/// Exchangeability (batch and folded), batch-vs-fold and prefix-split
/// associativity, repeated sampling at each observed index (K = 1..100) and
/// step-wise variance monotonicity. `update` replaces observe() on every
/// folded path so a corrupted update can be used as a negative control.
GpLawReport verify_gp_laws(const GridDomain& domain, const PriorSpec& prior,
                           std::span<const Observation> observations, double tolerance,
                           const UpdateFn& update = {});

/// Largest absolute entrywise difference of means and covariances.
double max_state_deviation(const GpState& a, const GpState& b);

/// A random posterior on a jittered rows x cols lattice in [0, 1]^2: random SE
/// hyperparameters, a random prior mean per point and a handful of random
/// observations. Used by the property suites.
GpState random_gp_state(std::size_t rows, std::size_t cols, RandomStream& rng);

}  // namespace levelset

#endif  // LEVELSET_ORACLE_HPP
