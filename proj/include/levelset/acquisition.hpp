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

#ifndef LEVELSET_ACQUISITION_HPP
#define LEVELSET_ACQUISITION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levelset/classify.hpp"
#include "levelset/grid_gp.hpp"

namespace levelset {

inline constexpr double kDefaultEpsilon = 1e-12;
inline constexpr double kDefaultGamma = 1e-10;
inline constexpr double kDefaultDelta = 0.975;
inline constexpr double kDefaultBetaLse = 9.0;

/// Robust maximum-improvement acquisition:
///   score(x+) = max(E|I+| - |I^eps|, gamma * sd(x+))
/// with E|I+| at the unshifted threshold and |I^eps| at t - eps
/// (classify.shift holds eps). With robust == false the score is the bare
/// expected improvement E|I+| - |I| (the "MILE" ablation: eps = 0 and no
/// exploration floor).
struct RmileParams {
  ClassifyParams classify;
  double gamma = kDefaultGamma;
  bool robust = true;

  static RmileParams make(double t, double delta = kDefaultDelta,
                          double epsilon = kDefaultEpsilon, double gamma = kDefaultGamma);
  static RmileParams mile(double t, double delta = kDefaultDelta);

  /// gamma > 0 and eps > 0 for the robust variant.
  void validate() const;
};

/// Sums expected set sizes over several thresholds. classify.t is unused; the
/// per-threshold rule takes beta and shift from classify.
struct MultiThresholdParams {
  std::vector<double> thresholds;
  ClassifyParams classify;
  double gamma = kDefaultGamma;

  void validate() const;
};

/// Safe set {x : mean - gamma_safe * sqrt(var + noise_var) > t}.
struct SafeParams {
  double t = 0.0;
  double gamma_safe = 1.96;
};

struct VarianceReduction {};

struct Straddle {
  double t = 0.0;
};

struct LseAmbiguity {
  double t = 0.0;
  double beta_lse = kDefaultBetaLse;
};

/// Uniform choice among the candidates; the draw is keyed by (seed, n_obs).
struct RandomChoice {
  std::uint64_t seed = 0;
};

using AcquisitionKind = std::variant<RmileParams, MultiThresholdParams, VarianceReduction,
                                     Straddle, LseAmbiguity, RandomChoice>;

std::string acquisition_name(const AcquisitionKind& kind);

/// Closed-form E|I+| after a hypothetical sample at `sample_at`:
///   sum_x Phi( sqrt(var(x+) + noise) / |cov(x, x+)| * (mean(x) - beta sd+(x) - t) ).
/// Terms with negligible covariance contribute 1{mean(x) - beta sd+(x) > t}.
/// The shift in `classify` is ignored.
double expected_set_size(const GpState& state, std::size_t sample_at, const ClassifyParams& classify);

double rmile_score(const GpState& state, std::size_t sample_at, const RmileParams& params);

double multi_threshold_score(const GpState& state, std::size_t sample_at,
                             const MultiThresholdParams& params);

/// -sum_x sd+(x); its argmax minimizes the summed posterior standard deviation.
double variance_reduction_score(const GpState& state, std::size_t sample_at);

/// 1.96 sd - |mean - t|.
double straddle_score(const GpState& state, std::size_t index, double t);

/// min(mean + sqrt(b) sd - t, t - mean + sqrt(b) sd), per-step interval only.
double lse_ambiguity(const GpState& state, std::size_t index, double t,
                     double beta_lse = kDefaultBetaLse);

Membership safe_set(const GpState& state, const SafeParams& params);

/// Score of every candidate in grid order (all zeros for RandomChoice).
std::vector<double> acquisition_scores(const GpState& state, const AcquisitionKind& kind);

struct Selection {
  std::size_t index = 0;
  double score = 0.0;
};

/// Argmax of the acquisition over the grid, or over the safe set when `safe`
/// is given. Ties go to the lowest index. Throws EmptySafeSet.
Selection select_point(const GpState& state, const AcquisitionKind& kind,
                       const std::optional<SafeParams>& safe = std::nullopt);

/// Lower/upper envelopes of the robust score as functions of sd(x+):
///   lower = gamma * sd+,
///   upper = max(m * Phi(-(eps / 2) * sigma_eps / (sigma_bar * sd+)), gamma * sd+),
/// with Phi(-inf) = 0 at sd+ = 0. sigma_bar is the largest prior standard
/// deviation on the grid. Throws InvalidBoundsInput on negative inputs.
struct RmileBounds {
  double lower = 0.0;
  double upper = 0.0;
};

RmileBounds rmile_bounds(double sigma_plus, const RmileParams& params, double sigma_bar,
                         std::size_t m, double sigma_eps);

}  // namespace levelset

#endif  // LEVELSET_ACQUISITION_HPP
