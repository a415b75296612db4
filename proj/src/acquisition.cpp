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

#include "levelset/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levelset/error.hpp"
#include "levelset/normal.hpp"
#include "levelset/rng.hpp"

namespace levelset {

namespace {

constexpr double kStraddleWidth = 1.96;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Robust max(improvement, gamma * sd) or the bare improvement.
double robustify(double improvement, double gamma, double sd, bool robust) {
  return robust ? std::max(improvement, gamma * sd) : improvement;
}

double improvement_floor_sum(const GpState& state, const MultiThresholdParams& params) {
  double total = 0.0;
  for (const double t : params.thresholds) {
    total += static_cast<double>(classify(state, params.classify.with_threshold(t)).size());
  }
  return total;
}

// Scores every candidate, sharing the x+-independent terms across the sweep.
std::vector<double> sweep(const GpState& state, const AcquisitionKind& kind) {
  const std::size_t m = state.size();
  std::vector<double> scores(m, 0.0);
  std::visit(
      Overloaded{
          [&](const RmileParams& p) {
            p.validate();
            const ClassifyParams reference = p.robust ? p.classify : p.classify.with_shift(0.0);
            const auto current = static_cast<double>(classify(state, reference).size());
            for (std::size_t i = 0; i < m; ++i) {
              scores[i] = robustify(expected_set_size(state, i, p.classify) - current, p.gamma,
                                    state.stddev(i), p.robust);
            }
          },
          [&](const MultiThresholdParams& p) {
            p.validate();
            const double current = improvement_floor_sum(state, p);
            for (std::size_t i = 0; i < m; ++i) {
              double expected = 0.0;
              for (const double t : p.thresholds) {
                expected += expected_set_size(state, i, p.classify.with_threshold(t));
              }
              scores[i] = std::max(expected - current, p.gamma * state.stddev(i));
            }
          },
          [&](const VarianceReduction&) {
            for (std::size_t i = 0; i < m; ++i) scores[i] = variance_reduction_score(state, i);
          },
          [&](const Straddle& p) {
            for (std::size_t i = 0; i < m; ++i) scores[i] = straddle_score(state, i, p.t);
          },
          [&](const LseAmbiguity& p) {
            for (std::size_t i = 0; i < m; ++i) scores[i] = lse_ambiguity(state, i, p.t, p.beta_lse);
          },
          [&](const RandomChoice&) {},
      },
      kind);
  return scores;
}

}  // namespace

RmileParams RmileParams::make(double t, double delta, double epsilon, double gamma) {
  RmileParams p{ClassifyParams::make(t, delta, epsilon), gamma, true};
  p.validate();
  return p;
}

RmileParams RmileParams::mile(double t, double delta) {
  return RmileParams{ClassifyParams::make(t, delta, 0.0),
                     -std::numeric_limits<double>::infinity(), false};
}

void RmileParams::validate() const {
  classify.validate();
  if (robust && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw Error(ErrorCode::InvalidHyperparameter, "gamma must be finite and > 0");
  }
  if (robust && !(classify.shift > 0.0)) {
    throw Error(ErrorCode::InvalidHyperparameter, "epsilon must be > 0 (use the ablation for eps = 0)");
  }
}

void MultiThresholdParams::validate() const {
  classify.validate();
  if (thresholds.empty()) throw Error(ErrorCode::InvalidInput, "threshold list is empty");
  if (!(gamma > 0.0 && std::isfinite(gamma))) {
    throw Error(ErrorCode::InvalidHyperparameter, "gamma must be finite and > 0");
  }
}

std::string acquisition_name(const AcquisitionKind& kind) {
  return std::visit(Overloaded{
                        [](const RmileParams& p) -> std::string { return p.robust ? "rmile" : "mile"; },
                        [](const MultiThresholdParams&) -> std::string { return "multi"; },
                        [](const VarianceReduction&) -> std::string { return "varred"; },
                        [](const Straddle&) -> std::string { return "straddle"; },
                        [](const LseAmbiguity&) -> std::string { return "lse"; },
                        [](const RandomChoice&) -> std::string { return "random"; },
                    },
                    kind);
}

double expected_set_size(const GpState& state, std::size_t sample_at, const ClassifyParams& classify) {
  state.check_index(sample_at);
  const std::size_t m = state.size();
  const double predictive = state.variance(sample_at) + state.noise_var();
  const double predictive_sd = std::sqrt(predictive);
  const double var_plus = state.variance(sample_at);
  const auto column = state.cov().col(static_cast<Eigen::Index>(sample_at));
  const Vector& mean = state.mean();
  const auto diag = state.cov().diagonal();

  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double c = column(k);
    const double var_i = diag(k);
    const double sd_next = std::sqrt(std::max(var_i - c * c / predictive, 0.0));
    const double margin = mean(k) - classify.beta * sd_next - classify.t;
    const double tol = 1e-12 * std::max(1.0, std::sqrt(var_i * var_plus));
    if (std::abs(c) <= tol) {
      total += margin > 0.0 ? 1.0 : 0.0;
    } else {
      total += normal_cdf(predictive_sd / std::abs(c) * margin);
    }
  }
  return total;
}

double rmile_score(const GpState& state, std::size_t sample_at, const RmileParams& params) {
  params.validate();
  state.check_index(sample_at);
  const ClassifyParams reference = params.robust ? params.classify : params.classify.with_shift(0.0);
  const auto current = static_cast<double>(classify(state, reference).size());
  return robustify(expected_set_size(state, sample_at, params.classify) - current, params.gamma,
                   state.stddev(sample_at), params.robust);
}

double multi_threshold_score(const GpState& state, std::size_t sample_at,
                             const MultiThresholdParams& params) {
  params.validate();
  state.check_index(sample_at);
  double expected = 0.0;
  for (const double t : params.thresholds) {
    expected += expected_set_size(state, sample_at, params.classify.with_threshold(t));
  }
  return std::max(expected - improvement_floor_sum(state, params),
                  params.gamma * state.stddev(sample_at));
}

double variance_reduction_score(const GpState& state, std::size_t sample_at) {
  state.check_index(sample_at);
  double total = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    total += std::sqrt(one_step_variance(state, i, sample_at));
  }
  return -total;
}

double straddle_score(const GpState& state, std::size_t index, double t) {
  state.check_index(index);
  return kStraddleWidth * state.stddev(index) - std::abs(state.mean_at(index) - t);
}

double lse_ambiguity(const GpState& state, std::size_t index, double t, double beta_lse) {
  state.check_index(index);
  const double half_width = std::sqrt(beta_lse) * state.stddev(index);
  const double mu = state.mean_at(index);
  return std::min(mu + half_width - t, t - mu + half_width);
}

Membership safe_set(const GpState& state, const SafeParams& params) {
  if (!(params.gamma_safe >= 0.0)) {
    throw Error(ErrorCode::InvalidHyperparameter, "gamma_safe must be >= 0");
  }
  std::vector<bool> flags(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    flags[i] = state.mean_at(i) - params.gamma_safe * std::sqrt(state.variance(i) + state.noise_var()) >
               params.t;
  }
  return Membership(std::move(flags));
}

std::vector<double> acquisition_scores(const GpState& state, const AcquisitionKind& kind) {
  return sweep(state, kind);
}

Selection select_point(const GpState& state, const AcquisitionKind& kind,
                       const std::optional<SafeParams>& safe) {
  std::vector<std::size_t> candidates;
  if (safe) {
    const Membership allowed = safe_set(state, *safe);
    if (allowed.size() == 0) {
      throw Error(ErrorCode::EmptySafeSet, "no grid point satisfies the safety predicate");
    }
    for (std::size_t i = 0; i < allowed.length(); ++i) {
      if (allowed.flags()[i]) candidates.push_back(i);
    }
  } else {
    candidates.resize(state.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = i;
  }

  if (const auto* random = std::get_if<RandomChoice>(&kind)) {
    RandomStream rng(derive_seed(random->seed, {kRandomAcquisitionStream, state.n_obs()}));
    return Selection{candidates[rng.index(candidates.size())], 0.0};
  }

  const std::vector<double> scores = sweep(state, kind);
  Selection best{candidates.front(), scores[candidates.front()]};
  for (const std::size_t i : candidates) {
    if (scores[i] > best.score) best = Selection{i, scores[i]};
  }
  return best;
}

RmileBounds rmile_bounds(double sigma_plus, const RmileParams& params, double sigma_bar,
                         std::size_t m, double sigma_eps) {
  if (!(sigma_plus >= 0.0) || !(sigma_bar >= 0.0) || !(sigma_eps >= 0.0) ||
      !(params.classify.shift >= 0.0) || !(params.gamma >= 0.0)) {
    throw Error(ErrorCode::InvalidBoundsInput, "bounds need non-negative sd, sigma_bar, sigma_eps, eps, gamma");
  }
  if (sigma_bar < sigma_plus) {
    throw Error(ErrorCode::InvalidBoundsInput, "sigma_bar must be at least the current sd");
  }
  const double lower = params.gamma * sigma_plus;
  if (sigma_plus == 0.0) return RmileBounds{0.0, 0.0};
  const double arg = -(params.classify.shift / 2.0) * sigma_eps / (sigma_bar * sigma_plus);
  return RmileBounds{lower, std::max(static_cast<double>(m) * normal_cdf(arg), lower)};
}

}  // namespace levelset
