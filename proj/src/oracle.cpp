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

#include "levelset/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "levelset/error.hpp"

namespace levelset {

namespace {

constexpr std::size_t kMinSamples = 100;
constexpr std::size_t kRepeatedSamplingMax = 100;

// Welford accumulator.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  McEstimate estimate(std::uint64_t seed) const {
    const auto n = static_cast<double>(n_);
    const double var = n_ > 1 ? m2_ / (n - 1.0) : 0.0;
    return McEstimate{mean_, std::sqrt(var / n), n_, seed};
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

void check_samples(std::size_t n_samples) {
  if (n_samples < kMinSamples) {
    throw Error(ErrorCode::InvalidInput, "Monte-Carlo estimates need at least 100 samples");
  }
}

double predictive_sd(const GpState& state, std::size_t sample_at) {
  return std::sqrt(state.variance(sample_at) + state.noise_var());
}

}  // namespace

McEstimate mc_expected_set_size(const GpState& state, std::size_t sample_at,
                                const ClassifyParams& classify, std::size_t n_samples,
                                std::uint64_t seed) {
  state.check_index(sample_at);
  check_samples(n_samples);
  const ClassifyParams unshifted = classify.with_shift(0.0);
  RandomStream rng(derive_seed(seed, {kMonteCarloStream, sample_at}));
  const double mu = state.mean_at(sample_at);
  const double sd = predictive_sd(state, sample_at);

  RunningStats stats;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double y = mu + sd * rng.normal();
    const GpState next = observe(state, Observation{sample_at, y});
    stats.add(static_cast<double>(levelset::classify(next, unshifted).size()));
  }
  return stats.estimate(seed);
}

bool within_band(double closed, const McEstimate& mc) {
  const double resolution = 1.0 / static_cast<double>(std::max<std::size_t>(mc.n_samples, 1));
  return std::abs(closed - mc.mean) <= 4.0 * std::max(mc.std_error, resolution);
}

VarReductionIdentity mc_var_reduction_identity(const GpState& state, std::size_t sample_at,
                                               double beta, std::size_t n_samples,
                                               std::uint64_t seed) {
  state.check_index(sample_at);
  check_samples(n_samples);
  RandomStream rng(derive_seed(seed, {kMonteCarloStream, sample_at, 1}));
  const double mu = state.mean_at(sample_at);
  const double sd = predictive_sd(state, sample_at);
  const std::size_t m = state.size();

  double closed = 0.0;
  {
    const GpState next = observe(state, Observation{sample_at, mu});
    for (std::size_t i = 0; i < m; ++i) closed += next.stddev(i) - state.stddev(i);
    closed *= -beta;
  }

  RunningStats stats;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const GpState next = observe(state, Observation{sample_at, mu + sd * rng.normal()});
    double shift = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      shift += (next.mean_at(i) - beta * next.stddev(i)) - (state.mean_at(i) - beta * state.stddev(i));
    }
    stats.add(shift);
  }
  return VarReductionIdentity{stats.estimate(seed), closed};
}

double repeated_sampling_variance(double sigma0_sq, double sigma_eps_sq, std::size_t k) {
  if (!(sigma0_sq > 0.0) || !(sigma_eps_sq > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "variances must be positive");
  }
  return sigma_eps_sq / (static_cast<double>(k) + sigma_eps_sq / sigma0_sq);
}

bool GpLawReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const LawCheck& c) { return c.passed; });
}

double max_state_deviation(const GpState& a, const GpState& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "states differ in size");
  return std::max((a.mean() - b.mean()).cwiseAbs().maxCoeff(),
                  (a.cov() - b.cov()).cwiseAbs().maxCoeff());
}

GpLawReport verify_gp_laws(const GridDomain& domain, const PriorSpec& prior,
                           std::span<const Observation> observations, double tolerance,
                           const UpdateFn& update) {
  const UpdateFn step = update ? update : UpdateFn([](GpState s, const Observation& o) {
    return observe(std::move(s), o);
  });
  const GpState base = build_prior(domain, prior);
  const auto fold = [&](GpState s, std::span<const Observation> obs) {
    for (const Observation& o : obs) s = step(std::move(s), o);
    return s;
  };
  const auto record = [&](GpLawReport& report, std::string name, double deviation) {
    report.checks.push_back(LawCheck{std::move(name), deviation <= tolerance, deviation});
  };

  GpLawReport report;
  std::vector<Observation> reversed(observations.rbegin(), observations.rend());
  std::vector<Observation> shuffled(observations.begin(), observations.end());
  RandomStream rng(derive_seed(observations.size(), {0x1a45}));
  shuffle(std::span<Observation>(shuffled), rng);

  const GpState batch = batch_condition(base, observations);
  const GpState folded = fold(base, observations);

  double exch_batch = 0.0;
  double exch_fold = 0.0;
  for (const auto* perm : {&reversed, &shuffled}) {
    exch_batch = std::max(exch_batch, max_state_deviation(batch, batch_condition(base, *perm)));
    exch_fold = std::max(exch_fold, max_state_deviation(folded, fold(base, *perm)));
  }
  record(report, "exchangeability_batch", exch_batch);
  record(report, "exchangeability_fold", exch_fold);
  record(report, "batch_vs_fold", max_state_deviation(batch, folded));

  const std::size_t split = observations.size() / 2;
  const GpState prefix = batch_condition(base, observations.first(split));
  record(report, "associativity_prefix",
         max_state_deviation(batch, fold(prefix, observations.subspan(split))));

  // Relative deviation from the closed form for K-fold sampling from the prior.
  double repeated = 0.0;
  std::vector<std::size_t> indices;
  for (const Observation& o : observations) indices.push_back(o.index);
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (const std::size_t index : indices) {
    GpState s = base;
    for (std::size_t k = 1; k <= kRepeatedSamplingMax; ++k) {
      s = step(std::move(s), Observation{index, base.mean_at(index)});
      const double expected = repeated_sampling_variance(base.variance(index), base.noise_var(), k);
      repeated = std::max(repeated, std::abs(s.variance(index) - expected) / expected);
    }
  }
  record(report, "repeated_sampling", repeated);

  // Largest single-step increase of any variance.
  double increase = 0.0;
  GpState s = base;
  for (const Observation& o : observations) {
    GpState next = step(s, o);
    increase = std::max(increase, (next.cov().diagonal() - s.cov().diagonal()).maxCoeff());
    s = std::move(next);
  }
  report.checks.push_back(LawCheck{"variance_monotonicity", increase <= 0.0, std::max(increase, 0.0)});
  return report;
}

GpState random_gp_state(std::size_t rows, std::size_t cols, RandomStream& rng) {
  const std::size_t m = rows * cols;
  Matrix points(static_cast<Eigen::Index>(m), 2);
  const double jitter = 0.25 / static_cast<double>(std::max(rows, cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto i = static_cast<Eigen::Index>(r * cols + c);
      const double x = rows == 1 ? 0.5 : static_cast<double>(r) / static_cast<double>(rows - 1);
      const double y = cols == 1 ? 0.5 : static_cast<double>(c) / static_cast<double>(cols - 1);
      points(i, 0) = x + jitter * (2.0 * rng.uniform() - 1.0);
      points(i, 1) = y + jitter * (2.0 * rng.uniform() - 1.0);
    }
  }
  const GridDomain domain(std::move(points));

  PriorSpec prior;
  prior.kernel.sigma_ker = 0.5 + 1.5 * rng.uniform();
  prior.kernel.length_scale = 0.15 + 0.35 * rng.uniform();
  prior.noise_var = 0.05 + 0.45 * rng.uniform();
  Vector mean(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < mean.size(); ++i) mean(i) = 2.0 * rng.uniform() - 1.0;
  prior.mean = mean;

  GpState state = build_prior(domain, prior);
  const std::size_t n_obs = rng.index(6);
  for (std::size_t k = 0; k < n_obs; ++k) {
    state = observe(std::move(state), Observation{rng.index(m), 4.0 * rng.uniform() - 2.0});
  }
  return state;
}

}  // namespace levelset
