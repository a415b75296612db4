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

#ifndef LEVELSET_GRID_GP_HPP
#define LEVELSET_GRID_GP_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <variant>

#include <Eigen/Core>

namespace levelset {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// The m distinct candidate points. Row i of points() is z_i; the row order is
/// the grid index used everywhere else (including argmax tie-breaks).
class GridDomain {
 public:
  /// Throws InvalidDomain if empty, zero-dimensional, non-finite, or if two
  /// rows coincide.
  explicit GridDomain(Matrix points);

  /// Uniform inclusive linspace per axis, flattened row-major (the last axis
  /// varies fastest). A resolution of 1 places the single node at `lower`.
  static GridDomain box(std::span<const double> lower,
                        std::span<const double> upper,
                        std::span<const std::size_t> resolution);

  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(points_.cols()); }
  const Matrix& points() const noexcept { return points_; }
  Eigen::RowVectorXd point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)); }

 private:
  Matrix points_;
};

/// Squared-exponential kernel sigma_ker^2 * exp(-|x - x'|^2 / (2 l^2)).
struct KernelSpec {
  double sigma_ker = 1.0;
  double length_scale = 1.0;

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                    const Eigen::Ref<const Eigen::RowVectorXd>& b) const;
};

struct PriorSpec {
  std::variant<double, Vector> mean = 0.0;  // constant or one value per point
  KernelSpec kernel;
  double noise_var = 1.0;                   // algorithm-side sigma_eps^2, > 0
};

struct Observation {
  std::size_t index = 0;
  double y = 0.0;
};

/// Exact posterior over the grid: mean vector, full covariance and the noise
/// variance used for conditioning.
///
/// Invariants: cov is symmetric within 1e-10 per entry, its diagonal is
/// non-negative, and noise_var > 0.
class GpState {
 public:
  /// Validates the invariants above (not positive definiteness; see
  /// build_prior). Throws InvalidHyperparameter or InvalidInput.
  GpState(Vector mean, Matrix cov, double noise_var, std::size_t n_obs = 0);

  std::size_t size() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  const Vector& mean() const noexcept { return mean_; }
  const Matrix& cov() const noexcept { return cov_; }
  double noise_var() const noexcept { return noise_var_; }
  std::size_t n_obs() const noexcept { return n_obs_; }

  double mean_at(std::size_t i) const { return mean_(idx(i)); }
  double variance(std::size_t i) const { return cov_(idx(i), idx(i)); }
  double stddev(std::size_t i) const;
  double covariance(std::size_t i, std::size_t j) const { return cov_(idx(i), idx(j)); }

  /// Throws IndexOutOfRange unless i < size().
  void check_index(std::size_t i) const;

  /// Rank-one conditioning on one noisy observation; see observe().
  void observe_in_place(const Observation& obs);

 private:
  friend GpState batch_condition(const GpState&, std::span<const Observation>);

  static Eigen::Index idx(std::size_t i) noexcept { return static_cast<Eigen::Index>(i); }
  void finalize_covariance();

  Vector mean_;
  Matrix cov_;
  double noise_var_;
  std::size_t n_obs_;
};

/// Prior covariance matrix k_0(z_i, z_j) over the grid.
Matrix prior_covariance(const GridDomain& domain, const KernelSpec& kernel);

/// Prior state for the grid. Throws InvalidHyperparameter for non-positive
/// sigma_ker, length_scale or noise_var, InvalidInput for a mean vector of the
/// wrong length, and PriorNotPositiveDefinite when the prior matrix fails the
/// eigenvalue gate (an eigenvalue below -1e-10 * max(1, max diagonal)).
GpState build_prior(const GridDomain& domain, const PriorSpec& prior);

/// Same gate for an explicitly given prior mean and covariance.
GpState build_prior(Vector mean, Matrix cov, double noise_var);

/// Conditions on one observation:
///   c = cov[:, idx], d = cov[idx, idx] + noise_var
///   mean' = mean + c (y - mean[idx]) / d,  cov' = cov - c c^T / d
/// then re-symmetrizes. cov' does not depend on y. Diagonal entries in
/// [-1e-12, 0) are clamped to zero; anything lower throws NumericalBreakdown.
GpState observe(GpState state, const Observation& obs);

/// Conditions `state` on all observations with a single Cholesky solve
/// against (K_n + noise_var I). Throws SolveFailure if that system cannot be
/// factorized.
GpState batch_condition(const GpState& state, std::span<const Observation> observations);

/// build_prior followed by batch_condition: the reference path for observe.
GpState batch_posterior(const GridDomain& domain, const PriorSpec& prior,
                        std::span<const Observation> observations);

/// Posterior variance at `target` after a hypothetical sample at `sample_at`:
/// var(target) - cov(target, sample_at)^2 / (var(sample_at) + noise_var),
/// clamped at zero.
double one_step_variance(const GpState& state, std::size_t target, std::size_t sample_at);

/// True when |cov(i, j)| <= 1e-12 * max(1, sqrt(var(i) var(j))). Such
/// covariances are treated as exactly zero wherever they would be divided by.
bool negligible_covariance(const GpState& state, std::size_t i, std::size_t j);

/// The outcome y at `sample_at` for which the updated bound
/// mean'(target) - beta * sd'(target) equals t. Empty when the covariance
/// between the two points is negligible (the sample cannot move the target).
std::optional<double> limit_outcome(const GpState& state, std::size_t target,
                                    std::size_t sample_at, double t, double beta);

}  // namespace levelset

#endif  // LEVELSET_GRID_GP_HPP
