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

#include "levelset/grid_gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "levelset/error.hpp"

namespace levelset {

namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kClampTolerance = 1e-12;
constexpr double kZeroCovariance = 1e-12;
constexpr double kEigenTolerance = 1e-10;

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidHyperparameter,
                std::string(name) + " must be finite and > 0, got " + std::to_string(value));
  }
}

}  // namespace

// GridDomain ------------------------------------------------------------------

GridDomain::GridDomain(Matrix points) : points_(std::move(points)) {
  if (points_.rows() == 0 || points_.cols() == 0) {
    throw Error(ErrorCode::InvalidDomain, "grid needs at least one point of dimension >= 1");
  }
  if (!points_.allFinite()) {
    throw Error(ErrorCode::InvalidDomain, "grid coordinates must be finite");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(points_.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto row_less = [this](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index k = 0; k < points_.cols(); ++k) {
      if (points_(a, k) != points_(b, k)) return points_(a, k) < points_(b, k);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points_.row(order[i - 1]) == points_.row(order[i])) {
      throw Error(ErrorCode::InvalidDomain,
                  "grid points " + std::to_string(std::min(order[i - 1], order[i])) + " and " +
                      std::to_string(std::max(order[i - 1], order[i])) + " coincide");
    }
  }
}

GridDomain GridDomain::box(std::span<const double> lower, std::span<const double> upper,
                           std::span<const std::size_t> resolution) {
  const std::size_t d = lower.size();
  if (d == 0 || upper.size() != d || resolution.size() != d) {
    throw Error(ErrorCode::InvalidDomain, "box bounds and resolution must share a non-zero dimension");
  }
  std::size_t m = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (resolution[k] < 1) throw Error(ErrorCode::InvalidDomain, "resolution must be >= 1 on every axis");
    if (!(upper[k] > lower[k]) && resolution[k] > 1) {
      throw Error(ErrorCode::InvalidDomain, "upper bound must exceed lower bound on axis " + std::to_string(k));
    }
    m *= resolution[k];
  }

  Matrix points(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  std::vector<std::size_t> counter(d, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double frac = resolution[k] == 1 ? 0.0
                                             : static_cast<double>(counter[k]) /
                                                   static_cast<double>(resolution[k] - 1);
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          lower[k] + frac * (upper[k] - lower[k]);
    }
    for (std::size_t k = d; k-- > 0;) {
      if (++counter[k] < resolution[k]) break;
      counter[k] = 0;
    }
  }
  return GridDomain(std::move(points));
}

double KernelSpec::operator()(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                              const Eigen::Ref<const Eigen::RowVectorXd>& b) const {
  const double sq = (a - b).squaredNorm();
  return sigma_ker * sigma_ker * std::exp(-sq / (2.0 * length_scale * length_scale));
}

// GpState ---------------------------------------------------------------------

GpState::GpState(Vector mean, Matrix cov, double noise_var, std::size_t n_obs)
    : mean_(std::move(mean)), cov_(std::move(cov)), noise_var_(noise_var), n_obs_(n_obs) {
  check_positive(noise_var_, "noise_var");
  if (mean_.size() == 0 || cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw Error(ErrorCode::InvalidInput, "mean and covariance sizes disagree");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "mean and covariance must be finite");
  }
  for (Eigen::Index i = 0; i < cov_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < cov_.cols(); ++j) {
      if (std::abs(cov_(i, j) - cov_(j, i)) > kSymmetryTolerance) {
        throw Error(ErrorCode::InvalidInput, "covariance is not symmetric");
      }
    }
  }
  finalize_covariance();
}

double GpState::stddev(std::size_t i) const { return std::sqrt(variance(i)); }

void GpState::check_index(std::size_t i) const {
  if (i >= size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "grid index " + std::to_string(i) + " out of range for m = " + std::to_string(size()));
  }
}

void GpState::finalize_covariance() {
  const Eigen::Index m = cov_.rows();
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = j + 1; i < m; ++i) {
      const double avg = 0.5 * (cov_(i, j) + cov_(j, i));
      cov_(i, j) = avg;
      cov_(j, i) = avg;
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    double& v = cov_(i, i);
    if (v < 0.0) {
      if (v < -kClampTolerance) {
        throw Error(ErrorCode::NumericalBreakdown,
                    "posterior variance " + std::to_string(v) + " at index " + std::to_string(i));
      }
      v = 0.0;
    }
  }
}

void GpState::observe_in_place(const Observation& obs) {
  check_index(obs.index);
  const Eigen::Index k = idx(obs.index);
  const Vector c = cov_.col(k);
  const double d = c(k) + noise_var_;
  mean_ += c * ((obs.y - mean_(k)) / d);
  // Lower triangle only; finalize_covariance mirrors it.
  const Eigen::Index m = cov_.rows();
  for (Eigen::Index j = 0; j < m; ++j) {
    const double scaled = c(j) / d;
    for (Eigen::Index i = j; i < m; ++i) cov_(i, j) -= c(i) * scaled;
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = j + 1; i < m; ++i) cov_(j, i) = cov_(i, j);
  }
  finalize_covariance();
  ++n_obs_;
}

// Free functions ---------------------------------------------------------------

Matrix prior_covariance(const GridDomain& domain, const KernelSpec& kernel) {
  const auto m = static_cast<Eigen::Index>(domain.size());
  Matrix cov(m, m);
  const Matrix& pts = domain.points();
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = j; i < m; ++i) {
      const double k = kernel(pts.row(i), pts.row(j));
      cov(i, j) = k;
      cov(j, i) = k;
    }
  }
  return cov;
}

GpState build_prior(Vector mean, Matrix cov, double noise_var) {
  check_positive(noise_var, "noise_var");
  GpState state(std::move(mean), std::move(cov), noise_var);

  // Dense SE kernels on fine grids are numerically singular; rounding leaves
  // eigenvalues slightly below zero, and triangular pivots amplify that noise
  // by orders of magnitude. The symmetric eigenvalues are backward stable.
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(state.cov(), Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, state.cov().diagonal().maxCoeff());
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -kEigenTolerance * scale) {
    throw Error(ErrorCode::PriorNotPositiveDefinite,
                "prior covariance has an eigenvalue below -1e-10 * max variance");
  }
  return state;
}

GpState build_prior(const GridDomain& domain, const PriorSpec& prior) {
  check_positive(prior.kernel.sigma_ker, "sigma_ker");
  check_positive(prior.kernel.length_scale, "length_scale");
  check_positive(prior.noise_var, "noise_var");

  const auto m = static_cast<Eigen::Index>(domain.size());
  Vector mean;
  if (const auto* constant = std::get_if<double>(&prior.mean)) {
    mean = Vector::Constant(m, *constant);
  } else {
    mean = std::get<Vector>(prior.mean);
    if (mean.size() != m) {
      throw Error(ErrorCode::InvalidInput, "prior mean has " + std::to_string(mean.size()) +
                                               " entries for a grid of " + std::to_string(m));
    }
  }
  return build_prior(std::move(mean), prior_covariance(domain, prior.kernel), prior.noise_var);
}

GpState observe(GpState state, const Observation& obs) {
  state.observe_in_place(obs);
  return state;
}

GpState batch_condition(const GpState& state, std::span<const Observation> observations) {
  if (observations.empty()) return state;
  for (const Observation& obs : observations) state.check_index(obs.index);

  const auto n = static_cast<Eigen::Index>(observations.size());
  const auto m = static_cast<Eigen::Index>(state.size());
  Matrix cross(m, n);  // k(z_i, x_j)
  Vector residual(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto k = static_cast<Eigen::Index>(observations[static_cast<std::size_t>(j)].index);
    cross.col(j) = state.cov().col(k);
    residual(j) = observations[static_cast<std::size_t>(j)].y - state.mean()(k);
  }
  Matrix gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      gram(i, j) = cross(static_cast<Eigen::Index>(observations[static_cast<std::size_t>(i)].index), j);
    }
  }
  gram.diagonal().array() += state.noise_var();

  const Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SolveFailure, "K_n + noise_var I is not numerically positive definite");
  }

  GpState out = state;
  out.mean_ += cross * llt.solve(residual);
  out.cov_ -= cross * llt.solve(cross.transpose());
  out.n_obs_ += observations.size();
  out.finalize_covariance();
  return out;
}

GpState batch_posterior(const GridDomain& domain, const PriorSpec& prior,
                        std::span<const Observation> observations) {
  return batch_condition(build_prior(domain, prior), observations);
}

double one_step_variance(const GpState& state, std::size_t target, std::size_t sample_at) {
  state.check_index(target);
  state.check_index(sample_at);
  const double c = state.covariance(target, sample_at);
  const double v = state.variance(target) - c * c / (state.variance(sample_at) + state.noise_var());
  return std::max(v, 0.0);
}

bool negligible_covariance(const GpState& state, std::size_t i, std::size_t j) {
  const double scale = std::max(1.0, std::sqrt(state.variance(i) * state.variance(j)));
  return std::abs(state.covariance(i, j)) <= kZeroCovariance * scale;
}

std::optional<double> limit_outcome(const GpState& state, std::size_t target,
                                    std::size_t sample_at, double t, double beta) {
  state.check_index(target);
  state.check_index(sample_at);
  if (negligible_covariance(state, target, sample_at)) return std::nullopt;
  const double c = state.covariance(target, sample_at);
  const double predictive = state.variance(sample_at) + state.noise_var();
  const double sd_plus = std::sqrt(one_step_variance(state, target, sample_at));
  return predictive / c * (t + beta * sd_plus - state.mean_at(target)) + state.mean_at(sample_at);
}

}  // namespace levelset
