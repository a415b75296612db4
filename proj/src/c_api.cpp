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

#include "levelset/levelset.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <span>
#include <string>

#include "levelset/acquisition.hpp"
#include "levelset/classify.hpp"
#include "levelset/error.hpp"
#include "levelset/grid_gp.hpp"
#include "levelset/harness.hpp"
#include "levelset/verify.hpp"

struct ls_gp {
  levelset::GpState state;
};

namespace {

using levelset::ErrorCode;

thread_local std::string last_error;

ls_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidHyperparameter: return LS_ERR_INVALID_HYPERPARAMETER;
    case ErrorCode::InvalidDomain: return LS_ERR_INVALID_DOMAIN;
    case ErrorCode::PriorNotPositiveDefinite: return LS_ERR_PRIOR_NOT_PD;
    case ErrorCode::SolveFailure: return LS_ERR_SOLVE_FAILURE;
    case ErrorCode::NumericalBreakdown: return LS_ERR_NUMERICAL_BREAKDOWN;
    case ErrorCode::IndexOutOfRange: return LS_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::InvalidDelta: return LS_ERR_INVALID_DELTA;
    case ErrorCode::LengthMismatch: return LS_ERR_LENGTH_MISMATCH;
    case ErrorCode::EmptySafeSet: return LS_ERR_EMPTY_SAFE_SET;
    case ErrorCode::InvalidBoundsInput: return LS_ERR_INVALID_BOUNDS_INPUT;
    case ErrorCode::InvalidInput: return LS_ERR_INVALID_ARGUMENT;
    case ErrorCode::Config: return LS_ERR_CONFIG;
    case ErrorCode::Io: return LS_ERR_IO;
  }
  return LS_ERR_INTERNAL;
}

ls_status fail(ls_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs fn, translating exceptions into a status and the thread's last error.
template <class Fn>
ls_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return LS_OK;
  } catch (const levelset::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LS_ERR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw levelset::Error(ErrorCode::InvalidInput, message);
}

levelset::AcquisitionKind to_kind(const ls_acq_spec& spec) {
  levelset::AcquisitionOptions options;
  options.epsilon = spec.epsilon;
  options.gamma = spec.gamma;
  options.beta_lse = spec.beta_lse;
  options.seed = spec.seed;
  if (spec.thresholds != nullptr) options.thresholds.assign(spec.thresholds, spec.thresholds + spec.n_thresholds);
  const char* name = nullptr;
  switch (spec.kind) {
    case LS_ACQ_RMILE: name = "rmile"; break;
    case LS_ACQ_MILE: name = "mile"; break;
    case LS_ACQ_MULTI: name = "multi"; break;
    case LS_ACQ_VARRED: name = "varred"; break;
    case LS_ACQ_STRADDLE: name = "straddle"; break;
    case LS_ACQ_LSE: name = "lse"; break;
    case LS_ACQ_RANDOM: name = "random"; break;
  }
  require(name != nullptr, "unknown acquisition kind");
  try {
    return levelset::make_acquisition(name, options, spec.t, spec.delta);
  } catch (const levelset::Error& e) {
    // Bad numbers in a spec struct are argument errors, not config errors.
    if (e.code() == ErrorCode::Config) throw levelset::Error(ErrorCode::InvalidInput, e.what());
    throw;
  }
}

std::size_t resolve_threads(int threads) {
  return threads < 0 ? levelset::threads_from_env() : static_cast<std::size_t>(threads);
}

}  // namespace

extern "C" {

const char* ls_last_error(void) { return last_error.c_str(); }

const char* ls_status_name(ls_status status) {
  switch (status) {
    case LS_OK: return "ok";
    case LS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LS_ERR_INVALID_HYPERPARAMETER: return "invalid hyperparameter";
    case LS_ERR_INVALID_DOMAIN: return "invalid domain";
    case LS_ERR_PRIOR_NOT_PD: return "prior not positive definite";
    case LS_ERR_SOLVE_FAILURE: return "solve failure";
    case LS_ERR_NUMERICAL_BREAKDOWN: return "numerical breakdown";
    case LS_ERR_INDEX_OUT_OF_RANGE: return "index out of range";
    case LS_ERR_INVALID_DELTA: return "invalid delta";
    case LS_ERR_LENGTH_MISMATCH: return "length mismatch";
    case LS_ERR_EMPTY_SAFE_SET: return "empty safe set";
    case LS_ERR_INVALID_BOUNDS_INPUT: return "invalid bounds input";
    case LS_ERR_CONFIG: return "config error";
    case LS_ERR_IO: return "i/o error";
    case LS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ls_version(void) { return "0.1.0"; }

ls_status ls_gp_create_grid(const double* lower, const double* upper, const size_t* resolution,
                            size_t dim, double prior_mean, double sigma_ker, double length_scale,
                            double noise_var, ls_gp** out) {
  return guarded([&] {
    require(lower && upper && resolution && out, "null pointer argument");
    const auto domain = levelset::GridDomain::box(std::span(lower, dim), std::span(upper, dim),
                                                  std::span(resolution, dim));
    levelset::PriorSpec prior;
    prior.mean = prior_mean;
    prior.kernel = levelset::KernelSpec{sigma_ker, length_scale};
    prior.noise_var = noise_var;
    *out = new ls_gp{levelset::build_prior(domain, prior)};
  });
}

ls_status ls_gp_create(const double* mean, const double* cov, size_t m, double noise_var, ls_gp** out) {
  return guarded([&] {
    require(mean && cov && out, "null pointer argument");
    require(m > 0, "empty prior");
    const auto n = static_cast<Eigen::Index>(m);
    levelset::Vector mu = Eigen::Map<const levelset::Vector>(mean, n);
    levelset::Matrix k = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(cov, n, n);
    *out = new ls_gp{levelset::build_prior(std::move(mu), std::move(k), noise_var)};
  });
}

ls_status ls_gp_clone(const ls_gp* gp, ls_gp** out) {
  return guarded([&] {
    require(gp && out, "null pointer argument");
    *out = new ls_gp{gp->state};
  });
}

void ls_gp_destroy(ls_gp* gp) { delete gp; }

ls_status ls_gp_size(const ls_gp* gp, size_t* out) {
  return guarded([&] {
    require(gp && out, "null pointer argument");
    *out = gp->state.size();
  });
}

ls_status ls_gp_observe(ls_gp* gp, size_t index, double y) {
  return guarded([&] {
    require(gp != nullptr, "null pointer argument");
    require(std::isfinite(y), "observation must be finite");
    gp->state.check_index(index);
    // Update a copy so a failing update leaves the handle untouched.
    levelset::GpState next = gp->state;
    next.observe_in_place(levelset::Observation{index, y});
    gp->state = std::move(next);
  });
}

ls_status ls_gp_mean(const ls_gp* gp, size_t index, double* out) {
  return guarded([&] {
    require(gp && out, "null pointer argument");
    gp->state.check_index(index);
    *out = gp->state.mean_at(index);
  });
}

ls_status ls_gp_variance(const ls_gp* gp, size_t index, double* out) {
  return guarded([&] {
    require(gp && out, "null pointer argument");
    gp->state.check_index(index);
    *out = gp->state.variance(index);
  });
}

ls_status ls_gp_covariance(const ls_gp* gp, size_t i, size_t j, double* out) {
  return guarded([&] {
    require(gp && out, "null pointer argument");
    gp->state.check_index(i);
    gp->state.check_index(j);
    *out = gp->state.covariance(i, j);
  });
}

ls_status ls_classify(const ls_gp* gp, double t, double delta, double shift, unsigned char* flags,
                      size_t* count) {
  return guarded([&] {
    require(gp != nullptr, "null pointer argument");
    const levelset::Membership set = levelset::classify(gp->state, levelset::ClassifyParams::make(t, delta, shift));
    if (flags != nullptr) {
      for (std::size_t i = 0; i < set.length(); ++i) flags[i] = set.flags()[i] ? 1 : 0;
    }
    if (count != nullptr) *count = set.size();
  });
}

ls_status ls_expected_set_size(const ls_gp* gp, size_t sample_at, double t, double delta, double* out) {
  return guarded([&] {
    require(gp && out, "null pointer argument");
    *out = levelset::expected_set_size(gp->state, sample_at, levelset::ClassifyParams::make(t, delta));
  });
}

ls_acq_spec ls_acq_spec_default(ls_acq_kind kind, double t) {
  return ls_acq_spec{kind,
                     t,
                     levelset::kDefaultDelta,
                     levelset::kDefaultEpsilon,
                     levelset::kDefaultGamma,
                     levelset::kDefaultBetaLse,
                     nullptr,
                     0,
                     0};
}

ls_status ls_acq_scores(const ls_gp* gp, const ls_acq_spec* spec, double* scores) {
  return guarded([&] {
    require(gp && spec && scores, "null pointer argument");
    const auto kind = to_kind(*spec);
    require(spec->kind != LS_ACQ_RANDOM, "random choice has no scores");
    const std::vector<double> values = levelset::acquisition_scores(gp->state, kind);
    std::copy(values.begin(), values.end(), scores);
  });
}

ls_status ls_select_point(const ls_gp* gp, const ls_acq_spec* spec, const ls_safe_spec* safe,
                          size_t* index, double* score) {
  return guarded([&] {
    require(gp && spec && index, "null pointer argument");
    std::optional<levelset::SafeParams> safe_params;
    if (safe != nullptr) safe_params = levelset::SafeParams{safe->t, safe->gamma_safe};
    const levelset::Selection pick = levelset::select_point(gp->state, to_kind(*spec), safe_params);
    *index = pick.index;
    if (score != nullptr) *score = pick.score;
  });
}

ls_status ls_run_file(const char* config_path, const char* out_path, int threads) {
  return guarded([&] {
    require(config_path && out_path, "null pointer argument");
    levelset::run_file(config_path, out_path, resolve_threads(threads));
  });
}

ls_status ls_compare_file(const char* config_path, const char* acquisitions, const char* out_path,
                          int threads) {
  return guarded([&] {
    require(config_path && acquisitions && out_path, "null pointer argument");
    levelset::compare_file(config_path, acquisitions, out_path, resolve_threads(threads));
  });
}

ls_status ls_verify(int level, int inject_fault, int* passed, char** report) {
  return guarded([&] {
    require(passed && report, "null pointer argument");
    require(level == 0 || level == 1, "level must be 0 (quick) or 1 (full)");
    const levelset::VerifyReport r = levelset::run_verification(
        level == 1 ? levelset::VerifyLevel::Full : levelset::VerifyLevel::Quick, inject_fault != 0);
    const std::string text = r.text();
    char* copy = static_cast<char*>(std::malloc(text.size() + 1));
    if (copy == nullptr) throw std::bad_alloc();
    std::memcpy(copy, text.c_str(), text.size() + 1);
    *passed = r.passed() ? 1 : 0;
    *report = copy;
  });
}

void ls_string_free(char* s) { std::free(s); }

}  // extern "C"
