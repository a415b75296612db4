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

#include "levelset/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>

#include "levelset/acquisition.hpp"
#include "levelset/classify.hpp"
#include "levelset/error.hpp"
#include "levelset/rng.hpp"

namespace levelset {

namespace {

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double uniform(RandomStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

double log_uniform(RandomStream& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

GpState random_state(RandomStream& rng, std::size_t max_side) {
  const std::size_t rows = 1 + rng.index(max_side);
  const std::size_t cols = 1 + rng.index(max_side);
  return random_gp_state(rows, cols, rng);
}

template <class Fn>
CheckResult timed(std::string name, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult result;
  try {
    result = fn();
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("threw: ") + e.what();
  }
  result.name = std::move(name);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::size_t argmin_lowest(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

}  // namespace

CheckResult check_gp_laws(std::size_t n_sequences, std::size_t n_obs, double tolerance,
                          std::uint64_t seed, const UpdateFn& update) {
  return timed("gp_laws", [&] {
    RandomStream rng(seed);
    std::vector<std::string> failed;
    double worst = 0.0;
    for (std::size_t s = 0; s < n_sequences; ++s) {
      const std::size_t rows = 2 + rng.index(4);
      const std::size_t cols = 2 + rng.index(4);
      const std::vector<double> lower{0.0, 0.0}, upper{1.0, 1.0};
      const std::vector<std::size_t> res{rows, cols};
      const GridDomain domain = GridDomain::box(lower, upper, res);
      PriorSpec prior;
      prior.mean = uniform(rng, -1.0, 1.0);
      prior.kernel = KernelSpec{uniform(rng, 0.5, 2.0), uniform(rng, 0.15, 0.5)};
      prior.noise_var = uniform(rng, 0.05, 0.5);
      std::vector<Observation> obs(n_obs);
      for (auto& o : obs) o = Observation{rng.index(domain.size()), uniform(rng, -2.0, 2.0)};

      const GpLawReport report = verify_gp_laws(domain, prior, obs, tolerance, update);
      for (const LawCheck& c : report.checks) {
        worst = std::max(worst, c.max_deviation);
        if (!c.passed && std::find(failed.begin(), failed.end(), c.name) == failed.end()) {
          failed.push_back(c.name);
        }
      }
    }
    std::string detail = format("%zu sequences of %zu observations, max deviation %.3g (tol %.1g)",
                                n_sequences, n_obs, worst, tolerance);
    for (const auto& name : failed) detail += "; failed " + name;
    return CheckResult{"", failed.empty(), detail, 0.0};
  });
}

CheckResult check_closed_form_mc(std::size_t n_states, std::size_t max_side, std::size_t n_samples,
                                 std::uint64_t seed) {
  return timed("closed_form_vs_monte_carlo", [&] {
    RandomStream rng(seed);
    std::size_t compared = 0;
    std::size_t failures = 0;
    double worst_z = 0.0;
    for (std::size_t s = 0; s < n_states; ++s) {
      const GpState state = random_state(rng, max_side);
      const double t = uniform(rng, -1.5, 1.5);
      const ClassifyParams params = ClassifyParams::make(t, uniform(rng, 0.6, 0.99));
      for (std::size_t i = 0; i < state.size(); ++i) {
        const double closed = expected_set_size(state, i, params);
        const McEstimate mc = mc_expected_set_size(state, i, params, n_samples, derive_seed(seed, {s, i}));
        const double diff = std::abs(closed - mc.mean);
        if (!within_band(closed, mc)) ++failures;
        if (mc.std_error > 0.0) worst_z = std::max(worst_z, diff / mc.std_error);
        ++compared;
      }
    }
    return CheckResult{"", failures == 0,
                       format("%zu states, %zu candidates, %zu samples each, max |z| %.2f, %zu outside 4 se",
                              n_states, compared, n_samples, worst_z, failures),
                       0.0};
  });
}

CheckResult check_variance_reduction_argmax(std::size_t n_states, std::uint64_t seed) {
  return timed("variance_reduction_argmax", [&] {
    RandomStream rng(seed);
    std::size_t mismatches = 0;
    for (std::size_t s = 0; s < n_states; ++s) {
      const GpState state = random_state(rng, 5);
      const std::size_t chosen = select_point(state, VarianceReduction{}).index;
      std::vector<double> summed(state.size(), 0.0);
      for (std::size_t j = 0; j < state.size(); ++j) {
        const GpState next = observe(state, Observation{j, state.mean_at(j)});
        for (std::size_t i = 0; i < state.size(); ++i) summed[j] += next.stddev(i);
      }
      if (argmin_lowest(summed) != chosen) ++mismatches;
    }
    return CheckResult{"", mismatches == 0,
                       format("%zu states, %zu index mismatches", n_states, mismatches), 0.0};
  });
}

CheckResult check_variance_reduction_identity(std::size_t n_states, std::size_t n_samples,
                                              std::uint64_t seed) {
  return timed("variance_reduction_identity", [&] {
    RandomStream rng(seed);
    std::size_t failures = 0;
    double worst_z = 0.0;
    for (std::size_t s = 0; s < n_states; ++s) {
      const GpState state = random_state(rng, 5);
      const std::size_t at = rng.index(state.size());
      const double beta = beta_from_delta(uniform(rng, 0.6, 0.99));
      const VarReductionIdentity id =
          mc_var_reduction_identity(state, at, beta, n_samples, derive_seed(seed, {s}));
      const double diff = std::abs(id.closed - id.mc.mean);
      if (!within_band(id.closed, id.mc)) ++failures;
      if (id.mc.std_error > 0.0) worst_z = std::max(worst_z, diff / id.mc.std_error);
    }
    return CheckResult{"", failures == 0,
                       format("%zu states, %zu samples each, max |z| %.2f, %zu outside 4 se", n_states,
                              n_samples, worst_z, failures),
                       0.0};
  });
}

CheckResult check_weighted_error_optimality(std::size_t n_triples, std::uint64_t seed) {
  return timed("weighted_error_optimality", [&] {
    RandomStream rng(seed);
    std::size_t violations = 0;
    for (std::size_t k = 0; k < n_triples; ++k) {
      const GpState state = random_state(rng, 5);
      const std::size_t i = rng.index(state.size());
      const double t = uniform(rng, -1.5, 1.5);
      const ClassifyParams params = ClassifyParams::make(t, uniform(rng, 0.05, 0.995));
      const bool flag = classify(state, params).contains(i);
      if (expected_weighted_error(state, i, flag, params) > expected_weighted_error(state, i, !flag, params)) {
        ++violations;
      }
    }
    return CheckResult{"", violations == 0, format("%zu triples, %zu violations", n_triples, violations),
                       0.0};
  });
}

CheckResult check_rmile_lower_bound(std::size_t n_states, std::uint64_t seed) {
  return timed("rmile_lower_bound", [&] {
    RandomStream rng(seed);
    std::size_t checked = 0;
    std::size_t violations = 0;
    for (std::size_t s = 0; s < n_states; ++s) {
      const GpState state = random_state(rng, 5);
      const double t = uniform(rng, -1.5, 1.5);
      const double delta = uniform(rng, 0.6, 0.99);
      const double eps = log_uniform(rng, 1e-12, 1e-1);
      const RmileParams params = RmileParams::make(t, delta, eps, log_uniform(rng, 1e-10, 1.0));
      const std::vector<double> scores = acquisition_scores(state, params);
      for (std::size_t i = 0; i < state.size(); ++i) {
        if (!(scores[i] >= params.gamma * state.stddev(i))) ++violations;
        if (!(rmile_score(state, i, params) >= params.gamma * state.stddev(i))) ++violations;
        ++checked;
      }
    }
    return CheckResult{"", violations == 0,
                       format("%zu candidates, %zu below gamma * sd", checked, violations), 0.0};
  });
}

CheckResult check_rmile_upper_bound(std::size_t n_states, std::uint64_t seed) {
  return timed("rmile_upper_bound", [&] {
    RandomStream rng(seed);
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t nontrivial = 0;  // cases where u < m / 2
    for (std::size_t s = 0; s < n_states; ++s) {
      GpState state = random_state(rng, 5);
      // Drive the variance at one point down by repeated sampling.
      const std::size_t at = rng.index(state.size());
      const std::size_t repeats = 1 + rng.index(50);
      for (std::size_t k = 0; k < repeats; ++k) {
        state.observe_in_place(Observation{at, uniform(rng, -2.0, 2.0)});
      }
      const double sd = state.stddev(at);
      if (sd == 0.0) continue;
      double sigma_bar = 0.0;
      for (std::size_t i = 0; i < state.size(); ++i) sigma_bar = std::max(sigma_bar, state.stddev(i));
      const double delta = uniform(rng, 0.6, 0.99);
      const double beta = beta_from_delta(delta);
      const double noise_var = state.noise_var();
      // Smallest eps meeting the condition, scaled up by a random factor.
      const double eps = 2.0 * beta * sigma_bar * sd * sd / noise_var * log_uniform(rng, 1.0, 1e3);
      const double t = uniform(rng, -1.5, 1.5);
      const RmileParams params = RmileParams::make(t, delta, eps, kDefaultGamma);
      const RmileBounds bounds = rmile_bounds(sd, params, sigma_bar, state.size(), std::sqrt(noise_var));
      if (rmile_score(state, at, params) > bounds.upper) ++violations;
      if (bounds.upper < 0.5 * static_cast<double>(state.size())) ++nontrivial;
      ++checked;
    }
    return CheckResult{"", violations == 0 && checked > 0,
                       format("%zu constructed states (%zu with u < m/2), %zu above u", checked, nontrivial,
                              violations),
                       0.0};
  });
}

ExperimentConfig stall_scenario(bool robust) {
  ExperimentConfig c;
  c.domain = BoxSpec{{0.0, 0.0}, {1.0, 1.0}, {5, 5}};
  c.objective = Constant{10.0};
  c.noise = NoiseModel{1.0, 7};
  c.prior.mean = 10.0;
  c.prior.kernel = KernelSpec{1.0, 0.3};
  c.prior.noise_var = 1.0;
  c.threshold = 0.0;
  c.n_seeds = 0;
  c.master_seed = 11;
  c.acquisition = robust ? AcquisitionKind(RmileParams::make(0.0, kDefaultDelta, 1e-2, 1e-2))
                         : AcquisitionKind(RmileParams::mile(0.0));
  return c;
}

CheckResult check_convergence(std::size_t horizon, std::size_t min_visits) {
  return timed("convergence_probe", [&] {
    const ProbeResult robust = convergence_probe(stall_scenario(true), horizon);
    const ProbeResult ablation = convergence_probe(stall_scenario(false), horizon);
    const bool ok = robust.min_visits >= min_visits && ablation.min_visits == 0;
    return CheckResult{"", ok,
                       format("%zu steps: robust visits %zu..%zu (need >= %zu), ablation visits %zu..%zu "
                              "(need an unvisited point)",
                              horizon, robust.min_visits, robust.max_visits, min_visits,
                              ablation.min_visits, ablation.max_visits),
                       0.0};
  });
}

UpdateFn faulty_update() {
  return [](GpState s, const Observation& o) {
    const GpState next = observe(std::move(s), o);
    Matrix cov = next.cov();
    cov.diagonal().array() += 1e-3;
    return GpState(next.mean(), std::move(cov), next.noise_var(), next.n_obs());
  };
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::text() const {
  std::string out;
  for (const CheckResult& c : checks) {
    out += format("%s %-30s %7.2f s  ", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.seconds);
    out += c.detail;
    out += '\n';
  }
  out += passed() ? "all checks passed\n" : "verification FAILED\n";
  return out;
}

VerifyReport run_verification(VerifyLevel level, bool inject_fault) {
  const bool full = level == VerifyLevel::Full;
  const UpdateFn update = inject_fault ? faulty_update() : UpdateFn{};
  VerifyReport report;
  report.checks.push_back(check_gp_laws(full ? 50 : 20, 20, 1e-8, 101, update));
  report.checks.push_back(check_closed_form_mc(full ? 50 : 20, 5, 20000, 202));
  report.checks.push_back(check_variance_reduction_argmax(100, 303));
  report.checks.push_back(check_variance_reduction_identity(full ? 100 : 30, full ? 10000 : 4000, 404));
  report.checks.push_back(check_weighted_error_optimality(1000, 505));
  report.checks.push_back(check_rmile_lower_bound(100, 606));
  report.checks.push_back(check_rmile_upper_bound(100, 707));
  if (full) report.checks.push_back(check_convergence(2000, 10));
  return report;
}

}  // namespace levelset
