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

// Self-checks shared by `levelset-cli verify` and the acceptance suite. Each
// check draws its own random states from a fixed seed.

#ifndef LEVELSET_VERIFY_HPP
#define LEVELSET_VERIFY_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "levelset/oracle.hpp"
#include "levelset/testbed.hpp"

namespace levelset {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Conditioning laws on random 2-D priors with `n_obs`-observation sequences.
CheckResult check_gp_laws(std::size_t n_sequences, std::size_t n_obs, double tolerance,
                          std::uint64_t seed, const UpdateFn& update = {});

/// Closed-form expected set size against Monte-Carlo at every candidate of
/// `n_states` random states on grids up to max_side x max_side; 4 standard errors.
CheckResult check_closed_form_mc(std::size_t n_states, std::size_t max_side,
                                 std::size_t n_samples, std::uint64_t seed);

/// argmax of the variance-reduction score equals argmin of the summed
/// posterior sd computed by conditioning.
CheckResult check_variance_reduction_argmax(std::size_t n_states, std::uint64_t seed);

/// Monte-Carlo threshold-integral identity, 4 standard errors.
CheckResult check_variance_reduction_identity(std::size_t n_states, std::size_t n_samples,
                                              std::uint64_t seed);

/// The confidence rule never has strictly larger expected weighted error
/// than the opposite label.
CheckResult check_weighted_error_optimality(std::size_t n_triples, std::uint64_t seed);

/// rmile_score >= gamma * sd at every candidate.
CheckResult check_rmile_lower_bound(std::size_t n_states, std::uint64_t seed);

/// rmile_score <= u at sample points whose sd satisfies
/// sigma_bar * sd^2 / sigma_eps^2 <= eps / (2 beta).
CheckResult check_rmile_upper_bound(std::size_t n_states, std::uint64_t seed);

/// 5x5 grid on [0, 1]^2 with a prior mean far above the threshold and a
/// constant objective that agrees with it: every point starts classified in
/// the set, so the unrobustified score has nothing to improve.
ExperimentConfig stall_scenario(bool robust);

/// Robust run visits every point at least `min_visits` times within `horizon`
/// steps; the ablation leaves at least one point unvisited.
CheckResult check_convergence(std::size_t horizon, std::size_t min_visits);

/// Update that inflates every posterior variance after conditioning.
UpdateFn faulty_update();

enum class VerifyLevel { Quick, Full };

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  /// One `PASS`/`FAIL` line per check.
  std::string text() const;
};

/// Full adds larger sample sizes and the 2000-step convergence probe.
/// `inject_fault` runs the law suite with faulty_update().
VerifyReport run_verification(VerifyLevel level, bool inject_fault = false);

}  // namespace levelset

#endif  // LEVELSET_VERIFY_HPP
