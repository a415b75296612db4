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

#ifndef LEVELSET_TESTBED_HPP
#define LEVELSET_TESTBED_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "levelset/acquisition.hpp"
#include "levelset/classify.hpp"
#include "levelset/grid_gp.hpp"

namespace levelset {

/// -((x1^2 + x2 - 11)^2 + (x1 + x2^2 - 7)^2)
double himmelblau_neg(double x1, double x2) noexcept;

/// sin(10 x1) + cos(4 x2) - cos(3 x1 x2)
double sinusoid(double x1, double x2) noexcept;

/// Axis-aligned box sampled by an inclusive linspace per axis.
struct BoxSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> resolution;

  GridDomain build() const;

  /// Grid index of the node at `x` (within 1e-9 relative per coordinate).
  std::optional<std::size_t> locate(std::span<const double> x) const;

  /// Grid index of the node closest to `x`.
  std::size_t nearest(std::span<const double> x) const;
};

struct HimmelblauNeg {};
struct Sinusoid {};
struct Constant {
  double value = 0.0;
};
/// One value per grid index.
struct Tabular {
  std::vector<double> values;
};

using Objective = std::variant<HimmelblauNeg, Sinusoid, Tabular, Constant>;

/// True objective value at a grid node. HimmelblauNeg and Sinusoid need d = 2.
double objective_value(const Objective& objective, const GridDomain& domain, std::size_t index);

std::vector<double> objective_values(const Objective& objective, const GridDomain& domain);

/// Reads a CSV with header `x1,...,xd,value` whose rows cover the grid of
/// `box` exactly once each. Throws Io or InvalidInput with a line diagnostic.
Tabular load_tabular_csv(const std::filesystem::path& path, const BoxSpec& box);

struct NoiseModel {
  double model_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// f(z_index) + model_sigma * N(0, 1), the draw fixed by (noise.seed, scoped_seed).
double noisy_query(const Objective& objective, const GridDomain& domain, std::size_t index,
                   const NoiseModel& noise, std::uint64_t scoped_seed);

struct ExperimentConfig {
  BoxSpec domain;
  Objective objective = HimmelblauNeg{};
  NoiseModel noise;
  PriorSpec prior;
  AcquisitionKind acquisition = RmileParams::make(0.0);
  std::size_t budget = 1;
  std::size_t n_seeds = 3;
  std::vector<std::vector<double>> initial_seed_points;  // overrides n_seeds
  std::optional<SafeParams> safe;
  double threshold = 0.0;
  double delta = kDefaultDelta;
  std::size_t repetitions = 1;
  std::uint64_t master_seed = 0;

  /// Number of seed queries before the loop.
  std::size_t seed_count() const;

  /// Throws InvalidInput (or the module-specific code) on inconsistent fields.
  void validate() const;
};

struct TraceStep {
  std::size_t step = 0;
  std::size_t index = 0;
  double y = 0.0;
  std::size_t set_size = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double score = 0.0;  // NaN for seed queries
};

struct RunTrace {
  std::vector<TraceStep> steps;
  Membership final_set;
};

/// Streams of randomness: seed locations from (master, rep), query noise from
/// (noise.seed, rep, step, location). Two configs that differ only in the
/// acquisition therefore see identical outcomes wherever they query the same
/// location at the same step.
///
/// Repetitions run on up to `threads` workers; the result does not depend on
/// the thread count.
std::vector<RunTrace> run_experiment(const ExperimentConfig& config, std::size_t threads = 1);

/// Per-step hook for the safety property test: called before each loop query
/// with the state the selection was made from and the chosen index.
using QueryObserver = std::function<void(const GpState&, std::size_t index)>;

RunTrace run_repetition(const ExperimentConfig& config, const GridDomain& domain,
                        const GpState& prior, std::size_t repetition,
                        const QueryObserver& on_query = {});

struct ProbeResult {
  std::vector<std::size_t> visits;  // per grid index, seeds included
  std::size_t min_visits = 0;
  std::size_t max_visits = 0;
};

/// Runs one repetition for `horizon` loop steps and reports how often each
/// grid point was queried.
ProbeResult convergence_probe(const ExperimentConfig& config, std::size_t horizon);

/// Runs fn(0..n-1) on up to `threads` workers (0 = hardware concurrency).
/// Rethrows the exception of the lowest failing index.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace levelset

#endif  // LEVELSET_TESTBED_HPP
