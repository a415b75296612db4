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

#include "levelset/testbed.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include "levelset/error.hpp"
#include "levelset/rng.hpp"

namespace levelset {

double himmelblau_neg(double x1, double x2) noexcept {
  const double a = x1 * x1 + x2 - 11.0;
  const double b = x1 + x2 * x2 - 7.0;
  return -(a * a + b * b);
}

double sinusoid(double x1, double x2) noexcept {
  return std::sin(10.0 * x1) + std::cos(4.0 * x2) - std::cos(3.0 * x1 * x2);
}

// BoxSpec ------------------------------------------------------------------------

namespace {

// Must match GridDomain::box node placement exactly.
double node(const BoxSpec& box, std::size_t axis, std::size_t j) {
  if (box.resolution[axis] == 1) return box.lower[axis];
  const double frac = static_cast<double>(j) / static_cast<double>(box.resolution[axis] - 1);
  return box.lower[axis] + frac * (box.upper[axis] - box.lower[axis]);
}

std::size_t axis_position(const BoxSpec& box, std::size_t axis, double x) {
  const std::size_t res = box.resolution[axis];
  if (res == 1) return 0;
  const double step = (box.upper[axis] - box.lower[axis]) / static_cast<double>(res - 1);
  const double pos = std::round((x - box.lower[axis]) / step);
  return static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(res - 1)));
}

void check_box(const BoxSpec& box, std::span<const double> x) {
  if (x.size() != box.lower.size()) {
    throw Error(ErrorCode::InvalidInput, "point has dimension " + std::to_string(x.size()) +
                                             ", grid has " + std::to_string(box.lower.size()));
  }
}

}  // namespace

GridDomain BoxSpec::build() const { return GridDomain::box(lower, upper, resolution); }

std::size_t BoxSpec::nearest(std::span<const double> x) const {
  check_box(*this, x);
  std::size_t index = 0;
  for (std::size_t k = 0; k < x.size(); ++k) index = index * resolution[k] + axis_position(*this, k, x[k]);
  return index;
}

std::optional<std::size_t> BoxSpec::locate(std::span<const double> x) const {
  check_box(*this, x);
  std::size_t index = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const std::size_t j = axis_position(*this, k, x[k]);
    const double at = node(*this, k, j);
    if (std::abs(x[k] - at) > 1e-9 * std::max(1.0, std::abs(at))) return std::nullopt;
    index = index * resolution[k] + j;
  }
  return index;
}

// Objectives -------------------------------------------------------------------------

double objective_value(const Objective& objective, const GridDomain& domain, std::size_t index) {
  if (index >= domain.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "objective queried at index " + std::to_string(index));
  }
  const auto planar = [&](auto&& fn) {
    if (domain.dim() != 2) throw Error(ErrorCode::InvalidInput, "objective is defined on 2-D grids only");
    const auto p = domain.point(index);
    return fn(p(0), p(1));
  };
  if (std::holds_alternative<HimmelblauNeg>(objective)) return planar(himmelblau_neg);
  if (std::holds_alternative<Sinusoid>(objective)) return planar(sinusoid);
  if (const auto* c = std::get_if<Constant>(&objective)) return c->value;
  const auto& table = std::get<Tabular>(objective);
  if (table.values.size() != domain.size()) {
    throw Error(ErrorCode::InvalidInput, "tabular objective does not cover the grid");
  }
  return table.values[index];
}

std::vector<double> objective_values(const Objective& objective, const GridDomain& domain) {
  std::vector<double> values(domain.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = objective_value(objective, domain, i);
  return values;
}

Tabular load_tabular_csv(const std::filesystem::path& path, const BoxSpec& box) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open tabular objective " + path.string());
  const std::size_t d = box.lower.size();
  const auto fail = [&](std::size_t line, const std::string& what) {
    throw Error(ErrorCode::InvalidInput, path.string() + ":" + std::to_string(line) + ": " + what);
  };

  std::string expected_header;
  for (std::size_t k = 0; k < d; ++k) expected_header += "x" + std::to_string(k + 1) + ",";
  expected_header += "value";

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) fail(1, "empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) fail(line_no, "expected header '" + expected_header + "'");

  std::size_t m = 1;
  for (const std::size_t r : box.resolution) m *= r;
  std::vector<double> values(m, 0.0);
  std::vector<bool> seen(m, false);
  std::vector<double> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fields.clear();
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t end = std::min(line.find(',', start), line.size());
      double v = 0.0;
      const char* first = line.data() + start;
      const char* last = line.data() + end;
      while (first < last && *first == ' ') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) fail(line_no, "malformed number");
      fields.push_back(v);
      start = end + 1;
    }
    if (fields.size() != d + 1) fail(line_no, "expected " + std::to_string(d + 1) + " columns");
    const auto index = box.locate(std::span<const double>(fields).first(d));
    if (!index) fail(line_no, "coordinates are not a grid node");
    if (seen[*index]) fail(line_no, "grid node listed twice");
    seen[*index] = true;
    values[*index] = fields[d];
  }
  const auto missing = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), false));
  if (missing > 0) fail(line_no, std::to_string(missing) + " grid nodes have no value");
  return Tabular{std::move(values)};
}

double noisy_query(const Objective& objective, const GridDomain& domain, std::size_t index,
                   const NoiseModel& noise, std::uint64_t scoped_seed) {
  const double f = objective_value(objective, domain, index);
  if (noise.model_sigma == 0.0) return f;
  RandomStream rng(derive_seed(noise.seed, {kNoiseStream, scoped_seed}));
  return f + noise.model_sigma * rng.normal();
}

// Experiment ---------------------------------------------------------------------------

std::size_t ExperimentConfig::seed_count() const {
  return initial_seed_points.empty() ? n_seeds : initial_seed_points.size();
}

void ExperimentConfig::validate() const {
  if (budget < 1) throw Error(ErrorCode::InvalidInput, "budget must be >= 1");
  if (repetitions < 1) throw Error(ErrorCode::InvalidInput, "repetitions must be >= 1");
  if (!(noise.model_sigma >= 0.0)) throw Error(ErrorCode::InvalidInput, "model noise must be >= 0");
  if (!std::isfinite(threshold)) throw Error(ErrorCode::InvalidInput, "threshold must be finite");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidDelta, "delta must lie in (0, 1)");
  if (domain.lower.empty() || domain.upper.size() != domain.lower.size() ||
      domain.resolution.size() != domain.lower.size()) {
    throw Error(ErrorCode::InvalidDomain, "domain bounds and resolution must share a dimension");
  }
  for (const std::size_t r : domain.resolution) {
    if (r < 1) throw Error(ErrorCode::InvalidDomain, "resolution must be >= 1 on every axis");
  }
  for (const auto& p : initial_seed_points) {
    if (p.size() != domain.lower.size()) {
      throw Error(ErrorCode::InvalidInput, "seed point dimension does not match the domain");
    }
  }
  if (safe && !(safe->gamma_safe >= 0.0)) {
    throw Error(ErrorCode::InvalidHyperparameter, "gamma_safe must be >= 0");
  }
}

RunTrace run_repetition(const ExperimentConfig& config, const GridDomain& domain,
                        const GpState& prior, std::size_t repetition,
                        const QueryObserver& on_query) {
  const std::size_t m = domain.size();
  const std::vector<double> truth_values = objective_values(config.objective, domain);
  std::vector<bool> truth_flags(m);
  for (std::size_t i = 0; i < m; ++i) truth_flags[i] = truth_values[i] > config.threshold;
  const Membership truth(std::move(truth_flags));
  const ClassifyParams metric = ClassifyParams::make(config.threshold, config.delta);

  AcquisitionKind kind = config.acquisition;
  if (auto* random = std::get_if<RandomChoice>(&kind)) {
    random->seed = derive_seed(random->seed, {repetition});
  }

  std::vector<std::size_t> seeds;
  if (!config.initial_seed_points.empty()) {
    for (const auto& p : config.initial_seed_points) seeds.push_back(config.domain.nearest(p));
  } else {
    RandomStream rng(derive_seed(config.master_seed, {kSeedPointStream, repetition}));
    for (std::size_t k = 0; k < config.n_seeds; ++k) seeds.push_back(rng.index(m));
  }

  RunTrace trace;
  trace.steps.reserve(seeds.size() + config.budget);
  GpState state = prior;
  std::size_t step = 0;
  const auto query = [&](std::size_t index, double score) {
    const double y = noisy_query(config.objective, domain, index, config.noise,
                                 derive_seed(repetition, {step, index}));
    state.observe_in_place(Observation{index, y});
    const Membership estimate = classify(state, metric);
    const Confusion c = confusion(estimate, truth);
    trace.steps.push_back(TraceStep{step, index, y, estimate.size(), c.precision, c.recall, c.f1, score});
    ++step;
  };

  for (const std::size_t index : seeds) query(index, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t b = 0; b < config.budget; ++b) {
    const Selection pick = select_point(state, kind, config.safe);
    if (on_query) on_query(state, pick.index);
    query(pick.index, pick.score);
  }
  trace.final_set = classify(state, metric);
  return trace;
}

std::vector<RunTrace> run_experiment(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  const GridDomain domain = config.domain.build();
  const GpState prior = build_prior(domain, config.prior);
  std::vector<RunTrace> traces(config.repetitions);
  parallel_for(config.repetitions, threads, [&](std::size_t r) {
    traces[r] = run_repetition(config, domain, prior, r);
  });
  return traces;
}

ProbeResult convergence_probe(const ExperimentConfig& config, std::size_t horizon) {
  ExperimentConfig probe = config;
  probe.budget = horizon;
  probe.repetitions = 1;
  probe.validate();
  const GridDomain domain = probe.domain.build();
  const GpState prior = build_prior(domain, probe.prior);
  const RunTrace trace = run_repetition(probe, domain, prior, 0);

  ProbeResult result;
  result.visits.assign(domain.size(), 0);
  for (const TraceStep& s : trace.steps) ++result.visits[s.index];
  const auto [lo, hi] = std::minmax_element(result.visits.begin(), result.visits.end());
  result.min_visits = *lo;
  result.max_visits = *hi;
  return result;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace levelset
