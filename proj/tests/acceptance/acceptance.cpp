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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes within its time limit.
//
//   levelset_acceptance [--data DIR] [--only N[,N...]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "levelset/harness.hpp"
#include "levelset/testbed.hpp"
#include "levelset/verify.hpp"

namespace {

using namespace levelset;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: no limit
  std::function<Outcome()> run;
};

std::filesystem::path g_data = LEVELSET_TEST_DATA;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome from(const std::vector<CheckResult>& checks) {
  Outcome o{true, ""};
  for (const CheckResult& c : checks) {
    o.passed = o.passed && c.passed;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += c.name + (c.passed ? "" : " FAILED") + ": " + c.detail;
  }
  return o;
}

double final_f1(const std::vector<RunTrace>& traces) {
  double sum = 0.0;
  for (const RunTrace& t : traces) sum += t.steps.back().f1;
  return sum / static_cast<double>(traces.size());
}

std::vector<RunTrace> run_named(const HarnessConfig& cfg, const char* acq) {
  return run_experiment(cfg.with_acquisition(acq), threads_from_env());
}

Outcome benchmark_ordering() {
  const HarnessConfig cfg = load_config(g_data / "himmelblau_benchmark.json");
  const double rmile = final_f1(run_named(cfg, "rmile"));
  const double straddle = final_f1(run_named(cfg, "straddle"));
  const double lse = final_f1(run_named(cfg, "lse"));
  const bool ok = rmile >= straddle - 0.02 && rmile >= lse - 0.02;
  return {ok, fmt("final mean F1 over R=%zu: rmile %.4f, straddle %.4f, lse %.4f (tolerance 0.02)",
                  cfg.experiment.repetitions, rmile, straddle, lse)};
}

Outcome robustification() {
  const HarnessConfig cfg = load_config(g_data / "himmelblau_misspecified.json");
  const double rmile = final_f1(run_named(cfg, "rmile"));
  const double mile = final_f1(run_named(cfg, "mile"));
  return {rmile >= mile - 0.02,
          fmt("model noise %.0f, algorithm noise %.0f: rmile %.4f, mile %.4f (tolerance 0.02)",
              cfg.experiment.noise.model_sigma, std::sqrt(cfg.experiment.prior.noise_var), rmile, mile)};
}

Outcome safe_exploration() {
  const HarnessConfig cfg = load_config(g_data / "himmelblau_safe.json");
  const ExperimentConfig& e = cfg.experiment;
  if (!e.safe) return {false, "config has no safe block"};
  const GridDomain domain = e.domain.build();
  const GpState prior = build_prior(domain, e.prior);
  const std::vector<double> f = objective_values(e.objective, domain);

  std::size_t queries = 0, below = 0, unsafe = 0, min_distinct = domain.size();
  double lowest = INFINITY;
  for (std::size_t r = 0; r < e.repetitions; ++r) {
    const RunTrace trace = run_repetition(e, domain, prior, r, [&](const GpState& s, std::size_t i) {
      if (!safe_set(s, *e.safe).contains(i)) ++unsafe;
    });
    std::set<std::size_t> distinct;
    for (const TraceStep& step : trace.steps) {
      ++queries;
      distinct.insert(step.index);
      lowest = std::min(lowest, f[step.index]);
      if (f[step.index] <= e.threshold) ++below;
    }
    min_distinct = std::min(min_distinct, distinct.size());
  }
  // A run that never leaves its seed would satisfy the count vacuously.
  const bool ok = below == 0 && unsafe == 0 && min_distinct > 1;
  return {ok, fmt("%zu runs, %zu queries: %zu at or below t=%g (lowest f %.2f), %zu outside the safe set, "
                  ">= %zu distinct locations per run",
                  e.repetitions, queries, below, e.threshold, lowest, unsafe, min_distinct)};
}

Outcome determinism() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"minimal.json", "tabular.json", "himmelblau_safe.json"}) {
    const HarnessConfig cfg = load_config(g_data / name);
    const std::string base = run_to_csv(cfg, 1);
    std::vector<std::string> variants{run_to_csv(cfg, 1), run_to_csv(cfg, 2), run_to_csv(cfg, 4)};
    for (const char* env : {"1", "3", "0"}) {
      ::setenv("LEVELSET_THREADS", env, 1);
      variants.push_back(run_to_csv(cfg, threads_from_env()));
    }
    ::unsetenv("LEVELSET_THREADS");
    const std::vector<std::string> acqs{"rmile", "straddle", "lse", "random"};
    const std::string cmp = compare_to_csv(cfg, acqs, 1);
    const bool same = std::all_of(variants.begin(), variants.end(), [&](const std::string& v) { return v == base; }) &&
                      compare_to_csv(cfg, acqs, 4) == cmp;
    ok = ok && same;
    detail += fmt("%s %s; ", name, same ? "identical" : "DIFFERS");
  }
  detail += "threads 1, 2, 4 and LEVELSET_THREADS=1, 3, 0";
  return {ok, detail};
}

std::vector<Criterion> criteria() {
  return {
      {1, "closed form vs Monte-Carlo", 60,
       [] { return from({check_closed_form_mc(50, 5, 20000, 202)}); }},
      {2, "GP conditioning laws", 10, [] { return from({check_gp_laws(50, 20, 1e-8, 101)}); }},
      {3, "variance-reduction identities", 60,
       [] {
         return from({check_variance_reduction_argmax(100, 303),
                      check_variance_reduction_identity(100, 10000, 404)});
       }},
      {4, "confidence rule optimality", 0, [] { return from({check_weighted_error_optimality(1000, 505)}); }},
      {5, "robust score bounds", 0,
       [] { return from({check_rmile_lower_bound(100, 606), check_rmile_upper_bound(100, 707)}); }},
      {6, "finite-horizon convergence", 120, [] { return from({check_convergence(2000, 10)}); }},
      {7, "benchmark ordering", 600, benchmark_ordering},
      {8, "robustification under misspecified noise", 0, robustification},
      {9, "safe exploration", 0, safe_exploration},
      {10, "end-to-end determinism", 0, determinism},
  };
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--data" && i + 1 < argc) {
      g_data = argv[++i];
    } else if (arg == "--only" && i + 1 < argc) {
      for (const std::string& id : split_names(argv[++i])) only.insert(std::atoi(id.c_str()));
    } else {
      std::fprintf(stderr, "usage: %s [--data DIR] [--only N[,N...]]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && !only.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string limit = "no limit";
    if (c.limit_seconds > 0) {
      limit = fmt("limit %.0fs", c.limit_seconds);
      if (secs > c.limit_seconds) {
        o.passed = false;
        o.detail += " [over time limit]";
      }
    }
    if (!o.passed) ++failures;
    std::printf("%s criterion %d (%s) %.1fs, %s: %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, secs,
                limit.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
