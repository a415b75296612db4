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

#ifndef LEVELSET_HARNESS_HPP
#define LEVELSET_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levelset/testbed.hpp"

namespace levelset {

/// Knobs shared by every acquisition named on the command line. Unset values
/// take the library defaults.
struct AcquisitionOptions {
  std::optional<double> epsilon;
  std::optional<double> gamma;
  std::optional<double> beta_lse;
  std::vector<double> thresholds;  // multi; defaults to {t}
  std::uint64_t seed = 0;          // random
};

/// One of rmile, mile, multi, varred, straddle, lse, random. Throws Config
/// for anything else.
AcquisitionKind make_acquisition(std::string_view name, const AcquisitionOptions& options,
                                 double t, double delta);

std::vector<std::string> split_names(std::string_view csv);

struct HarnessConfig {
  ExperimentConfig experiment;
  std::string acquisition = "rmile";
  AcquisitionOptions options;

  /// The experiment with its acquisition replaced by `name`.
  ExperimentConfig with_acquisition(std::string_view name) const;
};

/// Parses the JSON config. Relative paths (tabular objectives) resolve against
/// `base_dir`. Every problem is reported as ErrorCode::Config naming the field,
/// or the line and column for malformed JSON.
HarnessConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

HarnessConfig load_config(const std::filesystem::path& path);

/// Header `run,step,acq,index,y,set_size,precision,recall,f1,score`; one row
/// per step and repetition, floats with 17 significant digits.
void write_trace_csv(std::ostream& out, std::string_view acq, const std::vector<RunTrace>& traces);

struct CompareRow {
  std::string acq;
  std::size_t step = 0;
  double f1_mean = 0.0, f1_se = 0.0;
  double prec_mean = 0.0, prec_se = 0.0;
  double rec_mean = 0.0, rec_se = 0.0;
  double size_mean = 0.0, size_se = 0.0;
};

/// Per-step mean and standard error (sample sd / sqrt(R), 0 when R = 1).
std::vector<CompareRow> aggregate(std::string_view acq, const std::vector<RunTrace>& traces);

/// Header `acq,step,f1_mean,f1_se,prec_mean,prec_se,rec_mean,rec_se,size_mean,size_se`.
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// LEVELSET_THREADS, 0 (auto) when unset. Throws Config when malformed.
std::size_t threads_from_env();

std::string run_to_csv(const HarnessConfig& config, std::size_t threads);
std::string compare_to_csv(const HarnessConfig& config, const std::vector<std::string>& acquisitions,
                           std::size_t threads);

void run_file(const std::filesystem::path& config, const std::filesystem::path& out,
              std::size_t threads);
void compare_file(const std::filesystem::path& config, std::string_view acquisitions,
                  const std::filesystem::path& out, std::size_t threads);

}  // namespace levelset

#endif  // LEVELSET_HARNESS_HPP
