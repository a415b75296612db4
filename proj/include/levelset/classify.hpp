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

#ifndef LEVELSET_CLASSIFY_HPP
#define LEVELSET_CLASSIFY_HPP

#include <cstddef>
#include <vector>

#include "levelset/grid_gp.hpp"

namespace levelset {

/// beta = Phi^{-1}(delta). Throws InvalidDelta unless 0 < delta < 1.
double beta_from_delta(double delta);

/// Parameters of the confidence rule mean - beta * sd > t - shift.
struct ClassifyParams {
  double t = 0.0;
  double delta = 0.975;
  double beta = 0.0;
  double shift = 0.0;

  /// Fills beta from delta; throws InvalidDelta / InvalidInput.
  static ClassifyParams make(double t, double delta, double shift = 0.0);

  ClassifyParams with_threshold(double new_t) const;
  ClassifyParams with_shift(double new_shift) const;

  /// Throws unless beta matches delta within 1e-9 and shift >= 0.
  void validate() const;
};

/// Boolean membership over the grid, with its cardinality.
class Membership {
 public:
  Membership() = default;
  explicit Membership(std::vector<bool> flags);

  std::size_t length() const noexcept { return flags_.size(); }
  std::size_t size() const noexcept { return size_; }
  bool contains(std::size_t i) const { return flags_.at(i); }
  const std::vector<bool>& flags() const noexcept { return flags_; }

  /// True when every member of *this is a member of other.
  bool subset_of(const Membership& other) const;

  friend bool operator==(const Membership&, const Membership&) = default;

 private:
  std::vector<bool> flags_;
  std::size_t size_ = 0;
};

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn_ = 0;
  std::size_t tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// flags[i] = mean[i] - beta * sd[i] > t - shift (strict).
Membership classify(const GpState& state, const ClassifyParams& params);

/// Confusion counts of a prediction against ground truth. Precision is 0 when
/// nothing is predicted, recall is 0 when the truth is empty, and f1 is 0 when
/// both are 0. Throws LengthMismatch.
Confusion confusion(const Membership& pred, const Membership& truth);

/// Expected weighted misclassification cost of one labeling decision under the
/// posterior marginal at `index`: delta * P(f <= t) when labeled in,
/// (1 - delta) * P(f > t) when labeled out. The shift is ignored.
double expected_weighted_error(const GpState& state, std::size_t index, bool in_set,
                               const ClassifyParams& params);

}  // namespace levelset

#endif  // LEVELSET_CLASSIFY_HPP
