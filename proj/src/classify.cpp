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

#include "levelset/classify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levelset/error.hpp"
#include "levelset/normal.hpp"

namespace levelset {

double beta_from_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::InvalidDelta, "delta must lie in (0, 1), got " + std::to_string(delta));
  }
  return normal_quantile(delta);
}

ClassifyParams ClassifyParams::make(double t, double delta, double shift) {
  ClassifyParams p{t, delta, beta_from_delta(delta), shift};
  p.validate();
  return p;
}

ClassifyParams ClassifyParams::with_threshold(double new_t) const {
  ClassifyParams p = *this;
  p.t = new_t;
  return p;
}

ClassifyParams ClassifyParams::with_shift(double new_shift) const {
  ClassifyParams p = *this;
  p.shift = new_shift;
  p.validate();
  return p;
}

void ClassifyParams::validate() const {
  if (!std::isfinite(t)) throw Error(ErrorCode::InvalidInput, "threshold must be finite");
  if (std::abs(beta - beta_from_delta(delta)) > 1e-9) {
    throw Error(ErrorCode::InvalidInput, "beta is inconsistent with delta");
  }
  if (!(shift >= 0.0)) throw Error(ErrorCode::InvalidInput, "threshold shift must be >= 0");
}

Membership::Membership(std::vector<bool> flags)
    : flags_(std::move(flags)),
      size_(static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), true))) {}

bool Membership::subset_of(const Membership& other) const {
  if (other.length() != length()) {
    throw Error(ErrorCode::LengthMismatch, "membership vectors differ in length");
  }
  for (std::size_t i = 0; i < flags_.size(); ++i) {
    if (flags_[i] && !other.flags_[i]) return false;
  }
  return true;
}

Membership classify(const GpState& state, const ClassifyParams& params) {
  const double cut = params.t - params.shift;
  std::vector<bool> flags(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    flags[i] = state.mean_at(i) - params.beta * state.stddev(i) > cut;
  }
  return Membership(std::move(flags));
}

Confusion confusion(const Membership& pred, const Membership& truth) {
  if (pred.length() != truth.length()) {
    throw Error(ErrorCode::LengthMismatch, "prediction has " + std::to_string(pred.length()) +
                                               " points, truth has " + std::to_string(truth.length()));
  }
  Confusion c;
  for (std::size_t i = 0; i < pred.length(); ++i) {
    const bool p = pred.flags()[i];
    const bool t = truth.flags()[i];
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn_;
    else ++c.tn;
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  c.precision = ratio(c.tp, c.tp + c.fp);
  c.recall = ratio(c.tp, c.tp + c.fn_);
  const double sum = c.precision + c.recall;
  c.f1 = sum > 0.0 ? 2.0 * c.precision * c.recall / sum : 0.0;
  return c;
}

double expected_weighted_error(const GpState& state, std::size_t index, bool in_set,
                               const ClassifyParams& params) {
  state.check_index(index);
  const double sd = state.stddev(index);
  const double gap = state.mean_at(index) - params.t;
  double p_above;
  if (sd > 0.0) {
    p_above = normal_cdf(gap / sd);
  } else {
    p_above = gap > 0.0 ? 1.0 : 0.0;
  }
  // P(f <= t) via the mirrored CDF keeps precision when p_above is near 1.
  const double p_below = sd > 0.0 ? normal_cdf(-gap / sd) : 1.0 - p_above;
  return in_set ? params.delta * p_below : (1.0 - params.delta) * p_above;
}

}  // namespace levelset
