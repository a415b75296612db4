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

#ifndef LEVELSET_NORMAL_HPP
#define LEVELSET_NORMAL_HPP

namespace levelset {

/// Standard normal CDF, evaluated through erfc so the lower tail keeps full
/// relative precision. Absolute error is at the level of double rounding.
/// Phi(-inf) = 0 and Phi(+inf) = 1.
double normal_cdf(double x) noexcept;

/// Standard normal quantile for p in (0, 1). Rational initial guess refined
/// by two Halley steps against normal_cdf; absolute error below 1e-12 over
/// [1e-300, 1 - 1e-16]. Returns -inf / +inf at 0 / 1 and NaN outside [0, 1].
double normal_quantile(double p) noexcept;

}  // namespace levelset

#endif  // LEVELSET_NORMAL_HPP
