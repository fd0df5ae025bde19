// Copyright 2026 The rbsim Authors
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

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "rbsim/engine.hpp"

namespace rbsim {

enum class FitModel { kExponential, kStretched, kQuadratic };

std::string_view to_string(FitModel model);

/// Parameters by model:
///   exponential  A (1 - d)^x            -> {A, d}
///   stretched    A a^(x^k)              -> {A, a, k}
///   quadratic    c2 x^2 + c1 x + c0     -> {c2, c1, c0}
struct FitResult {
  FitModel model = FitModel::kExponential;
  std::vector<double> params;
  std::vector<double> std_errors;
  double residual_norm = 0.0;  ///< unweighted L2 norm of y - f
  double reduced_chi2 = 0.0;
  std::size_t iterations = 0;
  bool weighted = false;  ///< false when unit weights were used
  /// Exponential only: A e^{-rate x}, rate = -ln(1 - d). Kept separately
  /// because d rounds to 1 for fast decays in physical time units.
  double rate = 0.0;
  double rate_error = 0.0;
};

/// Weighted by 1/stderr^2 unless any stderr is zero. Needs >= 3 points.
FitResult fit_exponential(const DecayCurve& curve);

struct StretchedOptions {
  /// Holds k fixed instead of fitting it.
  std::optional<double> fixed_k;
};
/// Needs >= 4 points (3 with fixed k), all x > 0.
FitResult fit_stretched(const DecayCurve& curve, const StretchedOptions& options = {});

/// Unweighted polynomial least squares. Needs >= 3 points.
FitResult fit_quadratic(const DecayCurve& curve);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// d / 2 of an exponential fit.
Estimate epg_from_fit(const FitResult& fit);
/// 1 / rate of an exponential fit, in the units of x.
Estimate time_constant(const FitResult& fit);

/// Error per gate of pure dephasing over one gate period: (1 - e^{-tau/t2}) / 3.
double epg_limit(double tau, double t2);

/// First x where the mean falls to `level`, interpolated log-linearly between
/// the bracketing points. Throws FitFailure if the curve never crosses.
double decay_time(const DecayCurve& curve, double level = 0.36787944117144233);

/// Least-squares slope of ln y against ln x. All values must be positive.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace rbsim
