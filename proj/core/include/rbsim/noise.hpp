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

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "rbsim/random.hpp"

namespace rbsim {

/// Stationary Ornstein-Uhlenbeck dephasing field b(t).
struct OUParams {
  double sigma = 0.0;  ///< stationary standard deviation [rad/s]
  double tau_c = 1.0;  ///< correlation time [s]

  /// Throws InvalidInput unless sigma >= 0 and tau_c > 0.
  void validate() const;
};

/// One sampled realization of b(t); samples[k] holds b on [k dt, (k+1) dt).
struct NoiseTrajectory {
  double dt = 0.0;
  std::vector<double> samples;

  double duration() const { return dt * static_cast<double>(samples.size()); }
};

/// Streaming generator for the exact OU discretization
///   b_0 ~ N(0, sigma^2),  b_{n+1} = b_n e^{-dt/tau_c} + sigma sqrt(1 - e^{-2dt/tau_c}) xi_n.
class OuProcess {
 public:
  OuProcess(const OUParams& params, double dt, std::uint64_t seed);

  double next();

 private:
  Rng rng_;
  std::normal_distribution<double> normal_;
  double sigma_;
  double decay_;
  double kick_;
  double current_ = 0.0;
  bool started_ = false;
};

NoiseTrajectory ou_trajectory(const OUParams& params, double duration, double dt,
                              std::uint64_t seed);

/// Free-induction coherence exp[-sigma^2 tau_c^2 (e^{-t/tau_c} - 1 + t/tau_c)].
double fid_coherence_analytic(const OUParams& params, double t);

/// Single-echo coherence with an instantaneous refocusing pulse at t/2:
/// exp[-sigma^2 tau_c^2 (t/tau_c - 3 + 4 e^{-t/2tau_c} - e^{-t/tau_c})].
double hahn_coherence_analytic(const OUParams& params, double t);

/// 1/e times of the two closed forms above.
double fid_decay_time_analytic(const OUParams& params);
double hahn_decay_time_analytic(const OUParams& params);

/// Finds (sigma, tau_c) whose FID and Hahn-echo 1/e times equal the targets.
/// Throws CalibrationFailure (with the best pair found) when the ratio
/// t2_hahn / t2_fid is out of reach, and InvalidInput for non-positive targets.
OUParams calibrate(double t2_fid_target, double t2_hahn_target);

struct NoAmplitudeError {};
struct FixedAmplitudeError {
  double epsilon = 0.0;
};
struct GaussianAmplitudeError {
  double sigma = 0.0;
};
struct UniformAmplitudeError {
  double half_width = 0.0;
};

/// Static fractional control-amplitude error, drawn once per shot.
using AmplitudeErrorModel =
    std::variant<NoAmplitudeError, FixedAmplitudeError, GaussianAmplitudeError,
                 UniformAmplitudeError>;

void validate(const AmplitudeErrorModel& model);

double sample_epsilon(const AmplitudeErrorModel& model, Rng& rng);
double sample_epsilon(const AmplitudeErrorModel& model, std::uint64_t seed);

/// Energy relaxation toward +z; disabled when t1 is empty.
struct RelaxationParams {
  std::optional<double> t1;

  void validate() const;
};

}  // namespace rbsim
