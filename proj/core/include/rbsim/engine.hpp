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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbsim/noise.hpp"
#include "rbsim/pulses.hpp"
#include "rbsim/su2.hpp"

namespace rbsim {

/// Monte Carlo configuration shared by all experiments.
struct SimConfig {
  double dt = kDefaultPiTime / 80.0;  ///< integration step [s]
  std::size_t n_noise = 16;           ///< shots (noise + epsilon draws) per sequence
  std::size_t n_sequences = 32;
  std::vector<std::size_t> m_values{1, 2, 4, 8, 16, 32, 64, 80};
  SchemeId scheme = SchemeId::kBareBb1;
  SchemeParams scheme_params;
  std::optional<OUParams> noise;  ///< empty: dephasing off
  AmplitudeErrorModel eps_model = NoAmplitudeError{};
  RelaxationParams relaxation;
  std::uint64_t master_seed = 1;
  unsigned workers = 0;  ///< 0: resolve_workers default; never affects results
  /// Divide survivals by the survival of recovery-only (m = 0) sequences.
  bool normalize_to_m0 = true;

  /// Throws InvalidInput naming the offending field.
  void validate() const;
};

struct DecayPoint {
  double x = 0.0;  ///< gate count m or time [s]
  double mean = 0.0;
  double std_error = 0.0;
};

struct DecayCurve {
  std::vector<DecayPoint> points;
  double gate_period = 0.0;  ///< tau [s]; 0 for coherence curves
  std::string label;
  std::optional<double> reference;  ///< m = 0 survival used for normalization

  std::vector<double> xs() const;
  std::vector<double> means() const;
  std::vector<double> std_errors() const;
};

/// Piecewise-constant integration of H = (1+eps) w1 (cos phi S_x + sin phi S_y)
/// + b(t) S_z. Steps split at both segment boundaries and noise grid points.
/// Throws InvalidInput when the trajectory is shorter than the schedule.
QubitState propagate(const QubitState& state, const PulseSchedule& sched,
                     const NoiseTrajectory& traj, double eps,
                     const RelaxationParams& relaxation = {});

/// Noise-free propagation (b = 0); exact per segment when relaxation is off,
/// otherwise stepped at `dt`.
QubitState propagate(const QubitState& state, const PulseSchedule& sched, double eps,
                     const RelaxationParams& relaxation = {},
                     double dt = kDefaultPiTime / 80.0);

/// Survival (sign-corrected <sigma_z>) vs sequence length.
DecayCurve run_rb(const SimConfig& cfg);

enum class CoherenceKind { kFid, kHahn, kDd };

struct CoherenceSpec {
  CoherenceKind kind = CoherenceKind::kFid;
  /// Total evolution times for fid/hahn [s], strictly increasing.
  std::vector<double> times;
  DdKind dd = DdKind::kXY16;
  PulseStyle style = PulseStyle::kRect;
  double tau_delay = 0.0;  ///< inter-pulse delay of the dd cycle [s]
  std::vector<std::size_t> cycles;  ///< dd cycle counts, strictly increasing
};

/// <sigma_x> vs total time for a +x initial state. Each shot draws one noise
/// realization shared by all time points.
DecayCurve run_coherence(const CoherenceSpec& spec, const SimConfig& cfg);

/// 1/e time of a simulated FID and Hahn echo, sampled on a grid around the
/// given guesses.
struct CoherenceTimes {
  double fid = 0.0;
  double hahn = 0.0;
};
CoherenceTimes simulate_coherence_times(const OUParams& params, const SimConfig& cfg,
                                        double fid_guess, double hahn_guess,
                                        std::size_t grid_points = 21);

struct AccumulationSpec {
  double epsilon = 0.02;  ///< fixed flip-angle error
  std::vector<std::size_t> cycles{4, 8, 16, 32, 64};
  std::size_t n_random = 200;  ///< random sequences per cycle count
  double tau_delay = 0.0;      ///< XY-4 inter-pulse delay [s]
  SchemeId gate_scheme = SchemeId::kBareRect;
};

/// Point means are gate-averaged infidelities, not survivals.
struct AccumulationResult {
  DecayCurve repeated;    ///< XY-4 repeated n times
  DecayCurve randomized;  ///< XY-4 cycles interleaved with random Clifford steps
};

/// Average-gate infidelity (mean over the six cardinal states) vs cycle
/// count, noise off.
AccumulationResult run_error_accumulation(const AccumulationSpec& spec,
                                          const SimConfig& cfg);

/// 1 - mean over the six cardinal states of the trace fidelity between the
/// ideal and the simulated (noise-free) output.
/// 1 - trace fidelity of the noise-free output against R_z(frame_shift) ideal,
/// averaged over the six cardinal input states.
double schedule_infidelity(const PulseSchedule& sched, double eps);
/// Same for a single input state.
double schedule_infidelity(const PulseSchedule& sched, double eps, const QubitState& input);

}  // namespace rbsim
