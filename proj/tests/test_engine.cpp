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

#include <gtest/gtest.h>

#include <cmath>

#include "rbsim/analysis.hpp"
#include "rbsim/engine.hpp"
#include "rbsim/errors.hpp"
#include "rbsim/rb_sequence.hpp"

namespace rbsim {
namespace {

const OUParams kCalibrated = calibrate(360e-6, 740e-6);

TEST(Propagate, PiPulseFlipsZ) {
  const PulseSchedule pi = rectangular(kPi, 0.0, kDefaultOmega1);
  const QubitState out = propagate(QubitState(), pi, 0.0);
  EXPECT_NEAR(out.bloch().z(), -1.0, 1e-14);
  const QubitState half = propagate(QubitState(), rectangular(kPi / 2, 0.0, kDefaultOmega1), 0.0);
  EXPECT_NEAR(half.bloch().y(), -1.0, 1e-14);
}

TEST(Propagate, AmplitudeErrorScalesNutation) {
  const double eps = 0.05;
  const PulseSchedule pi = rectangular(kPi, 0.0, kDefaultOmega1);
  const QubitState out = propagate(QubitState(), pi, eps);
  EXPECT_NEAR(out.bloch().z(), std::cos(kPi * (1 + eps)), 1e-13);
}

TEST(Propagate, ConstantDetuningPrecesses) {
  const double b = 2.0 * kPi * 1e3;
  const double t = 200e-6;
  const double dt = 1e-7;
  NoiseTrajectory traj;
  traj.dt = dt;
  traj.samples.assign(static_cast<std::size_t>(std::lround(t / dt)), b);
  const PulseSchedule idle = ScheduleBuilder(kDefaultOmega1).delay(t).build();
  const QubitState out = propagate(QubitState(Vec3::UnitX()), idle, traj, 0.0);
  EXPECT_NEAR(out.bloch().x(), std::cos(b * t), 1e-12);
  EXPECT_NEAR(out.bloch().y(), std::sin(b * t), 1e-12);
}

TEST(Propagate, ConstantDetuningDuringDrive) {
  // Off-resonant nutation: rotation about (omega, 0, b).
  const double b = 0.3 * kDefaultOmega1;
  const PulseSchedule pi = rectangular(kPi, 0.0, kDefaultOmega1);
  NoiseTrajectory traj;
  traj.dt = pi.duration() / 100.0;
  traj.samples.assign(100, b);
  const QubitState out = propagate(QubitState(), pi, traj, 0.0);
  const double w = std::hypot(kDefaultOmega1, b);
  const Vec3 axis = Vec3(kDefaultOmega1, 0.0, b) / w;
  const Vec3 expected = Rotation(axis, w * pi.duration()).so3() * Vec3::UnitZ();
  EXPECT_LT((out.bloch() - expected).norm(), 1e-12);
}

TEST(Propagate, ShortTrajectoryThrows) {
  const PulseSchedule pi = rectangular(kPi, 0.0, kDefaultOmega1);
  NoiseTrajectory traj;
  traj.dt = 1e-7;
  traj.samples.assign(10, 0.0);
  EXPECT_THROW(propagate(QubitState(), pi, traj, 0.0), InvalidInput);
}

TEST(Propagate, AmplitudeDamping) {
  const double t1 = 1e-3;
  RelaxationParams relax;
  relax.t1 = t1;
  const double t = 0.5e-3;
  const PulseSchedule idle = ScheduleBuilder(kDefaultOmega1).delay(t).build();
  const QubitState down = propagate(QubitState(Vec3(0, 0, -1)), idle, 0.0, relax, 1e-7);
  EXPECT_NEAR(down.bloch().z(), 1.0 - 2.0 * std::exp(-t / t1), 1e-12);
  const QubitState side = propagate(QubitState(Vec3::UnitX()), idle, 0.0, relax, 1e-7);
  EXPECT_NEAR(side.bloch().x(), std::exp(-t / (2 * t1)), 1e-12);
  EXPECT_NEAR(side.bloch().z(), 1.0 - std::exp(-t / t1), 1e-12);
  // A pi pulse first: relaxation during the 8 us pulse shifts z by O(t_pi / T1).
  const PulseSchedule flip = ScheduleBuilder(kDefaultOmega1).pulse(kPi, 0.0).delay(t).build();
  const QubitState out = propagate(QubitState(), flip, 0.0, relax, 1e-7);
  EXPECT_NEAR(out.bloch().z(), 1.0 - 2.0 * std::exp(-t / t1), 2.0 * kDefaultPiTime / t1);
}

TEST(Propagate, DtConvergence) {
  // Same OU realization at two step sizes: the coarse one keeps every fourth
  // sample of the fine one, which is an exact OU sample path at 4 dt.
  Rng rng(4);
  const RBSequence seq = sample_rb_sequence(20, rng);
  const CompiledSequence c = compile_sequence(seq, SchemeId::kBareBb1, SchemeParams{});
  const double fine_dt = 2.5e-8;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const NoiseTrajectory fine = ou_trajectory(kCalibrated, c.program.duration(), fine_dt, seed);
    NoiseTrajectory coarse;
    coarse.dt = 4 * fine_dt;
    for (std::size_t i = 0; i < fine.samples.size(); i += 4) coarse.samples.push_back(fine.samples[i]);
    while (coarse.duration() < c.program.duration()) coarse.samples.push_back(coarse.samples.back());
    const double zf = propagate(QubitState(), c.program, fine, 0.0).bloch().z();
    const double zc = propagate(QubitState(), c.program, coarse, 0.0).bloch().z();
    worst = std::max(worst, std::abs(zf - zc) / 2.0);
  }
  EXPECT_LT(worst, 1e-3);
}

SimConfig small_config() {
  SimConfig cfg;
  cfg.n_sequences = 6;
  cfg.n_noise = 3;
  cfg.m_values = {1, 4, 16};
  cfg.master_seed = 77;
  return cfg;
}

TEST(RunRb, NoiselessSurvivalIsOne) {
  for (SchemeId id : all_schemes()) {
    SimConfig cfg = small_config();
    cfg.scheme = id;
    const DecayCurve curve = run_rb(cfg);
    ASSERT_EQ(curve.points.size(), 3u);
    for (const auto& p : curve.points) {
      EXPECT_NEAR(p.mean, 1.0, 1e-9) << to_string(id);
      EXPECT_LT(p.std_error, 1e-9);
    }
    EXPECT_NEAR(curve.gate_period, gate_period(id, cfg.scheme_params), 1e-15);
  }
}

TEST(RunRb, ResultsIndependentOfWorkerCount) {
  SimConfig cfg = small_config();
  cfg.noise = kCalibrated;
  cfg.eps_model = GaussianAmplitudeError{0.03};
  cfg.scheme = SchemeId::kBareRect;
  cfg.workers = 1;
  const DecayCurve one = run_rb(cfg);
  for (unsigned w : {2u, 4u}) {
    cfg.workers = w;
    const DecayCurve other = run_rb(cfg);
    ASSERT_EQ(other.points.size(), one.points.size());
    for (std::size_t i = 0; i < one.points.size(); ++i) {
      EXPECT_EQ(other.points[i].mean, one.points[i].mean);
      EXPECT_EQ(other.points[i].std_error, one.points[i].std_error);
    }
  }
  cfg.master_seed = 78;
  EXPECT_NE(run_rb(cfg).points[1].mean, one.points[1].mean);
}

TEST(RunRb, AmplitudeErrorDecays) {
  SimConfig cfg = small_config();
  cfg.scheme = SchemeId::kBareRect;
  cfg.eps_model = FixedAmplitudeError{0.05};
  const DecayCurve curve = run_rb(cfg);
  EXPECT_LT(curve.points.back().mean, curve.points.front().mean);
  EXPECT_LT(curve.points.back().mean, 0.99);
}

TEST(RunRb, ValidatesConfig) {
  SimConfig cfg = small_config();
  cfg.m_values = {4, 2};
  EXPECT_THROW(run_rb(cfg), InvalidInput);
  cfg = small_config();
  cfg.m_values = {0, 2};
  EXPECT_THROW(run_rb(cfg), InvalidInput);
  cfg = small_config();
  cfg.n_noise = 0;
  EXPECT_THROW(run_rb(cfg), InvalidInput);
  cfg = small_config();
  cfg.dt = 1e-6;  // coarser than a tenth of the 4 us pi/2 pulse
  EXPECT_THROW(run_rb(cfg), InvalidInput);
}

TEST(Coherence, FidMatchesAnalyticAtDecayTime) {
  SimConfig cfg;
  cfg.noise = kCalibrated;
  cfg.n_noise = 10000;
  cfg.master_seed = 3;
  CoherenceSpec spec;
  spec.kind = CoherenceKind::kFid;
  spec.times = {100e-6, 360e-6, 700e-6};
  const DecayCurve curve = run_coherence(spec, cfg);
  for (const auto& p : curve.points) {
    const double expected = fid_coherence_analytic(kCalibrated, p.x);
    EXPECT_NEAR(p.mean, expected, 3.0 * p.std_error + 1e-3) << p.x;
  }
  EXPECT_NEAR(curve.points[1].mean, std::exp(-1.0), 3.0 * curve.points[1].std_error + 1e-3);
}

TEST(Coherence, EchoOutlastsFid) {
  SimConfig cfg;
  cfg.noise = kCalibrated;
  cfg.n_noise = 400;
  CoherenceSpec fid;
  fid.kind = CoherenceKind::kFid;
  fid.times = {200e-6, 400e-6, 600e-6};
  CoherenceSpec hahn = fid;
  hahn.kind = CoherenceKind::kHahn;
  const DecayCurve a = run_coherence(fid, cfg);
  const DecayCurve b = run_coherence(hahn, cfg);
  EXPECT_EQ(b.label, "hahn");
  for (std::size_t i = 0; i < 3; ++i) EXPECT_GT(b.points[i].mean, a.points[i].mean);
}

TEST(Coherence, DecouplingPreservesCoherence) {
  SimConfig cfg;
  cfg.noise = kCalibrated;
  cfg.n_noise = 100;
  CoherenceSpec spec;
  spec.kind = CoherenceKind::kDd;
  spec.dd = DdKind::kXY16;
  spec.tau_delay = 14.5e-6;
  spec.cycles = {1, 5};
  const DecayCurve curve = run_coherence(spec, cfg);
  EXPECT_EQ(curve.label, "dd_xy16");
  EXPECT_NEAR(curve.points[1].x, 5.0 * 16.0 * (14.5e-6 + 8e-6), 1e-12);
  EXPECT_GE(curve.points[1].mean, 0.9);
}

TEST(Coherence, NoiselessIsFlat) {
  SimConfig cfg;
  cfg.n_noise = 2;
  CoherenceSpec spec;
  spec.kind = CoherenceKind::kHahn;
  spec.times = {50e-6, 100e-6};
  for (const auto& p : run_coherence(spec, cfg).points) EXPECT_NEAR(p.mean, 1.0, 1e-12);
  spec.times = {5e-6};
  EXPECT_THROW(run_coherence(spec, cfg), InvalidInput);
}

TEST(Infidelity, RectAndBb1) {
  const PulseSchedule rect = rectangular(kPi, 0.0, kDefaultOmega1);
  const PulseSchedule robust = bb1(kPi, 0.0, kDefaultOmega1);
  EXPECT_NEAR(schedule_infidelity(rect, 0.0), 0.0, 1e-15);
  const double eps = 0.05;
  EXPECT_NEAR(schedule_infidelity(rect, eps, QubitState()),
              std::pow(std::sin(kPi * eps / 2), 2), 1e-12);
  EXPECT_LT(schedule_infidelity(robust, eps), 1e-6);
  EXPECT_LT(schedule_infidelity(robust, eps, QubitState()), 1e-6);
}

TEST(Accumulation, RepeatedIsQuadraticRandomizedIsLinear) {
  SimConfig cfg;
  cfg.master_seed = 9;
  AccumulationSpec spec;
  spec.n_random = 100;
  const AccumulationResult r = run_error_accumulation(spec, cfg);
  const double rep = loglog_slope(r.repeated.xs(), r.repeated.means());
  const double rnd = loglog_slope(r.randomized.xs(), r.randomized.means());
  EXPECT_NEAR(rep, 2.0, 0.1);
  EXPECT_NEAR(rnd, 1.0, 0.15);
}

}  // namespace
}  // namespace rbsim
