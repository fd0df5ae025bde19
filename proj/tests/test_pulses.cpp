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
#include <fstream>
#include <sstream>

#include "rbsim/analysis.hpp"
#include "rbsim/clifford.hpp"
#include "rbsim/engine.hpp"
#include "rbsim/errors.hpp"
#include "rbsim/pulses.hpp"

namespace rbsim {
namespace {

constexpr double kW = kDefaultOmega1;

// Brute-force product of segment propagators, computed here from scratch.
Mat3 segment_product(const PulseSchedule& s, double eps = 0.0) {
  Mat3 r = Mat3::Identity();
  for (const auto& seg : s.segments()) {
    if (seg.kind != SegmentKind::kDrive) continue;
    r = Rotation::in_plane(seg.phase, seg.amplitude * (1.0 + eps) * seg.duration).so3() * r;
  }
  return r;
}

Mat3 expected_physical(const PulseSchedule& s) {
  return Rotation::about_z(s.frame_shift()).so3() * s.ideal().so3();
}

double z_infidelity(const PulseSchedule& s, double eps) {
  return schedule_infidelity(s, eps, QubitState());
}

TEST(Rectangular, PiPulseTiming) {
  const PulseSchedule s = rectangular(kPi, 0.0, kW);
  ASSERT_EQ(s.segments().size(), 1u);
  EXPECT_NEAR(s.segments()[0].duration, 8e-6, 1e-18);
  EXPECT_NEAR(rectangular(kPi / 2, 0.0, kW).duration(), s.duration() / 2, 1e-18);
}

TEST(Rectangular, IdealAction) {
  for (double phi : {0.0, 0.4, kPi / 2, 2.0}) {
    const PulseSchedule s = rectangular(kPi / 2, phi, kW);
    EXPECT_LT((segment_product(s) - Rotation::in_plane(phi, kPi / 2).so3()).norm(), 1e-8);
    const QubitState out = propagate(QubitState(), s, 0.0);
    EXPECT_LT((out.bloch() - Rotation::in_plane(phi, kPi / 2).so3() * Vec3::UnitZ()).norm(), 1e-8);
  }
}

TEST(Bb1, Beta) {
  EXPECT_NEAR(bb1_beta(kPi / 2), std::acos(-1.0 / 8.0), 1e-15);
  EXPECT_NEAR(bb1_beta(kPi / 2), 1.696, 0.001);
  EXPECT_NEAR(bb1_beta(kPi), 1.823, 0.001);
  EXPECT_NEAR(bb1_beta(1e-12), kPi / 2, 1e-12);
  EXPECT_THROW(bb1_beta(4.1 * kPi), InvalidInput);
}

TEST(Bb1, Structure) {
  const PulseSchedule s = bb1(kPi / 2, 0.3, kW);
  ASSERT_EQ(s.segments().size(), 4u);
  const double beta = bb1_beta(kPi / 2);
  const double phases[4] = {0.3, beta + 0.3, 3 * beta + 0.3, beta + 0.3};
  const double angles[4] = {kPi / 2, kPi, 2 * kPi, kPi};
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(s.segments()[k].phase, phases[k], 1e-12);
    EXPECT_NEAR(s.segments()[k].duration * kW, angles[k], 1e-12);
  }
  EXPECT_EQ(s.frame_shift(), 0.0);
  EXPECT_NEAR(s.duration(), 36e-6, 1e-15);
  EXPECT_NEAR(bb1(kPi, 0.0, kW).duration(), 40e-6, 1e-15);
}

TEST(Bb1, RobustAgainstAmplitudeError) {
  const double eps = 0.05;
  const double rect = z_infidelity(rectangular(kPi, 0.0, kW), eps);
  EXPECT_NEAR(rect, std::pow(std::sin(kPi * eps / 2), 2), 1e-12);
  EXPECT_NEAR(rect, 6.2e-3, 0.05e-3);
  EXPECT_LE(z_infidelity(bb1(kPi, 0.0, kW), eps), 1e-4);
}

TEST(Bb1, InfidelityScalingOrder) {
  std::vector<double> eps, rect, robust;
  for (double e = 0.01; e <= 0.1 + 1e-12; e *= std::pow(10.0, 0.125)) {
    eps.push_back(e);
    rect.push_back(schedule_infidelity(rectangular(kPi, 0.0, kW), e));
    robust.push_back(schedule_infidelity(bb1(kPi, 0.0, kW), e));
  }
  EXPECT_NEAR(loglog_slope(eps, rect), 2.0, 0.05);
  EXPECT_GE(loglog_slope(eps, robust), 4.0);
}

TEST(Bb1Spread, Layout) {
  const PulseSchedule s = bb1_spread(kPi / 2, 0.0, kW);
  int delays = 0;
  for (const auto& seg : s.segments()) {
    if (seg.kind == SegmentKind::kDelay) {
      ++delays;
      EXPECT_NEAR(seg.duration, 8e-6, 1e-15);
    } else if (&seg != &s.segments().front()) {
      EXPECT_NEAR(seg.duration, 8e-6, 1e-15);
    }
  }
  EXPECT_EQ(delays, 4);
  EXPECT_EQ(s.drive_count(), 5u);
  EXPECT_LT((segment_product(s) - Rotation::in_plane(0.0, kPi / 2).so3()).norm(), 1e-8);

  SpreadOptions no_lead;
  no_lead.leading_delay = false;
  no_lead.delay = 3e-6;
  EXPECT_NEAR(bb1_spread(kPi / 2, 0.0, kW, no_lead).duration(), 36e-6 + 9e-6, 1e-15);
}

TEST(Bb1Spread, RefocusesSlowNoise) {
  // Same noise realizations drive the gate and a bare delay of equal length.
  const OUParams noise = calibrate(360e-6, 740e-6);
  const PulseSchedule gate = bb1_spread(kPi / 2, 0.0, kW);
  const PulseSchedule idle = ScheduleBuilder(kW).delay(gate.duration()).build();
  const Vec3 gate_target = Rotation::in_plane(0.0, kPi / 2).so3() * Vec3::UnitY();
  double gate_sum = 0.0, idle_sum = 0.0;
  const int n = 2000;
  const double dt = 1e-7;
  for (int j = 0; j < n; ++j) {
    const NoiseTrajectory traj = ou_trajectory(noise, gate.duration(), dt, 1000 + j);
    gate_sum += propagate(QubitState(Vec3::UnitY()), gate, traj, 0.0).bloch().dot(gate_target);
    idle_sum += propagate(QubitState(Vec3::UnitY()), idle, traj, 0.0).bloch().y();
  }
  EXPECT_GE(gate_sum / n, idle_sum / n);
}

TEST(Kdd5, IdealProduct) {
  const PulseSchedule s = kdd5(0.0, kW);
  ASSERT_EQ(s.segments().size(), 5u);
  Unitary2 u;
  for (const auto& seg : s.segments()) {
    u = rotation_unitary(Rotation::in_plane(seg.phase, kPi)) * u;
  }
  const Unitary2 expected =
      rotation_unitary(Rotation::about_z(-kPi / 3)) * rotation_unitary(Rotation::about_x(kPi));
  EXPECT_NEAR(phase_insensitive_overlap(u, expected), 1.0, 1e-9);
  EXPECT_NEAR(s.frame_shift(), -kPi / 3, 1e-15);
  EXPECT_NEAR(s.duration(), 40e-6, 1e-15);
}

TEST(Kdd5, RobustInversion) {
  const double eps = 0.05;
  auto inversion_error = [&](const PulseSchedule& s) {
    const double z = propagate(QubitState(), s, eps).bloch().z();
    return 1.0 - std::sqrt((1.0 - z) / 2.0);
  };
  EXPECT_LE(10.0 * inversion_error(kdd5(0.0, kW)), inversion_error(rectangular(kPi, 0.0, kW)));
}

TEST(DdCycle, Xy4IsIdentity) {
  const PulseSchedule s = dd_cycle(DdKind::kXY4, PulseStyle::kRect, 5e-6, kW);
  EXPECT_LT((segment_product(s) - Mat3::Identity()).norm(), 1e-9);
  EXPECT_EQ(s.drive_count(), 4u);
}

TEST(DdCycle, PulseCountsAndPhases) {
  EXPECT_EQ(dd_cycle(DdKind::kXY8, PulseStyle::kRect, 1e-6, kW).drive_count(), 8u);
  EXPECT_EQ(dd_cycle(DdKind::kXY16, PulseStyle::kRect, 1e-6, kW).drive_count(), 16u);
  EXPECT_EQ(dd_cycle(DdKind::kXY16, PulseStyle::kBb1, 1e-6, kW).drive_count(), 64u);
  const auto p = dd_phases(DdKind::kXY16);
  ASSERT_EQ(p.size(), 16u);
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(p[8 + k], p[k] + kPi, 1e-15);
  const std::vector<double> xy8{0, kPi / 2, 0, kPi / 2, kPi / 2, 0, kPi / 2, 0};
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(p[k], xy8[k], 1e-15);
  for (auto kind : {DdKind::kXY8, DdKind::kXY16}) {
    for (auto style : {PulseStyle::kRect, PulseStyle::kBb1}) {
      const PulseSchedule s = dd_cycle(kind, style, 3e-6, kW);
      EXPECT_LT((segment_product(s) - Mat3::Identity()).norm(), 1e-9);
    }
  }
}

TEST(DdCycle, DelayLayout) {
  const double tau = 4e-6;
  const PulseSchedule s = dd_cycle(DdKind::kXY4, PulseStyle::kRect, tau, kW);
  const auto& seg = s.segments();
  ASSERT_EQ(seg.size(), 9u);
  EXPECT_NEAR(seg.front().duration, tau / 2, 1e-18);
  EXPECT_NEAR(seg.back().duration, tau / 2, 1e-18);
  EXPECT_NEAR(seg[2].duration, tau, 1e-18);
  EXPECT_NEAR(s.duration(), 4 * 8e-6 + 4 * tau, 1e-15);
}

TEST(DdCycle, PiContentAtLeastHalf) {
  for (double tau : {0.0, 2e-6, 8e-6}) {
    const PulseSchedule s = dd_cycle(DdKind::kXY16, PulseStyle::kRect, tau, kW);
    double drive = 0.0;
    for (const auto& seg : s.segments()) {
      if (seg.kind == SegmentKind::kDrive) {
        drive += seg.duration;
        EXPECT_NEAR(seg.duration * seg.amplitude, kPi, 1e-12);
      }
    }
    EXPECT_GE(drive / s.duration(), 0.5 - 1e-12);
  }
}

TEST(CompileGate, GatePeriods) {
  const SchemeParams p;
  const std::pair<SchemeId, double> expected[] = {
      {SchemeId::kBareRect, 12e-6}, {SchemeId::kBareBb1, 76e-6}, {SchemeId::kSchemeA, 88e-6},
      {SchemeId::kSchemeB, 116e-6}, {SchemeId::kSchemeC, 152e-6}, {SchemeId::kSchemeD, 336e-6},
      {SchemeId::kSchemeE, 384e-6}};
  for (const auto& [id, tau] : expected) {
    EXPECT_NEAR(gate_period(id, p), tau, 1e-12) << to_string(id);
    for (const PGate& pg : PGate::all()) {
      for (const GGate& g : GGate::all()) {
        for (std::size_t index : {0u, 1u, 7u}) {
          EXPECT_NEAR(compile_gate(pg, g, id, p, index).period(), tau, 1e-12)
              << to_string(id) << ' ' << pg.name() << '*' << g.name();
        }
      }
    }
  }
}

TEST(CompileGate, IdealActionForEveryScheme) {
  const SchemeParams params;
  for (SchemeId id : all_schemes()) {
    for (const PGate& p : PGate::all()) {
      for (const GGate& g : GGate::all()) {
        for (std::size_t index = 0; index < 16; index += 5) {
          const PulseSchedule s = compile_gate(p, g, id, params, index);
          // segments realize R_z(frame_shift) * ideal
          EXPECT_LT((segment_product(s) - expected_physical(s)).norm(), 1e-8);
          // ideal is P G up to the Pauli left by decoupling pulses
          const CliffordElement pg = compose(p.clifford(), g.clifford());
          const CliffordElement residual =
              compose(CliffordElement::from_so3(s.ideal().so3()), invert(pg));
          bool pauli = false;
          for (const PGate& q : PGate::all()) pauli = pauli || q.clifford() == residual;
          EXPECT_TRUE(pauli) << to_string(id);
          if (id == SchemeId::kBareRect || id == SchemeId::kBareBb1 ||
              id == SchemeId::kSchemeA) {
            EXPECT_EQ(residual, CliffordElement());
          }
        }
      }
    }
  }
}

TEST(CompileGate, VirtualZEmitsNoDrive) {
  SchemeParams params;
  params.pad_virtual_gates = false;
  const PGate z{Axis::kZ, false};
  const GGate gz{Axis::kZ, false};
  const PulseSchedule s = compile_gate(z, gz, SchemeId::kBareBb1, params);
  EXPECT_TRUE(s.segments().empty());
  EXPECT_LT((expected_physical(s) - Mat3::Identity()).norm(), 1e-12);
  params.pad_virtual_gates = true;
  const PulseSchedule padded = compile_gate(z, gz, SchemeId::kBareBb1, params);
  EXPECT_EQ(padded.drive_count(), 0u);
  EXPECT_NEAR(padded.duration(), 76e-6, 1e-15);
}

TEST(CompileGate, SchemeNames) {
  for (SchemeId id : all_schemes()) EXPECT_EQ(parse_scheme(to_string(id)), id);
  EXPECT_THROW(parse_scheme("scheme_z"), InvalidInput);
}

TEST(TimingTable, MatchesReference) {
  std::ostringstream os;
  write_timing_table(os, compile_gate(PGate{Axis::kX, false}, GGate{Axis::kX, false},
                                      SchemeId::kBareRect, SchemeParams{}));
  std::ifstream ref(RBSIM_TEST_DATA "/bare_rect_x180_x90.csv");
  ASSERT_TRUE(ref);
  std::stringstream expected;
  expected << ref.rdbuf();
  EXPECT_EQ(os.str(), expected.str());
}

TEST(ScheduleBuilder, FrameAbsorbsKdd) {
  ScheduleBuilder b(kW);
  b.append(kdd5(0.0, kW));
  EXPECT_NEAR(b.frame().angle, kPi / 3, 1e-15);
  b.pulse(kPi / 2, 0.0);
  const PulseSchedule s = b.build();
  EXPECT_NEAR(s.segments().back().phase, -kPi / 3, 1e-15);
  EXPECT_LT((segment_product(s) - expected_physical(s)).norm(), 1e-9);
  const Mat3 logical = Rotation::about_x(kPi / 2).so3() * Rotation::about_x(kPi).so3();
  EXPECT_LT((s.ideal().so3() - logical).norm(), 1e-9);
}

TEST(PulseSegment, Validation) {
  EXPECT_THROW(PulseSegment::delay(0.0), InvalidInput);
  EXPECT_THROW(PulseSegment::drive(1e-6, -1.0, 0.0), InvalidInput);
  EXPECT_THROW(rectangular(-1.0, 0.0, kW), InvalidInput);
  EXPECT_THROW(PulseSchedule::from_parts({PulseSegment::drive(8e-6, kW, 0.0)},
                                         Unitary2::identity(), 0.0),
               InvalidInput);
}

}  // namespace
}  // namespace rbsim
