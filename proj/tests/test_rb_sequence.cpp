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

#include <array>
#include <cmath>

#include "rbsim/engine.hpp"
#include "rbsim/errors.hpp"
#include "rbsim/rb_sequence.hpp"

namespace rbsim {
namespace {

// SO(3) product of the logical rotations in time order, built from the
// rotation matrices rather than the Clifford tables.
Mat3 brute_force(const RBSequence& seq) {
  Mat3 r = Mat3::Identity();
  for (const PGStep& s : seq.gates) r = s.p.rotation().so3() * s.g.rotation().so3() * r;
  const Recovery& rec = seq.recovery;
  r = rec.pre.rotation().so3() * r;
  for (const GGate& g : rec.r_steps.g) r = g.rotation().so3() * r;
  r = rec.r_steps.p.rotation().so3() * r;
  return rec.post.rotation().so3() * r;
}

TEST(Sampling, UniformOverPairs) {
  Rng rng(2024);
  std::array<int, 48> counts{};
  const int draws = 100000;
  int done = 0;
  while (done < draws) {
    const RBSequence seq = sample_rb_sequence(100, rng);
    for (const PGStep& s : seq.gates) {
      std::size_t pi = 0, gi = 0;
      for (std::size_t k = 0; k < 8; ++k) pi = PGate::all()[k] == s.p ? k : pi;
      for (std::size_t k = 0; k < 6; ++k) gi = GGate::all()[k] == s.g ? k : gi;
      ++counts[pi * 6 + gi];
      if (++done == draws) break;
    }
  }
  const double p = 1.0 / 48.0;
  const double expected = draws * p;
  const double sd = std::sqrt(draws * p * (1.0 - p));
  double chi2 = 0.0;
  for (int c : counts) {
    EXPECT_LT(std::abs(c - expected), 5.0 * sd);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  // 47 degrees of freedom; 99.9th percentile is about 82.7.
  EXPECT_LT(chi2, 82.7);
}

TEST(Recovery, SingleGate) {
  RBSequence seq;
  seq.gates = {{PGate{}, GGate{Axis::kX, false}}};
  Rng rng(1);
  const RBSequence sampled = sample_rb_sequence(1, rng);
  seq.recovery = sampled.recovery;
  // Rebuild the recovery for this gate list by sampling until one fits.
  for (int i = 0; i < 1000; ++i) {
    const RBSequence s = sample_rb_sequence(1, rng);
    if (s.gates == seq.gates) {
      EXPECT_NE(s.net().z_to_z(), 0);
      EXPECT_EQ(readout_sign(s), s.net().z_to_z());
      return;
    }
  }
  FAIL() << "gate pair never drawn";
}

TEST(Recovery, DecompositionsAreMinimalAndExact) {
  std::size_t with_zero = 0;
  for (const auto& c : CliffordElement::all()) {
    const auto& decs = recovery_decompositions(c);
    ASSERT_FALSE(decs.empty());
    const std::size_t len = decs.front().g.size();
    EXPECT_LE(len, 2u);
    with_zero += len == 0;
    for (const auto& d : decs) {
      EXPECT_EQ(d.g.size(), len);
      EXPECT_EQ(d.clifford(), c);
    }
  }
  EXPECT_EQ(with_zero, 4u);
}

TEST(Recovery, ExhaustiveShortSequences) {
  // Every gate list of length 1 and 2, each with several random recoveries.
  Rng rng(99);
  for (std::size_t a = 0; a < 48; ++a) {
    for (std::size_t b = 0; b < 48; ++b) {
      RBSequence seq = sample_rb_sequence(2, rng);
      seq.gates = {{PGate::all()[a / 6], GGate::all()[a % 6]},
                   {PGate::all()[b / 6], GGate::all()[b % 6]}};
      // Recompute the recovery for the forced gates.
      const CliffordElement acc = seq.accumulated();
      Recovery& rec = seq.recovery;
      rec.r = invert(compose(rec.pre.clifford(), acc));
      rec.r_steps = recovery_decompositions(rec.r).front();
      EXPECT_EQ(std::abs(seq.net().z_to_z()), 1);
      EXPECT_LT((brute_force(seq) - seq.net().so3()).norm(), 1e-12);
    }
  }
}

TEST(Recovery, RandomSequencesReturnToZ) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = 1 + static_cast<std::size_t>(i % 80);
    const RBSequence seq = sample_rb_sequence(m, rng);
    ASSERT_EQ(seq.m(), m);
    const Mat3 r = brute_force(seq);
    EXPECT_NEAR(std::abs(r(2, 2)), 1.0, 1e-9);
    EXPECT_EQ(readout_sign(seq), static_cast<int>(std::lround(r(2, 2))));
    // The net action is exactly the final Pauli.
    EXPECT_EQ(seq.net(), seq.recovery.post.clifford());
  }
}

TEST(Recovery, ZeroLengthIsValid) {
  Rng rng(8);
  const RBSequence seq = sample_rb_sequence(0, rng);
  EXPECT_EQ(seq.m(), 0u);
  EXPECT_EQ(std::abs(readout_sign(seq)), 1);
}

TEST(TextFormat, RoundTrip) {
  Rng rng(3);
  for (std::size_t m : {0u, 1u, 5u, 80u}) {
    const RBSequence seq = sample_rb_sequence(m, rng);
    const std::string text = to_text(seq);
    EXPECT_EQ(parse_rb_sequence(text), seq) << text;
  }
  EXPECT_THROW(parse_rb_sequence("+X180*+X90"), InvalidInput);
  EXPECT_THROW(parse_rb_sequence("+X180+X90 | +I R(+I) +I"), InvalidInput);
  EXPECT_THROW(parse_rb_sequence("+I*+X90 | +I R(+I*+Y90) +I"), InvalidInput);
}

TEST(Compile, IdealSurvivalIsOneForAllSchemes) {
  Rng rng(12);
  const SchemeParams params;
  for (SchemeId id : all_schemes()) {
    for (int i = 0; i < 40; ++i) {
      const RBSequence seq = sample_rb_sequence(1 + static_cast<std::size_t>(i) * 2, rng);
      const CompiledSequence c = compile_sequence(seq, id, params);
      const double z = propagate(QubitState(), c.program, 0.0).bloch().z();
      EXPECT_NEAR(c.readout_sign * z, 1.0, 1e-8) << to_string(id);
    }
  }
}

TEST(Compile, FrameTrackingMatchesLogicalProduct) {
  // With KDD-5 P gates and z rotations, the physical propagator still equals
  // R_z(frame_shift) times the logical product.
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const RBSequence seq = sample_rb_sequence(12, rng);
    const CompiledSequence c = compile_sequence(seq, SchemeId::kSchemeA, SchemeParams{});
    const Mat3 physical = c.program.physical_unitary(0.0).so3();
    const Mat3 expected = Rotation::about_z(c.program.frame_shift()).so3() * brute_force(seq);
    EXPECT_LT((physical - expected).norm(), 1e-8);
    EXPECT_EQ(c.readout_sign, readout_sign(seq));
  }
}

}  // namespace
}  // namespace rbsim
