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
#include <string>
#include <string_view>
#include <vector>

#include "rbsim/clifford.hpp"
#include "rbsim/pulses.hpp"
#include "rbsim/random.hpp"

namespace rbsim {

/// One benchmarking step C = P G.
struct PGStep {
  PGate p;
  GGate g;

  CliffordElement clifford() const { return compose(p.clifford(), g.clifford()); }
  friend bool operator==(const PGStep&, const PGStep&) = default;
};

/// R = p * g[k-1] * ... * g[0], with k <= 2 pi/2 rotations (g[0] first in time).
struct RecoveryDecomposition {
  PGate p;
  std::vector<GGate> g;

  CliffordElement clifford() const;
  friend bool operator==(const RecoveryDecomposition&,
                         const RecoveryDecomposition&) = default;
};

/// Shortest decompositions of a Clifford element into at most two pi/2 steps
/// followed by a Pauli step. Single pi/2 steps only reach half of the group, so
/// some elements need none and some need two.
const std::vector<RecoveryDecomposition>& recovery_decompositions(
    const CliffordElement& c);

/// Random P operations sandwiching the complement R; time order pre, R, post.
struct Recovery {
  PGate pre;
  CliffordElement r;
  RecoveryDecomposition r_steps;
  PGate post;

  friend bool operator==(const Recovery&, const Recovery&) = default;
};

struct RBSequence {
  std::vector<PGStep> gates;
  Recovery recovery;

  std::size_t m() const { return gates.size(); }
  /// Product of the gates alone.
  CliffordElement accumulated() const;
  /// Product of gates and recovery; a Pauli for every valid sequence.
  CliffordElement net() const;

  friend bool operator==(const RBSequence&, const RBSequence&) = default;
};

/// m i.i.d. uniform (P, G) draws followed by a randomized recovery. The
/// recovery undoes the gates up to its final random P, so the ideal outcome
/// is +z or -z.
RBSequence sample_rb_sequence(std::size_t m, Rng& rng);

/// Ideal final z projection (+1 or -1) of the gates plus recovery.
int readout_sign(const RBSequence& seq);

/// Text form, e.g. "+X180*-Y90 +I*+Z90 | -Y180 R(+X180*+X90) +I". Gates are
/// written P*G in operator order.
std::string to_text(const RBSequence& seq);
RBSequence parse_rb_sequence(std::string_view text);

struct CompiledSequence {
  PulseSchedule program;
  /// Ideal z projection of the compiled program, including the Pauli action of
  /// any decoupling pulses.
  int readout_sign = 1;
  double gate_period = 0.0;
};

/// Compiles gates through the scheme and the recovery in the scheme's pulse
/// style (no padding, no decoupling), tracking the software frame throughout.
CompiledSequence compile_sequence(const RBSequence& seq, SchemeId scheme,
                                  const SchemeParams& params);

}  // namespace rbsim
