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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "rbsim/su2.hpp"

namespace rbsim {

/// Single-qubit Clifford element as its SO(3) image: a signed 3x3 permutation
/// matrix with determinant +1. Exactly 24 such matrices exist.
class CliffordElement {
 public:
  /// Identity.
  CliffordElement();

  /// Rounds a rotation matrix to the nearest signed permutation. Throws
  /// InvalidInput when the rotation is not a Clifford within 1e-9.
  static CliffordElement from_rotation(const Rotation& r);
  static CliffordElement from_so3(const Mat3& r);

  /// All 24 elements in a fixed order; position equals index().
  static std::span<const CliffordElement, 24> all();

  std::size_t index() const;
  int entry(int row, int col) const { return m_[3 * row + col]; }
  Mat3 so3() const;
  /// Image of the Bloch z axis under this element: +1 or -1 times z when
  /// the element preserves the z axis, 0 otherwise.
  int z_to_z() const { return entry(2, 2); }

  friend bool operator==(const CliffordElement&, const CliffordElement&) = default;

 private:
  std::array<std::int8_t, 9> m_;
};

/// a o b: apply b first, then a.
CliffordElement compose(const CliffordElement& a, const CliffordElement& b);
CliffordElement invert(const CliffordElement& c);

enum class Axis : std::uint8_t { kNone, kX, kY, kZ };

/// Pauli-type step: identity or a pi rotation about +-x, +-y, +-z. The sign of
/// the identity is a label only; both identities act trivially.
struct PGate {
  Axis axis = Axis::kNone;
  bool negative = false;

  static std::span<const PGate, 8> all();

  Rotation rotation() const;
  CliffordElement clifford() const;
  bool is_identity() const { return axis == Axis::kNone; }
  bool is_virtual() const { return axis == Axis::kNone || axis == Axis::kZ; }
  std::string name() const;

  friend bool operator==(const PGate&, const PGate&) = default;
};

/// Computational step: a pi/2 rotation about +-x, +-y or +-z.
struct GGate {
  Axis axis = Axis::kX;
  bool negative = false;

  static std::span<const GGate, 6> all();

  Rotation rotation() const;
  CliffordElement clifford() const;
  bool is_virtual() const { return axis == Axis::kZ; }
  std::string name() const;

  friend bool operator==(const GGate&, const GGate&) = default;
};

PGate parse_pgate(std::string_view text);
GGate parse_ggate(std::string_view text);

/// Software rotating frame. `angle` accumulates the virtual z rotations
/// executed so far; a logical pulse of phase phi is emitted with physical
/// phase phi - angle. With this convention the physical propagator always
/// equals R_z(-angle) times the logical one, so z readout is unaffected.
struct PauliFrame {
  double angle = 0.0;

  double emitted_phase(double nominal_phase) const { return nominal_phase - angle; }
};

/// Adds z_angle to the frame, reduced to (-pi, pi].
PauliFrame frame_advance(const PauliFrame& f, double z_angle);

}  // namespace rbsim
