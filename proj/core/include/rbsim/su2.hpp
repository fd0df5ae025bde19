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

#include <Eigen/Dense>
#include <complex>

// Single-qubit states and rotations. Unitaries follow the convention
// U = exp(-i theta n.sigma / 2), which rotates Bloch vectors by +theta about n.

namespace rbsim {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Rotation by `angle` radians about a unit `axis`.
class Rotation {
 public:
  /// Identity rotation (axis +z, angle 0).
  Rotation();
  /// Throws InvalidInput when the axis is not unit length within 1e-12 or the
  /// angle is not finite.
  Rotation(const Vec3& axis, double angle);

  static Rotation about_x(double angle);
  static Rotation about_y(double angle);
  static Rotation about_z(double angle);
  /// Rotation about the xy-plane axis (cos phi, sin phi, 0).
  static Rotation in_plane(double phi, double angle);
  /// Axis-angle form of a proper rotation matrix.
  static Rotation from_so3(const Mat3& r);

  const Vec3& axis() const { return axis_; }
  double angle() const { return angle_; }

  /// The 3x3 rotation matrix acting on Bloch vectors.
  Mat3 so3() const;

 private:
  Vec3 axis_;
  double angle_;
};

/// 2x2 unitary. Validated on construction: U U^dagger = 1 and |det U| = 1
/// within 1e-10.
class Unitary2 {
 public:
  Unitary2();
  explicit Unitary2(const Mat2c& m);

  static Unitary2 identity() { return Unitary2(); }

  const Mat2c& matrix() const { return m_; }
  Unitary2 adjoint() const;
  /// Bloch-sphere action: R_ij = tr(sigma_i U sigma_j U^dagger) / 2.
  Mat3 so3() const;
  /// Axis-angle form of the SO(3) action.
  Rotation rotation() const;

  /// Operator product; (a * b) applies b first.
  friend Unitary2 operator*(const Unitary2& a, const Unitary2& b);

 private:
  struct Unchecked {};
  Unitary2(const Mat2c& m, Unchecked) : m_(m) {}

  Mat2c m_;
};

/// |tr(U^dagger V)| / 2; equals 1 iff U and V agree up to a global phase.
double phase_insensitive_overlap(const Unitary2& u, const Unitary2& v);

/// Single-qubit state stored as a Bloch vector r, rho = (1 + r.sigma) / 2.
class QubitState {
 public:
  /// Pure |0><0| (Bloch +z), the thermal-equilibrium direction.
  QubitState();
  /// Throws InvalidInput if |r| > 1 + 1e-12 or r is not finite.
  explicit QubitState(const Vec3& bloch);

  /// Throws InvalidInput unless rho is Hermitian with unit trace and
  /// eigenvalues in [0, 1] (all within 1e-12).
  static QubitState from_density(const Mat2c& rho);
  static QubitState maximally_mixed() { return QubitState(Vec3::Zero()); }
  static QubitState along(const Vec3& direction);

  const Vec3& bloch() const { return r_; }
  Mat2c density() const;

 private:
  Vec3 r_;
};

/// exp(-i theta n.sigma / 2).
Unitary2 rotation_unitary(const Rotation& r);

/// U rho U^dagger.
QubitState apply(const Unitary2& u, const QubitState& s);

/// tr(rho sigma_z), in [-1, 1].
double expect_sz(const QubitState& s);
double expect_sx(const QubitState& s);

/// tr(rho_a rho_b). Symmetric; equals 1 for identical pure states.
double trace_fidelity(const QubitState& a, const QubitState& b);

/// Rotates v by `angle` about the unit vector `axis` (Rodrigues formula).
inline Vec3 rotate_vector(const Vec3& v, const Vec3& axis, double cos_a,
                          double sin_a) {
  return v * cos_a + axis.cross(v) * sin_a + axis * (axis.dot(v) * (1.0 - cos_a));
}

}  // namespace rbsim
