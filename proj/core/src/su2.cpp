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

#include "rbsim/su2.hpp"

#include <cmath>
#include <string>

#include "rbsim/errors.hpp"

namespace rbsim {
namespace {

constexpr double kAxisTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
constexpr double kStateTol = 1e-12;

const Mat2c& pauli(int i) {
  static const Mat2c sx = (Mat2c() << 0, 1, 1, 0).finished();
  static const Mat2c sy =
      (Mat2c() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  static const Mat2c sz = (Mat2c() << 1, 0, 0, -1).finished();
  switch (i) {
    case 0:
      return sx;
    case 1:
      return sy;
    default:
      return sz;
  }
}

}  // namespace

Rotation::Rotation() : axis_(0.0, 0.0, 1.0), angle_(0.0) {}

Rotation::Rotation(const Vec3& axis, double angle) : axis_(axis), angle_(angle) {
  if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > kAxisTol) {
    throw InvalidInput("rotation axis must be a unit vector");
  }
  if (!std::isfinite(angle)) {
    throw InvalidInput("rotation angle must be finite");
  }
}

Rotation Rotation::about_x(double angle) { return Rotation(Vec3::UnitX(), angle); }
Rotation Rotation::about_y(double angle) { return Rotation(Vec3::UnitY(), angle); }
Rotation Rotation::about_z(double angle) { return Rotation(Vec3::UnitZ(), angle); }

Rotation Rotation::in_plane(double phi, double angle) {
  return Rotation(Vec3(std::cos(phi), std::sin(phi), 0.0), angle);
}

Rotation Rotation::from_so3(const Mat3& r) {
  Eigen::AngleAxisd aa(r);
  if (std::abs(aa.angle()) < 1e-14) return Rotation();
  return Rotation(aa.axis().normalized(), aa.angle());
}

Mat3 Rotation::so3() const {
  return Eigen::AngleAxisd(angle_, axis_).toRotationMatrix();
}

Unitary2::Unitary2() : m_(Mat2c::Identity()) {}

Unitary2::Unitary2(const Mat2c& m) : m_(m) {
  if (!m.allFinite()) throw InvalidInput("unitary has non-finite entries");
  const double dev = (m * m.adjoint() - Mat2c::Identity()).norm();
  if (dev > kUnitaryTol || std::abs(std::abs(m.determinant()) - 1.0) > kUnitaryTol) {
    throw InvalidInput("matrix is not unitary (deviation " + std::to_string(dev) +
                       ")");
  }
}

Unitary2 Unitary2::adjoint() const { return Unitary2(m_.adjoint(), Unchecked{}); }

Mat3 Unitary2::so3() const {
  Mat3 r;
  const Mat2c ud = m_.adjoint();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = 0.5 * (pauli(i) * m_ * pauli(j) * ud).trace().real();
    }
  }
  return r;
}

Rotation Unitary2::rotation() const { return Rotation::from_so3(so3()); }

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
  return Unitary2(a.m_ * b.m_, Unitary2::Unchecked{});
}

double phase_insensitive_overlap(const Unitary2& u, const Unitary2& v) {
  return std::abs((u.matrix().adjoint() * v.matrix()).trace()) / 2.0;
}

QubitState::QubitState() : r_(0.0, 0.0, 1.0) {}

QubitState::QubitState(const Vec3& bloch) : r_(bloch) {
  if (!bloch.allFinite() || bloch.norm() > 1.0 + kStateTol) {
    throw InvalidInput("Bloch vector must be finite with norm <= 1");
  }
}

QubitState QubitState::from_density(const Mat2c& rho) {
  if (!rho.allFinite() || (rho - rho.adjoint()).norm() > kStateTol) {
    throw InvalidInput("density matrix must be Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kStateTol) {
    throw InvalidInput("density matrix must have unit trace");
  }
  const Vec3 r(2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(),
               (rho(0, 0) - rho(1, 1)).real());
  return QubitState(r);
}

QubitState QubitState::along(const Vec3& direction) {
  return QubitState(direction.normalized());
}

Mat2c QubitState::density() const {
  Mat2c rho;
  rho << Complex(1.0 + r_.z(), 0.0), Complex(r_.x(), -r_.y()),
      Complex(r_.x(), r_.y()), Complex(1.0 - r_.z(), 0.0);
  return 0.5 * rho;
}

Unitary2 rotation_unitary(const Rotation& r) {
  const double c = std::cos(r.angle() / 2.0);
  const double s = std::sin(r.angle() / 2.0);
  const Vec3& n = r.axis();
  Mat2c m;
  m << Complex(c, -s * n.z()), Complex(-s * n.y(), -s * n.x()),
      Complex(s * n.y(), -s * n.x()), Complex(c, s * n.z());
  return Unitary2(m);
}

QubitState apply(const Unitary2& u, const QubitState& s) {
  Vec3 r = u.so3() * s.bloch();
  // Rounding can push a pure state a few ulps past the sphere.
  const double n = r.norm();
  if (n > 1.0) r /= n;
  return QubitState(r);
}

double expect_sz(const QubitState& s) { return s.bloch().z(); }
double expect_sx(const QubitState& s) { return s.bloch().x(); }

double trace_fidelity(const QubitState& a, const QubitState& b) {
  return 0.5 * (1.0 + a.bloch().dot(b.bloch()));
}

}  // namespace rbsim
