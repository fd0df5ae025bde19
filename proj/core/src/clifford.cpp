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

#include "rbsim/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rbsim/errors.hpp"

namespace rbsim {
namespace {

std::array<CliffordElement, 24> enumerate_group() {
  std::vector<CliffordElement> found;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Mat3 m = Mat3::Zero();
      for (int row = 0; row < 3; ++row) {
        m(row, perm[row]) = (signs >> row) & 1 ? -1.0 : 1.0;
      }
      if (m.determinant() > 0) found.push_back(CliffordElement::from_so3(m));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  // Identity first; the remaining order is the enumeration order above.
  std::stable_partition(found.begin(), found.end(),
                        [](const CliffordElement& c) { return c == CliffordElement(); });
  std::array<CliffordElement, 24> out;
  std::copy(found.begin(), found.end(), out.begin());
  return out;
}

Vec3 axis_vector(Axis axis, bool negative) {
  const double s = negative ? -1.0 : 1.0;
  switch (axis) {
    case Axis::kX:
      return Vec3(s, 0, 0);
    case Axis::kY:
      return Vec3(0, s, 0);
    case Axis::kZ:
      return Vec3(0, 0, s);
    case Axis::kNone:
      break;
  }
  return Vec3::UnitZ();
}

char axis_letter(Axis axis) {
  switch (axis) {
    case Axis::kX:
      return 'X';
    case Axis::kY:
      return 'Y';
    case Axis::kZ:
      return 'Z';
    case Axis::kNone:
      break;
  }
  return 'I';
}

// Parses "[+|-]<letter><suffix>".
std::pair<Axis, bool> parse_axis_token(std::string_view text, std::string_view suffix,
                                       bool allow_identity) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw InvalidInput("empty gate token '" + original + "'");
  const char letter = text.front();
  text.remove_prefix(1);
  if (letter == 'I' && allow_identity && text.empty()) return {Axis::kNone, negative};
  if (text != suffix) throw InvalidInput("unknown gate token '" + original + "'");
  switch (letter) {
    case 'X':
      return {Axis::kX, negative};
    case 'Y':
      return {Axis::kY, negative};
    case 'Z':
      return {Axis::kZ, negative};
    default:
      throw InvalidInput("unknown gate token '" + original + "'");
  }
}

}  // namespace

CliffordElement::CliffordElement() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

CliffordElement CliffordElement::from_so3(const Mat3& r) {
  CliffordElement c;
  for (int i = 0; i < 9; ++i) {
    const double v = r(i / 3, i % 3);
    const double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9 || std::abs(rounded) > 1.0) {
      throw InvalidInput("rotation is not a Clifford element");
    }
    c.m_[i] = static_cast<std::int8_t>(rounded);
  }
  int nonzero = 0;
  for (auto v : c.m_) nonzero += v != 0;
  if (nonzero != 3 || std::abs(c.so3().determinant() - 1.0) > 1e-12) {
    throw InvalidInput("rotation is not a Clifford element");
  }
  return c;
}

CliffordElement CliffordElement::from_rotation(const Rotation& r) {
  return from_so3(r.so3());
}

std::span<const CliffordElement, 24> CliffordElement::all() {
  static const std::array<CliffordElement, 24> group = enumerate_group();
  return group;
}

std::size_t CliffordElement::index() const {
  const auto group = all();
  const auto it = std::find(group.begin(), group.end(), *this);
  return static_cast<std::size_t>(it - group.begin());
}

Mat3 CliffordElement::so3() const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r(i / 3, i % 3) = m_[i];
  return r;
}

CliffordElement compose(const CliffordElement& a, const CliffordElement& b) {
  std::array<std::int8_t, 9> out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      int s = 0;
      for (int k = 0; k < 3; ++k) s += a.entry(i, k) * b.entry(k, j);
      out[3 * i + j] = static_cast<std::int8_t>(s);
    }
  }
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = out[i];
  return CliffordElement::from_so3(m);
}

CliffordElement invert(const CliffordElement& c) {
  return CliffordElement::from_so3(c.so3().transpose());
}

std::span<const PGate, 8> PGate::all() {
  static const std::array<PGate, 8> gates{{{Axis::kNone, false},
                                           {Axis::kNone, true},
                                           {Axis::kX, false},
                                           {Axis::kX, true},
                                           {Axis::kY, false},
                                           {Axis::kY, true},
                                           {Axis::kZ, false},
                                           {Axis::kZ, true}}};
  return gates;
}

Rotation PGate::rotation() const {
  if (axis == Axis::kNone) return Rotation();
  return Rotation(axis_vector(axis, negative), kPi);
}

CliffordElement PGate::clifford() const {
  return CliffordElement::from_rotation(rotation());
}

std::string PGate::name() const {
  std::string s(1, negative ? '-' : '+');
  s += axis_letter(axis);
  if (axis != Axis::kNone) s += "180";
  return s;
}

std::span<const GGate, 6> GGate::all() {
  static const std::array<GGate, 6> gates{{{Axis::kX, false},
                                           {Axis::kX, true},
                                           {Axis::kY, false},
                                           {Axis::kY, true},
                                           {Axis::kZ, false},
                                           {Axis::kZ, true}}};
  return gates;
}

Rotation GGate::rotation() const {
  return Rotation(axis_vector(axis, negative), kPi / 2.0);
}

CliffordElement GGate::clifford() const {
  return CliffordElement::from_rotation(rotation());
}

std::string GGate::name() const {
  std::string s(1, negative ? '-' : '+');
  s += axis_letter(axis);
  s += "90";
  return s;
}

PGate parse_pgate(std::string_view text) {
  const auto [axis, negative] = parse_axis_token(text, "180", true);
  return PGate{axis, negative};
}

GGate parse_ggate(std::string_view text) {
  const auto [axis, negative] = parse_axis_token(text, "90", false);
  return GGate{axis, negative};
}

PauliFrame frame_advance(const PauliFrame& f, double z_angle) {
  double a = std::remainder(f.angle + z_angle, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  return PauliFrame{a};
}

}  // namespace rbsim
