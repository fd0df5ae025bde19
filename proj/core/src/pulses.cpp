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

#include "rbsim/pulses.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "rbsim/errors.hpp"

namespace rbsim {
namespace {

constexpr double kScheduleTol = 1e-8;

double axis_phase(Axis axis, bool negative) {
  double phi = axis == Axis::kY ? kPi / 2.0 : 0.0;
  if (negative) phi += kPi;
  return phi;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string(what) + " must be > 0");
  }
}

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string(what) + " must be >= 0");
  }
}

}  // namespace

PulseSegment PulseSegment::drive(double duration, double amplitude, double phase) {
  require_positive(duration, "segment duration");
  require_non_negative(amplitude, "segment amplitude");
  return PulseSegment{SegmentKind::kDrive, duration, amplitude, phase};
}

PulseSegment PulseSegment::delay(double duration) {
  require_positive(duration, "delay duration");
  return PulseSegment{SegmentKind::kDelay, duration, 0.0, 0.0};
}

PulseSchedule PulseSchedule::from_parts(std::vector<PulseSegment> segments,
                                        const Unitary2& ideal, double frame_shift) {
  for (const auto& s : segments) {
    if (!(s.duration > 0.0)) throw InvalidInput("segment duration must be > 0");
    if (s.amplitude < 0.0) throw InvalidInput("segment amplitude must be >= 0");
    if (s.kind == SegmentKind::kDelay && s.amplitude != 0.0) {
      throw InvalidInput("delay segments carry no amplitude");
    }
  }
  PulseSchedule out;
  out.segments_ = std::move(segments);
  out.ideal_ = ideal;
  out.frame_shift_ = frame_shift;
  const Mat3 expected =
      Rotation::about_z(frame_shift).so3() * ideal.so3();
  const double dev = (out.physical_unitary().so3() - expected).norm();
  if (dev > kScheduleTol) {
    throw InvalidInput("schedule segments do not implement the declared action");
  }
  return out;
}

double PulseSchedule::duration() const {
  double t = 0.0;
  for (const auto& s : segments_) t += s.duration;
  return t;
}

std::size_t PulseSchedule::drive_count() const {
  std::size_t n = 0;
  for (const auto& s : segments_) n += s.kind == SegmentKind::kDrive;
  return n;
}

double PulseSchedule::nutation_in_pi() const {
  double angle = 0.0;
  for (const auto& s : segments_) {
    if (s.kind == SegmentKind::kDrive) angle += s.amplitude * s.duration;
  }
  return angle / kPi;
}

Unitary2 PulseSchedule::physical_unitary(double eps) const {
  Unitary2 u;
  for (const auto& s : segments_) {
    if (s.kind != SegmentKind::kDrive) continue;
    u = rotation_unitary(Rotation::in_plane(s.phase, s.amplitude * (1.0 + eps) *
                                                         s.duration)) *
        u;
  }
  return u;
}

ScheduleBuilder::ScheduleBuilder(double omega1) : omega1_(omega1) {
  require_positive(omega1, "omega1");
}

ScheduleBuilder& ScheduleBuilder::pulse(double theta, double phi) {
  require_positive(theta, "rotation angle");
  const double duration = theta / omega1_;
  segments_.push_back(
      PulseSegment::drive(duration, omega1_, frame_.emitted_phase(phi)));
  ideal_ = rotation_unitary(Rotation::in_plane(phi, theta)) * ideal_;
  elapsed_ += duration;
  return *this;
}

ScheduleBuilder& ScheduleBuilder::delay(double duration) {
  require_non_negative(duration, "delay");
  if (duration == 0.0) return *this;
  if (!segments_.empty() && segments_.back().kind == SegmentKind::kDelay) {
    segments_.back().duration += duration;
  } else {
    segments_.push_back(PulseSegment::delay(duration));
  }
  elapsed_ += duration;
  return *this;
}

ScheduleBuilder& ScheduleBuilder::virtual_z(double angle) {
  frame_ = frame_advance(frame_, angle);
  ideal_ = rotation_unitary(Rotation::about_z(angle)) * ideal_;
  return *this;
}

ScheduleBuilder& ScheduleBuilder::append(const PulseSchedule& s) {
  for (const auto& seg : s.segments()) {
    if (seg.kind == SegmentKind::kDelay) {
      delay(seg.duration);
    } else {
      PulseSegment emitted = seg;
      emitted.phase = seg.phase - frame_.angle;
      segments_.push_back(emitted);
      elapsed_ += seg.duration;
    }
  }
  ideal_ = s.ideal() * ideal_;
  frame_ = frame_advance(frame_, -s.frame_shift());
  return *this;
}

PulseSchedule ScheduleBuilder::build() const {
  return PulseSchedule::from_parts(segments_, ideal_, -frame_.angle);
}

PulseSchedule rectangular(double theta, double phi, double omega1) {
  require_positive(theta, "theta");
  return ScheduleBuilder(omega1).pulse(theta, phi).build();
}

double bb1_beta(double theta) {
  if (!(theta >= 0.0) || theta > 4.0 * kPi) {
    throw InvalidInput("BB1 requires 0 <= theta <= 4 pi");
  }
  return std::acos(-theta / (4.0 * kPi));
}

PulseSchedule bb1(double theta, double phi, double omega1) {
  require_positive(theta, "theta");
  const double beta = bb1_beta(theta);
  return ScheduleBuilder(omega1)
      .pulse(theta, phi)
      .pulse(kPi, beta + phi)
      .pulse(2.0 * kPi, 3.0 * beta + phi)
      .pulse(kPi, beta + phi)
      .build();
}

PulseSchedule bb1_spread(double theta, double phi, double omega1,
                         const SpreadOptions& options) {
  require_positive(theta, "theta");
  const double beta = bb1_beta(theta);
  ScheduleBuilder b(omega1);
  const double delay = options.delay.value_or(2.0 * theta / omega1);
  require_non_negative(delay, "spread delay");
  b.pulse(theta, phi);
  const std::array<double, 4> unit_phases{beta + phi, 3.0 * beta + phi,
                                          3.0 * beta + phi, beta + phi};
  for (std::size_t k = 0; k < unit_phases.size(); ++k) {
    if (k > 0 || options.leading_delay) b.delay(delay);
    b.pulse(kPi, unit_phases[k]);
  }
  return b.build();
}

PulseSchedule kdd5(double phi, double omega1) {
  require_positive(omega1, "omega1");
  std::vector<PulseSegment> segs;
  for (double offset : {kPi / 6.0, 0.0, kPi / 2.0, 0.0, kPi / 6.0}) {
    segs.push_back(PulseSegment::drive(kPi / omega1, omega1, phi + offset));
  }
  return PulseSchedule::from_parts(
      std::move(segs), rotation_unitary(Rotation::in_plane(phi, kPi)), -kPi / 3.0);
}

std::vector<double> dd_phases(DdKind kind) {
  std::vector<double> phases{0.0, kPi / 2.0, 0.0, kPi / 2.0};
  if (kind == DdKind::kXY4) return phases;
  phases.insert(phases.end(), phases.rbegin(), phases.rend());
  if (kind == DdKind::kXY8) return phases;
  const std::size_t n = phases.size();
  for (std::size_t k = 0; k < n; ++k) phases.push_back(phases[k] + kPi);
  return phases;
}

namespace {

void emit_pi(ScheduleBuilder& b, PulseStyle style, double phase) {
  if (style == PulseStyle::kRect) {
    b.pulse(kPi, phase);
  } else {
    b.append(bb1(kPi, phase, b.omega1()));
  }
}

// [s/2 P1 s P2 ... Pn s/2]
void emit_train(ScheduleBuilder& b, PulseStyle style, std::span<const double> phases,
                double spacing) {
  for (std::size_t k = 0; k < phases.size(); ++k) {
    b.delay(k == 0 ? spacing / 2.0 : spacing);
    emit_pi(b, style, phases[k]);
  }
  b.delay(spacing / 2.0);
}

}  // namespace

PulseSchedule dd_cycle(DdKind kind, PulseStyle style, double tau_delay, double omega1) {
  require_non_negative(tau_delay, "tau_delay");
  ScheduleBuilder b(omega1);
  const auto phases = dd_phases(kind);
  emit_train(b, style, phases, tau_delay);
  return b.build();
}

std::string_view to_string(SchemeId id) {
  switch (id) {
    case SchemeId::kBareRect:
      return "bare_rect";
    case SchemeId::kBareBb1:
      return "bare_bb1";
    case SchemeId::kSchemeA:
      return "scheme_a";
    case SchemeId::kSchemeB:
      return "scheme_b";
    case SchemeId::kSchemeC:
      return "scheme_c";
    case SchemeId::kSchemeD:
      return "scheme_d";
    case SchemeId::kSchemeE:
      return "scheme_e";
  }
  return "unknown";
}

std::span<const SchemeId, 7> all_schemes() {
  static const std::array<SchemeId, 7> ids{
      SchemeId::kBareRect, SchemeId::kBareBb1, SchemeId::kSchemeA, SchemeId::kSchemeB,
      SchemeId::kSchemeC,  SchemeId::kSchemeD, SchemeId::kSchemeE};
  return ids;
}

SchemeId parse_scheme(std::string_view name) {
  for (SchemeId id : all_schemes()) {
    if (to_string(id) == name) return id;
  }
  throw InvalidInput("unknown scheme '" + std::string(name) + "'");
}

void SchemeParams::validate() const {
  require_positive(omega1, "omega1");
  require_non_negative(scheme_a_delay, "scheme_a_delay");
  require_non_negative(scheme_b_delay, "scheme_b_delay");
  require_non_negative(scheme_c_delay, "scheme_c_delay");
  require_non_negative(scheme_d_spacing, "scheme_d_spacing");
  require_non_negative(scheme_e_spacing, "scheme_e_spacing");
}

GateStyle gate_style(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::kBareRect:
      return {GateStyle::P::kRect, GateStyle::G::kRect};
    case SchemeId::kSchemeA:
      return {GateStyle::P::kKdd5, GateStyle::G::kBb1Spread};
    default:
      return {GateStyle::P::kBb1, GateStyle::G::kBb1};
  }
}

namespace {

double p_length(const GateStyle& style, double omega1) {
  return (style.p == GateStyle::P::kRect ? 1.0 : 5.0) * kPi / omega1;
}

SpreadOptions scheme_a_spread(const SchemeParams& params) {
  SpreadOptions o;
  o.delay = params.scheme_a_delay;
  o.leading_delay = params.scheme_a_leading_delay;
  return o;
}

double g_length(const GateStyle& style, const SchemeParams& params) {
  const double w = params.omega1;
  switch (style.g) {
    case GateStyle::G::kRect:
      return 0.5 * kPi / w;
    case GateStyle::G::kBb1:
      return 4.5 * kPi / w;
    case GateStyle::G::kBb1Spread:
      return bb1_spread(kPi / 2.0, 0.0, w, scheme_a_spread(params)).duration();
  }
  return 0.0;
}

}  // namespace

void emit_p(ScheduleBuilder& b, const PGate& p, const GateStyle& style,
            const SchemeParams& params, bool pad) {
  if (p.is_virtual()) {
    if (p.axis == Axis::kZ) b.virtual_z(p.negative ? -kPi : kPi);
    if (pad) b.delay(p_length(style, params.omega1));
    return;
  }
  const double phi = axis_phase(p.axis, p.negative);
  switch (style.p) {
    case GateStyle::P::kRect:
      b.pulse(kPi, phi);
      break;
    case GateStyle::P::kBb1:
      b.append(bb1(kPi, phi, params.omega1));
      break;
    case GateStyle::P::kKdd5:
      b.append(kdd5(phi, params.omega1));
      break;
  }
}

void emit_g(ScheduleBuilder& b, const GGate& g, const GateStyle& style,
            const SchemeParams& params, bool pad) {
  if (g.is_virtual()) {
    b.virtual_z(g.negative ? -kPi / 2.0 : kPi / 2.0);
    if (pad) b.delay(g_length(style, params));
    return;
  }
  const double phi = axis_phase(g.axis, g.negative);
  switch (style.g) {
    case GateStyle::G::kRect:
      b.pulse(kPi / 2.0, phi);
      break;
    case GateStyle::G::kBb1:
      b.append(bb1(kPi / 2.0, phi, params.omega1));
      break;
    case GateStyle::G::kBb1Spread:
      b.append(bb1_spread(kPi / 2.0, phi, params.omega1, scheme_a_spread(params)));
      break;
  }
}

namespace {

PulseSchedule compile_gate_unpadded_period(const PGate& p, const GGate& g,
                                           SchemeId scheme, const SchemeParams& params,
                                           std::size_t gate_index) {
  params.validate();
  const GateStyle style = gate_style(scheme);
  const bool pad = params.pad_virtual_gates;
  ScheduleBuilder b(params.omega1);
  static const std::vector<double> xy16 = dd_phases(DdKind::kXY16);
  const double dd_phase = xy16[gate_index % xy16.size()];
  switch (scheme) {
    case SchemeId::kBareRect:
    case SchemeId::kBareBb1:
    case SchemeId::kSchemeA:
      emit_g(b, g, style, params, pad);
      emit_p(b, p, style, params, pad);
      break;
    case SchemeId::kSchemeB:
      emit_g(b, g, style, params, pad);
      b.delay(params.scheme_b_delay / 2.0);
      emit_pi(b, PulseStyle::kBb1, dd_phase);
      b.delay(params.scheme_b_delay / 2.0);
      emit_p(b, p, style, params, pad);
      break;
    case SchemeId::kSchemeC:
      emit_g(b, g, style, params, pad);
      emit_p(b, p, style, params, pad);
      b.delay(params.scheme_c_delay / 2.0);
      emit_pi(b, PulseStyle::kBb1, dd_phase);
      b.delay(params.scheme_c_delay / 2.0);
      break;
    case SchemeId::kSchemeD: {
      // Alternate between the two halves of XY-16; each half is XY-8, whose
      // two XY-4 blocks bracket the gate.
      const std::size_t half = (gate_index % 2) * 8;
      const std::span<const double> phases(xy16.data() + half, 8);
      emit_train(b, PulseStyle::kRect, phases.first(4), params.scheme_d_spacing);
      emit_g(b, g, style, params, pad);
      emit_p(b, p, style, params, pad);
      emit_train(b, PulseStyle::kRect, phases.last(4), params.scheme_d_spacing);
      break;
    }
    case SchemeId::kSchemeE:
      emit_g(b, g, style, params, pad);
      emit_p(b, p, style, params, pad);
      emit_train(b, PulseStyle::kRect, xy16, params.scheme_e_spacing);
      break;
  }
  return b.build();
}

}  // namespace

double gate_period(SchemeId scheme, const SchemeParams& params) {
  return compile_gate_unpadded_period(PGate{Axis::kX, false}, GGate{Axis::kX, false},
                                      scheme, params, 0)
      .duration();
}

PulseSchedule compile_gate(const PGate& p, const GGate& g, SchemeId scheme,
                           const SchemeParams& params, std::size_t gate_index) {
  PulseSchedule s = compile_gate_unpadded_period(p, g, scheme, params, gate_index);
  s.set_period(gate_period(scheme, params));
  return s;
}

void write_timing_table(std::ostream& os, const PulseSchedule& s) {
  os << "start_time,duration,amplitude,phase,kind\n";
  double t = 0.0;
  char line[160];
  for (const auto& seg : s.segments()) {
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%s\n", t, seg.duration,
                  seg.amplitude, seg.phase,
                  seg.kind == SegmentKind::kDrive ? "drive" : "delay");
    os << line;
    t += seg.duration;
  }
}

}  // namespace rbsim
