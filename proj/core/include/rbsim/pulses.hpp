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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbsim/clifford.hpp"
#include "rbsim/su2.hpp"

namespace rbsim {

/// Default amplitude calibration: a pi pulse takes 8 us.
inline constexpr double kDefaultPiTime = 8e-6;
inline constexpr double kDefaultOmega1 = kPi / kDefaultPiTime;

enum class SegmentKind { kDrive, kDelay };

/// Piecewise-constant control interval. `phase` is the physical phase after
/// any frame offset has been applied.
struct PulseSegment {
  SegmentKind kind = SegmentKind::kDelay;
  double duration = 0.0;   ///< [s], > 0
  double amplitude = 0.0;  ///< omega_1 [rad/s], 0 for delays
  double phase = 0.0;      ///< [rad]

  static PulseSegment drive(double duration, double amplitude, double phase);
  static PulseSegment delay(double duration);
};

/// Timed control sequence with its intended action.
///
/// The physical propagator of the segments (ideal amplitudes, no noise) always
/// equals R_z(frame_shift) * ideal. A frame tracker absorbs the residual z
/// rotation by advancing its angle by -frame_shift after the schedule.
class PulseSchedule {
 public:
  PulseSchedule() = default;

  /// Validates segment invariants and the propagator identity above
  /// (phase-insensitively, within 1e-8).
  static PulseSchedule from_parts(std::vector<PulseSegment> segments,
                                  const Unitary2& ideal, double frame_shift);

  const std::vector<PulseSegment>& segments() const { return segments_; }
  const Unitary2& ideal() const { return ideal_; }
  Rotation ideal_rotation() const { return ideal_.rotation(); }
  double frame_shift() const { return frame_shift_; }

  double duration() const;
  /// Gate duration metadata: start of one gate to the start of the next.
  /// Defaults to duration() when not set explicitly.
  double period() const { return period_ ? *period_ : duration(); }
  void set_period(double period) { period_ = period; }

  std::size_t drive_count() const;
  /// Total nutation angle of all drive segments, in units of pi.
  double nutation_in_pi() const;

  /// Product of the segment propagators with amplitudes scaled by (1 + eps);
  /// no dephasing.
  Unitary2 physical_unitary(double eps = 0.0) const;

 private:
  friend class ScheduleBuilder;

  std::vector<PulseSegment> segments_;
  Unitary2 ideal_;
  double frame_shift_ = 0.0;
  std::optional<double> period_;
};

/// Appends pulses expressed in the logical frame, tracking virtual z rotations.
class ScheduleBuilder {
 public:
  explicit ScheduleBuilder(double omega1);

  /// Logical R_phi(theta) as one rectangular drive segment.
  ScheduleBuilder& pulse(double theta, double phi);
  ScheduleBuilder& delay(double duration);
  /// Logical R_z(angle) executed by re-defining the frame; emits nothing.
  ScheduleBuilder& virtual_z(double angle);
  /// Emits `s` under the current frame and absorbs its frame shift.
  ScheduleBuilder& append(const PulseSchedule& s);

  const PauliFrame& frame() const { return frame_; }
  double omega1() const { return omega1_; }
  double elapsed() const { return elapsed_; }

  PulseSchedule build() const;

 private:
  double omega1_;
  PauliFrame frame_;
  std::vector<PulseSegment> segments_;
  Unitary2 ideal_;
  double elapsed_ = 0.0;
};

PulseSchedule rectangular(double theta, double phi, double omega1);

/// beta = arccos(-theta / (4 pi)).
double bb1_beta(double theta);

/// R_phi(theta) followed by the correction block pi_{beta+phi}, 2pi_{3beta+phi},
/// pi_{beta+phi}. Requires 0 < theta <= 2 pi.
PulseSchedule bb1(double theta, double phi, double omega1);

struct SpreadOptions {
  /// Delay before each pi unit; defaults to twice the theta-pulse duration.
  std::optional<double> delay;
  /// Whether a delay also separates the theta pulse from the first pi unit.
  bool leading_delay = true;
};

/// BB1 with its correction block written as four pi units (the 2 pi pulse split
/// in two) separated by delays.
PulseSchedule bb1_spread(double theta, double phi, double omega1,
                         const SpreadOptions& options = {});

/// Five pi pulses at phases phi + {pi/6, 0, pi/2, 0, pi/6}. Ideal action
/// R_phi(pi); the pulses additionally rotate by -pi/3 about z, which is
/// reported as frame_shift.
PulseSchedule kdd5(double phi, double omega1);

enum class DdKind { kXY4, kXY8, kXY16 };
enum class PulseStyle { kRect, kBb1 };

/// Phases of the pi pulses in one cycle: XY-4 = X Y X Y, XY-8 adds the time
/// reverse, XY-16 adds the phase-inverted XY-8.
std::vector<double> dd_phases(DdKind kind);

/// [tau/2 P1 tau P2 ... Pn tau/2] with P_k pi pulses of the given style.
PulseSchedule dd_cycle(DdKind kind, PulseStyle style, double tau_delay, double omega1);

enum class SchemeId { kBareRect, kBareBb1, kSchemeA, kSchemeB, kSchemeC, kSchemeD, kSchemeE };

std::string_view to_string(SchemeId id);
/// Accepts the snake_case names (bare_rect, bare_bb1, scheme_a .. scheme_e).
SchemeId parse_scheme(std::string_view name);
std::span<const SchemeId, 7> all_schemes();

/// Layout parameters of the protected-gate schemes. The delay defaults
/// give these gate periods at the default amplitude calibration:
/// bare_rect 12, bare_bb1 76, a 88, b 116, c 152, d 336, e 384 us.
struct SchemeParams {
  double omega1 = kDefaultOmega1;
  /// Virtual gates (identity P, z rotations) occupy a delay of the physical
  /// gate length so that every gate has the same period.
  bool pad_virtual_gates = true;
  /// Scheme a: delay before each pi unit of the spread BB1 G gate.
  double scheme_a_delay = 3e-6;
  bool scheme_a_leading_delay = true;
  /// Scheme b: total delay around the decoupling pulse placed between G and P.
  double scheme_b_delay = 0.0;
  /// Scheme c: total delay around the decoupling pulse after P.
  double scheme_c_delay = 36e-6;
  /// Scheme d: pulse spacing of the XY-8 half cycle wrapped around each gate.
  double scheme_d_spacing = 24.5e-6;
  /// Scheme e: pulse spacing of the XY-16 cycle following each gate.
  double scheme_e_spacing = 11.25e-6;

  void validate() const;
};

/// How P and G steps are rendered physically for a scheme.
struct GateStyle {
  enum class P { kRect, kBb1, kKdd5 } p;
  enum class G { kRect, kBb1, kBb1Spread } g;
};
GateStyle gate_style(SchemeId scheme);

/// Emits one P or G step in `style` through the builder, padding virtual
/// steps with delays when `pad` is set.
void emit_p(ScheduleBuilder& b, const PGate& p, const GateStyle& style,
            const SchemeParams& params, bool pad);
void emit_g(ScheduleBuilder& b, const GGate& g, const GateStyle& style,
            const SchemeParams& params, bool pad);

/// Compiles the Clifford step C = P G (G first in time) for a scheme.
/// `gate_index` positions the step inside the decoupling cycle for schemes
/// b to e. The returned ideal action includes the decoupling pulses, which are
/// Paulis in the logical frame.
PulseSchedule compile_gate(const PGate& p, const GGate& g, SchemeId scheme,
                           const SchemeParams& params, std::size_t gate_index = 0);

/// Gate period tau of a scheme.
double gate_period(SchemeId scheme, const SchemeParams& params);

/// One line per segment: start_time, duration, amplitude, phase, kind.
void write_timing_table(std::ostream& os, const PulseSchedule& s);

}  // namespace rbsim
