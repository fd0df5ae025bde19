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

#include "rbsim/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "rbsim/analysis.hpp"
#include "rbsim/errors.hpp"
#include "rbsim/parallel.hpp"
#include "rbsim/random.hpp"
#include "rbsim/rb_sequence.hpp"

namespace rbsim {
namespace {

// Seed-tree roots; each experiment type draws from its own subtree.
enum StreamRoot : std::uint64_t {
  kSequenceStream = 1,
  kShotStream = 2,
  kCoherenceStream = 3,
  kAccumulationStream = 4,
};

struct TrajectorySource {
  const NoiseTrajectory& traj;
  double at(std::size_t k) const { return traj.samples[k]; }
};

class StreamSource {
 public:
  StreamSource(const OUParams& p, double dt, std::uint64_t seed) : process_(p, dt, seed) {}
  double at(std::size_t k) {
    while (produced_ <= k) {
      current_ = process_.next();
      ++produced_;
    }
    return current_;
  }

 private:
  OuProcess process_;
  std::size_t produced_ = 0;
  double current_ = 0.0;
};

struct ZeroSource {
  double at(std::size_t) const { return 0.0; }
};

inline void damp(Vec3& r, double elapsed, double t1) {
  const double f = std::exp(-elapsed / t1);
  const double s = std::sqrt(f);
  r.x() *= s;
  r.y() *= s;
  r.z() = r.z() * f + (1.0 - f);
}

inline void rotate_z(Vec3& r, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double x = r.x() * c - r.y() * s;
  r.y() = r.x() * s + r.y() * c;
  r.x() = x;
}

// Walks segments on the noise grid. `t` is the absolute time of the schedule
// start on that grid.
template <class Source>
Vec3 integrate(Vec3 r, std::span<const PulseSegment> segments, Source& noise, double dt,
               double eps, const std::optional<double>& t1, double t) {
  const double tiny = 1e-9 * dt;
  for (const PulseSegment& seg : segments) {
    const double t_end = t + seg.duration;
    const bool drive = seg.kind == SegmentKind::kDrive && seg.amplitude > 0.0;
    const double ox = drive ? seg.amplitude * (1.0 + eps) * std::cos(seg.phase) : 0.0;
    const double oy = drive ? seg.amplitude * (1.0 + eps) * std::sin(seg.phase) : 0.0;
    double z_phase = 0.0;
    while (t_end - t > tiny) {
      auto k = static_cast<std::size_t>(t / dt);
      double next = static_cast<double>(k + 1) * dt;
      if (next - t <= tiny) {
        ++k;
        next += dt;
      }
      const double stop = std::min(next, t_end);
      const double h = stop - t;
      const double b = noise.at(k);
      if (drive) {
        const double norm = std::sqrt(ox * ox + oy * oy + b * b);
        const double angle = norm * h;
        if (angle > 0.0) {
          const Vec3 axis(ox / norm, oy / norm, b / norm);
          r = rotate_vector(r, axis, std::cos(angle), std::sin(angle));
        }
        if (t1) damp(r, h, *t1);
      } else {
        z_phase += b * h;
      }
      t = stop;
    }
    if (!drive) {
      // Free evolution commutes with amplitude damping about z.
      rotate_z(r, z_phase);
      if (t1) damp(r, seg.duration, *t1);
    }
    t = t_end;
  }
  return r;
}

Vec3 integrate_exact(Vec3 r, std::span<const PulseSegment> segments, double eps) {
  for (const PulseSegment& seg : segments) {
    if (seg.kind != SegmentKind::kDrive || seg.amplitude == 0.0) continue;
    const double angle = seg.amplitude * (1.0 + eps) * seg.duration;
    const Vec3 axis(std::cos(seg.phase), std::sin(seg.phase), 0.0);
    r = rotate_vector(r, axis, std::cos(angle), std::sin(angle));
  }
  return r;
}

QubitState to_state(Vec3 r) {
  // Long products can drift a few ulps past the sphere.
  const double n = r.norm();
  if (n > 1.0) r /= n;
  return QubitState(r);
}

// One shot: noise and epsilon drawn from `shot_seed`.
Vec3 run_shot(const Vec3& r0, const PulseSchedule& sched, const SimConfig& cfg,
              std::uint64_t shot_seed) {
  Rng rng(shot_seed);
  const double eps = sample_epsilon(cfg.eps_model, rng);
  const std::uint64_t noise_seed = rng();
  const auto& segs = sched.segments();
  if (cfg.noise) {
    StreamSource src(*cfg.noise, cfg.dt, noise_seed);
    return integrate(r0, segs, src, cfg.dt, eps, cfg.relaxation.t1, 0.0);
  }
  if (cfg.relaxation.t1) {
    ZeroSource src;
    return integrate(r0, segs, src, cfg.dt, eps, cfg.relaxation.t1, 0.0);
  }
  return integrate_exact(r0, segs, eps);
}

void check_resolution(const PulseSchedule& sched, double dt) {
  for (const auto& seg : sched.segments()) {
    if (seg.duration < 10.0 * dt * (1.0 - 1e-9)) {
      throw InvalidInput("dt must be at most 1/10 of the shortest segment (" +
                         std::to_string(seg.duration) + " s)");
    }
  }
}

// Welford accumulator; merge() combines partial results in a fixed order.
struct Moments {
  std::size_t n = 0;
  double mean_ = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(n);
    m2 += delta * (v - mean_);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const std::size_t total = n + o.n;
    const double delta = o.mean_ - mean_;
    mean_ += delta * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) /
                     static_cast<double>(total);
    n = total;
  }
  double mean() const { return mean_; }
  double std_error() const {
    if (n < 2) return 0.0;
    const double var = m2 / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
  }
};

const std::array<Vec3, 6>& cardinal_states() {
  static const std::array<Vec3, 6> states{Vec3::UnitX(),  -Vec3::UnitX(), Vec3::UnitY(),
                                          -Vec3::UnitY(), Vec3::UnitZ(),  -Vec3::UnitZ()};
  return states;
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be > 0");
  if (n_noise < 1) throw InvalidInput("n_noise must be >= 1");
  if (n_sequences < 1) throw InvalidInput("n_sequences must be >= 1");
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (m_values[i] < 1) throw InvalidInput("m_values must be >= 1");
    if (i > 0 && m_values[i] <= m_values[i - 1]) {
      throw InvalidInput("m_values must be strictly increasing");
    }
  }
  scheme_params.validate();
  if (noise) noise->validate();
  rbsim::validate(eps_model);
  relaxation.validate();
}

std::vector<double> DecayCurve::xs() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.x);
  return v;
}

std::vector<double> DecayCurve::means() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.mean);
  return v;
}

std::vector<double> DecayCurve::std_errors() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.std_error);
  return v;
}

QubitState propagate(const QubitState& state, const PulseSchedule& sched,
                     const NoiseTrajectory& traj, double eps,
                     const RelaxationParams& relaxation) {
  relaxation.validate();
  if (!(traj.dt > 0.0)) throw InvalidInput("trajectory dt must be > 0");
  if (traj.duration() < sched.duration() - 1e-9 * traj.dt) {
    throw InvalidInput("noise trajectory is shorter than the schedule");
  }
  TrajectorySource src{traj};
  return to_state(integrate(state.bloch(), sched.segments(), src, traj.dt, eps,
                            relaxation.t1, 0.0));
}

QubitState propagate(const QubitState& state, const PulseSchedule& sched, double eps,
                     const RelaxationParams& relaxation, double dt) {
  relaxation.validate();
  if (relaxation.t1) {
    if (!(dt > 0.0)) throw InvalidInput("dt must be > 0");
    ZeroSource src;
    return to_state(
        integrate(state.bloch(), sched.segments(), src, dt, eps, relaxation.t1, 0.0));
  }
  return to_state(integrate_exact(state.bloch(), sched.segments(), eps));
}

DecayCurve run_rb(const SimConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> ms;
  if (cfg.normalize_to_m0) ms.push_back(0);
  ms.insert(ms.end(), cfg.m_values.begin(), cfg.m_values.end());

  const std::size_t n_seq = cfg.n_sequences;
  std::vector<Moments> per_task(ms.size() * n_seq);
  parallel_for(per_task.size(), cfg.workers, [&](std::size_t task) {
    const std::size_t m = ms[task / n_seq];
    const std::size_t s = task % n_seq;
    Rng seq_rng = make_stream(cfg.master_seed, {kSequenceStream, m, s});
    const RBSequence seq = sample_rb_sequence(m, seq_rng);
    const CompiledSequence compiled = compile_sequence(seq, cfg.scheme, cfg.scheme_params);
    check_resolution(compiled.program, cfg.dt);
    Moments acc;
    for (std::size_t j = 0; j < cfg.n_noise; ++j) {
      const std::uint64_t shot = derive_seed(cfg.master_seed, {kShotStream, m, s, j});
      const Vec3 r = run_shot(Vec3::UnitZ(), compiled.program, cfg, shot);
      acc.add(compiled.readout_sign * r.z());
    }
    per_task[task] = acc;
  });

  DecayCurve curve;
  curve.gate_period = gate_period(cfg.scheme, cfg.scheme_params);
  curve.label = std::string(to_string(cfg.scheme));
  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    Moments across_sequences;
    Moments all_shots;
    for (std::size_t s = 0; s < n_seq; ++s) {
      const Moments& t = per_task[mi * n_seq + s];
      across_sequences.add(t.mean());
      all_shots.merge(t);
    }
    DecayPoint p;
    p.x = static_cast<double>(ms[mi]);
    p.mean = across_sequences.mean();
    p.std_error = n_seq >= 2 ? across_sequences.std_error() : all_shots.std_error();
    curve.points.push_back(p);
  }
  if (cfg.normalize_to_m0) {
    const double ref = curve.points.front().mean;
    if (!(ref > 1e-6)) {
      throw InvalidInput("m = 0 reference survival is not positive; disable normalization");
    }
    curve.reference = ref;
    curve.points.erase(curve.points.begin());
    for (auto& p : curve.points) {
      p.mean /= ref;
      p.std_error /= ref;
    }
  }
  return curve;
}

namespace {

void require_increasing(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw InvalidInput(std::string(what) + " must not be empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || (i > 0 && v[i] <= v[i - 1])) {
      throw InvalidInput(std::string(what) + " must be positive and strictly increasing");
    }
  }
}

// FID from one streamed trajectory, sampled at every requested time.
std::vector<double> fid_shot(const std::vector<double>& times, const SimConfig& cfg,
                             std::uint64_t noise_seed) {
  std::vector<double> out;
  out.reserve(times.size());
  double phase = 0.0;
  double t = 0.0;
  const double dt = cfg.dt;
  if (!cfg.noise) {
    for (double target : times) {
      Vec3 r = Vec3::UnitX();
      if (cfg.relaxation.t1) damp(r, target, *cfg.relaxation.t1);
      out.push_back(r.x());
    }
    return out;
  }
  StreamSource src(*cfg.noise, dt, noise_seed);
  const double tiny = 1e-9 * dt;
  for (double target : times) {
    while (target - t > tiny) {
      auto k = static_cast<std::size_t>(t / dt);
      double next = static_cast<double>(k + 1) * dt;
      if (next - t <= tiny) {
        ++k;
        next += dt;
      }
      const double stop = std::min(next, target);
      phase += src.at(k) * (stop - t);
      t = stop;
    }
    t = target;
    Vec3 r = Vec3::UnitX();
    rotate_z(r, phase);
    if (cfg.relaxation.t1) damp(r, target, *cfg.relaxation.t1);
    out.push_back(r.x());
  }
  return out;
}

PulseSchedule hahn_schedule(double total, double omega1) {
  const double t_pi = kPi / omega1;
  if (!(total > t_pi)) {
    throw InvalidInput("Hahn echo time must exceed the refocusing pulse length");
  }
  const double half = 0.5 * (total - t_pi);
  return ScheduleBuilder(omega1).delay(half).pulse(kPi, 0.0).delay(half).build();
}

PulseSchedule repeated(const PulseSchedule& cycle, std::size_t n, double omega1) {
  ScheduleBuilder b(omega1);
  for (std::size_t i = 0; i < n; ++i) b.append(cycle);
  return b.build();
}

}  // namespace

DecayCurve run_coherence(const CoherenceSpec& spec, const SimConfig& cfg) {
  cfg.validate();
  const double omega1 = cfg.scheme_params.omega1;
  std::vector<double> xs;
  std::vector<PulseSchedule> schedules;
  DecayCurve curve;
  switch (spec.kind) {
    case CoherenceKind::kFid:
      require_increasing(spec.times, "coherence times");
      xs = spec.times;
      curve.label = "fid";
      break;
    case CoherenceKind::kHahn:
      require_increasing(spec.times, "coherence times");
      xs = spec.times;
      for (double t : xs) schedules.push_back(hahn_schedule(t, omega1));
      curve.label = "hahn";
      break;
    case CoherenceKind::kDd: {
      if (spec.cycles.empty()) throw InvalidInput("dd cycles must not be empty");
      const PulseSchedule cycle = dd_cycle(spec.dd, spec.style, spec.tau_delay, omega1);
      std::size_t prev = 0;
      for (std::size_t n : spec.cycles) {
        if (n <= prev) throw InvalidInput("dd cycles must be strictly increasing and >= 1");
        prev = n;
        schedules.push_back(repeated(cycle, n, omega1));
        xs.push_back(schedules.back().duration());
      }
      curve.label = spec.dd == DdKind::kXY4 ? "dd_xy4" : spec.dd == DdKind::kXY8 ? "dd_xy8" : "dd_xy16";
      break;
    }
  }
  for (const auto& s : schedules) check_resolution(s, cfg.dt);

  std::vector<std::vector<double>> per_shot(cfg.n_noise);
  parallel_for(cfg.n_noise, cfg.workers, [&](std::size_t j) {
    const std::uint64_t shot = derive_seed(cfg.master_seed, {kCoherenceStream, j});
    if (spec.kind == CoherenceKind::kFid) {
      // Same draw order as run_shot so shot j sees the same noise in every kind.
      Rng rng(shot);
      (void)sample_epsilon(cfg.eps_model, rng);
      per_shot[j] = fid_shot(xs, cfg, rng());
      return;
    }
    std::vector<double> values;
    values.reserve(schedules.size());
    for (const auto& s : schedules) {
      values.push_back(run_shot(Vec3::UnitX(), s, cfg, shot).x());
    }
    per_shot[j] = std::move(values);
  });

  for (std::size_t i = 0; i < xs.size(); ++i) {
    Moments m;
    for (const auto& shot : per_shot) m.add(shot[i]);
    curve.points.push_back({xs[i], m.mean(), m.std_error()});
  }
  return curve;
}

CoherenceTimes simulate_coherence_times(const OUParams& params, const SimConfig& cfg,
                                        double fid_guess, double hahn_guess,
                                        std::size_t grid_points) {
  if (grid_points < 3) throw InvalidInput("grid_points must be >= 3");
  SimConfig c = cfg;
  c.noise = params;
  auto grid = [grid_points](double guess) {
    std::vector<double> t;
    for (std::size_t i = 0; i < grid_points; ++i) {
      t.push_back(guess * (0.5 + static_cast<double>(i) / static_cast<double>(grid_points - 1)));
    }
    return t;
  };
  CoherenceSpec fid;
  fid.kind = CoherenceKind::kFid;
  fid.times = grid(fid_guess);
  CoherenceSpec hahn;
  hahn.kind = CoherenceKind::kHahn;
  hahn.times = grid(hahn_guess);
  CoherenceTimes out;
  out.fid = decay_time(run_coherence(fid, c));
  out.hahn = decay_time(run_coherence(hahn, c));
  return out;
}

double schedule_infidelity(const PulseSchedule& sched, double eps) {
  const Mat3 ideal = Rotation::about_z(sched.frame_shift()).so3() * sched.ideal().so3();
  double loss = 0.0;
  for (const Vec3& r0 : cardinal_states()) {
    loss += 1.0 - trace_fidelity(to_state(ideal * r0),
                                 to_state(integrate_exact(r0, sched.segments(), eps)));
  }
  return loss / static_cast<double>(cardinal_states().size());
}

double schedule_infidelity(const PulseSchedule& sched, double eps, const QubitState& input) {
  const Mat3 ideal = Rotation::about_z(sched.frame_shift()).so3() * sched.ideal().so3();
  const Vec3& r0 = input.bloch();
  const Vec3 actual = integrate_exact(r0, sched.segments(), eps);
  return 1.0 - trace_fidelity(to_state(ideal * r0), to_state(actual));
}

AccumulationResult run_error_accumulation(const AccumulationSpec& spec,
                                          const SimConfig& cfg) {
  cfg.validate();
  if (spec.cycles.empty() || spec.n_random < 1) {
    throw InvalidInput("accumulation needs cycle counts and >= 1 random sequence");
  }
  const double omega1 = cfg.scheme_params.omega1;
  const PulseSchedule xy4 = dd_cycle(DdKind::kXY4, PulseStyle::kRect, spec.tau_delay, omega1);

  AccumulationResult out;
  out.repeated.label = "xy4_repeated";
  out.randomized.label = "xy4_randomized";
  for (std::size_t n : spec.cycles) {
    out.repeated.points.push_back(
        {static_cast<double>(n), schedule_infidelity(repeated(xy4, n, omega1), spec.epsilon),
         0.0});
  }

  const std::size_t n_rand = spec.n_random;
  std::vector<double> values(spec.cycles.size() * n_rand);
  parallel_for(values.size(), cfg.workers, [&](std::size_t task) {
    const std::size_t n = spec.cycles[task / n_rand];
    const std::size_t r = task % n_rand;
    Rng rng = make_stream(cfg.master_seed, {kAccumulationStream, n, r});
    std::uniform_int_distribution<int> pick(0, 47);
    ScheduleBuilder b(omega1);
    for (std::size_t k = 0; k < n; ++k) {
      b.append(xy4);
      const int pg = pick(rng);
      b.append(compile_gate(PGate::all()[pg / 6], GGate::all()[pg % 6], spec.gate_scheme,
                            cfg.scheme_params, k));
    }
    values[task] = schedule_infidelity(b.build(), spec.epsilon);
  });
  for (std::size_t i = 0; i < spec.cycles.size(); ++i) {
    Moments m;
    for (std::size_t r = 0; r < n_rand; ++r) m.add(values[i * n_rand + r]);
    out.randomized.points.push_back({static_cast<double>(spec.cycles[i]), m.mean(), m.std_error()});
  }
  return out;
}

}  // namespace rbsim
