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

#include "rbsim/noise.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <type_traits>
#include <sstream>

#include "rbsim/errors.hpp"

namespace rbsim {

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) {
  // splitmix64 finalizer applied along the path.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(master);
  for (std::uint64_t p : path) h = mix(h ^ mix(p + 0x632be59bd9b4e019ULL));
  return h;
}

void OUParams::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidInput("OU sigma must be >= 0");
  }
  if (!(tau_c > 0.0) || !std::isfinite(tau_c)) {
    throw InvalidInput("OU tau_c must be > 0");
  }
}

OuProcess::OuProcess(const OUParams& params, double dt, std::uint64_t seed)
    : rng_(seed), sigma_(params.sigma) {
  params.validate();
  if (!(dt > 0.0)) throw InvalidInput("OU time step must be > 0");
  decay_ = std::exp(-dt / params.tau_c);
  kick_ = params.sigma * std::sqrt(-std::expm1(-2.0 * dt / params.tau_c));
}

double OuProcess::next() {
  if (sigma_ == 0.0) return 0.0;
  if (!started_) {
    started_ = true;
    current_ = sigma_ * normal_(rng_);
  } else {
    current_ = current_ * decay_ + kick_ * normal_(rng_);
  }
  return current_;
}

NoiseTrajectory ou_trajectory(const OUParams& params, double duration, double dt,
                              std::uint64_t seed) {
  if (!(dt > 0.0) || !(duration > 0.0)) {
    throw InvalidInput("trajectory duration and dt must be > 0");
  }
  if (duration < dt) throw InvalidInput("trajectory duration must be >= dt");
  const auto n = static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
  NoiseTrajectory traj;
  traj.dt = dt;
  traj.samples.resize(std::max<std::size_t>(n, 1));
  OuProcess process(params, dt, seed);
  for (double& b : traj.samples) b = process.next();
  return traj;
}

namespace {

// e^{-x} - 1 + x without cancellation at small x.
double fid_shape(double x) {
  if (x < 1e-3) return x * x * (0.5 - x / 6.0 + x * x / 24.0);
  return x + std::expm1(-x);
}

// x - 3 + 4 e^{-x/2} - e^{-x}.
double hahn_shape(double x) {
  if (x < 1e-2) {
    return x * x * x * (1.0 / 12.0 - x / 32.0 + x * x * 7.0 / 960.0);
  }
  return x - 3.0 + 4.0 * std::exp(-0.5 * x) - std::exp(-x);
}

double exponent(const OUParams& p, double t, double (*shape)(double)) {
  return p.sigma * p.sigma * p.tau_c * p.tau_c * shape(t / p.tau_c);
}

// Smallest t with exponent(t) = 1; the exponent is increasing in t.
double unit_exponent_time(const OUParams& p, double (*shape)(double)) {
  p.validate();
  if (p.sigma == 0.0) return std::numeric_limits<double>::infinity();
  double hi = p.tau_c;
  while (exponent(p, hi, shape) < 1.0) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (exponent(p, mid, shape) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double fid_coherence_analytic(const OUParams& params, double t) {
  params.validate();
  if (t < 0.0) throw InvalidInput("coherence time must be >= 0");
  return std::exp(-exponent(params, t, fid_shape));
}

double hahn_coherence_analytic(const OUParams& params, double t) {
  params.validate();
  if (t < 0.0) throw InvalidInput("coherence time must be >= 0");
  return std::exp(-exponent(params, t, hahn_shape));
}

double fid_decay_time_analytic(const OUParams& params) {
  return unit_exponent_time(params, fid_shape);
}

double hahn_decay_time_analytic(const OUParams& params) {
  return unit_exponent_time(params, hahn_shape);
}

OUParams calibrate(double t2_fid_target, double t2_hahn_target) {
  if (!(t2_fid_target > 0.0) || !(t2_hahn_target > 0.0)) {
    throw InvalidInput("calibration targets must be > 0");
  }
  // sigma is fixed by the FID target for every tau_c; tau_c then sets the
  // echo/FID ratio, which grows monotonically from 1 (fast noise) to
  // infinity (static noise).
  auto params_for = [&](double tau_c) {
    OUParams p;
    p.tau_c = tau_c;
    p.sigma = 1.0 / (tau_c * std::sqrt(fid_shape(t2_fid_target / tau_c)));
    return p;
  };
  auto ratio_for = [&](double tau_c) {
    return hahn_decay_time_analytic(params_for(tau_c)) / t2_fid_target;
  };
  const double target = t2_hahn_target / t2_fid_target;

  double lo = std::log(t2_fid_target * 1e-4);
  double hi = std::log(t2_fid_target * 1e4);
  const double r_lo = ratio_for(std::exp(lo));
  const double r_hi = ratio_for(std::exp(hi));
  if (!(target > r_lo) || !(target < r_hi)) {
    const OUParams best = params_for(std::exp(target <= r_lo ? lo : hi));
    std::ostringstream msg;
    msg << "cannot reach T2(hahn)/T2(fid) = " << target
        << " (reachable range " << r_lo << " .. " << r_hi
        << "); best pair sigma=" << best.sigma << " rad/s, tau_c=" << best.tau_c
        << " s gives fid=" << fid_decay_time_analytic(best)
        << " s, hahn=" << hahn_decay_time_analytic(best) << " s";
    throw CalibrationFailure(msg.str());
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ratio_for(std::exp(mid)) < target ? lo : hi) = mid;
  }
  return params_for(std::exp(0.5 * (lo + hi)));
}

void validate(const AmplitudeErrorModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FixedAmplitudeError>) {
          if (!std::isfinite(m.epsilon)) throw InvalidInput("epsilon must be finite");
        } else if constexpr (std::is_same_v<T, GaussianAmplitudeError>) {
          if (!(m.sigma >= 0.0)) throw InvalidInput("epsilon sigma must be >= 0");
        } else if constexpr (std::is_same_v<T, UniformAmplitudeError>) {
          if (!(m.half_width >= 0.0)) {
            throw InvalidInput("epsilon half-width must be >= 0");
          }
        }
      },
      model);
}

double sample_epsilon(const AmplitudeErrorModel& model, Rng& rng) {
  validate(model);
  return std::visit(
      [&rng](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NoAmplitudeError>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, FixedAmplitudeError>) {
          return m.epsilon;
        } else if constexpr (std::is_same_v<T, GaussianAmplitudeError>) {
          if (m.sigma == 0.0) return 0.0;
          return std::normal_distribution<double>(0.0, m.sigma)(rng);
        } else {
          if (m.half_width == 0.0) return 0.0;
          return std::uniform_real_distribution<double>(-m.half_width,
                                                        m.half_width)(rng);
        }
      },
      model);
}

double sample_epsilon(const AmplitudeErrorModel& model, std::uint64_t seed) {
  Rng rng(seed);
  return sample_epsilon(model, rng);
}

void RelaxationParams::validate() const {
  if (t1 && !(*t1 > 0.0)) throw InvalidInput("T1 must be > 0 when enabled");
}

}  // namespace rbsim
