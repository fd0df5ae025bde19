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

#include <cmath>
#include <numeric>
#include <vector>

#include "rbsim/errors.hpp"
#include "rbsim/noise.hpp"

namespace rbsim {
namespace {

double variance(const double* x, std::size_t n) {
  const double mean = std::accumulate(x, x + n, 0.0) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (x[i] - mean) * (x[i] - mean);
  return s / static_cast<double>(n - 1);
}

TEST(OuTrajectory, ZeroSigmaIsZero) {
  const auto t = ou_trajectory({0.0, 1e-3}, 1e-3, 1e-6, 5);
  ASSERT_EQ(t.samples.size(), 1000u);
  for (double b : t.samples) EXPECT_EQ(b, 0.0);
}

TEST(OuTrajectory, SameSeedIsBitIdentical) {
  const auto a = ou_trajectory({1e4, 1e-4}, 1e-3, 1e-7, 42);
  const auto b = ou_trajectory({1e4, 1e-4}, 1e-3, 1e-7, 42);
  EXPECT_EQ(a.samples, b.samples);
  const auto c = ou_trajectory({1e4, 1e-4}, 1e-3, 1e-7, 43);
  EXPECT_NE(a.samples, c.samples);
}

TEST(OuTrajectory, StreamMatchesTrajectory) {
  const OUParams p{3e3, 2e-4};
  const auto t = ou_trajectory(p, 1e-4, 1e-6, 9);
  OuProcess s(p, 1e-6, 9);
  for (double b : t.samples) EXPECT_EQ(b, s.next());
}

TEST(OuTrajectory, StationaryVariance) {
  const double sigma = 2.0;
  const auto t = ou_trajectory({sigma, 1.0}, 1e6, 1.0, 1);
  ASSERT_EQ(t.samples.size(), 1000000u);
  EXPECT_NEAR(variance(t.samples.data(), t.samples.size()) / (sigma * sigma), 1.0, 0.01);
  const std::size_t half = t.samples.size() / 2;
  const double v1 = variance(t.samples.data(), half);
  const double v2 = variance(t.samples.data() + half, half);
  EXPECT_NEAR(v1 / v2, 1.0, 0.02);
}

TEST(OuTrajectory, Autocorrelation) {
  const double tau_c = 1.0, dt = 0.2;
  const auto t = ou_trajectory({1.0, tau_c}, 1e6 * dt, dt, 2);
  const auto& x = t.samples;
  const double v = variance(x.data(), x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (std::size_t k = 1; k * dt <= 3.0 * tau_c + 1e-12; ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i + k < x.size(); ++i) c += (x[i] - mean) * (x[i + k] - mean);
    c /= static_cast<double>(x.size() - k) * v;
    EXPECT_NEAR(c, std::exp(-static_cast<double>(k) * dt / tau_c), 0.02) << "lag " << k;
  }
}

TEST(OuTrajectory, RejectsBadInput) {
  EXPECT_THROW(ou_trajectory({1.0, 1.0}, 1.0, 0.0, 1), InvalidInput);
  EXPECT_THROW(ou_trajectory({1.0, 1.0}, 0.0, 0.1, 1), InvalidInput);
  EXPECT_THROW(ou_trajectory({1.0, 1.0}, 0.05, 0.1, 1), InvalidInput);
  EXPECT_THROW(ou_trajectory({-1.0, 1.0}, 1.0, 0.1, 1), InvalidInput);
  EXPECT_THROW(ou_trajectory({1.0, 0.0}, 1.0, 0.1, 1), InvalidInput);
}

TEST(FidCoherence, StartsAtOne) { EXPECT_EQ(fid_coherence_analytic({5e3, 1e-4}, 0.0), 1.0); }

TEST(FidCoherence, GaussianShortTimeLimit) {
  const OUParams p{1e4, 1.0};
  for (double t : {1e-5, 5e-5, 1e-4, 2e-4}) {
    const double gauss = std::exp(-p.sigma * p.sigma * t * t / 2.0);
    EXPECT_NEAR(fid_coherence_analytic(p, t) / gauss, 1.0, 0.01) << t;
  }
}

TEST(FidCoherence, MonotoneNonIncreasing) {
  const OUParams p{4600.0, 3.5e-4};
  double prev = 1.0;
  for (int i = 1; i < 2000; ++i) {
    const double w = fid_coherence_analytic(p, i * 1e-6);
    EXPECT_LE(w, prev);
    prev = w;
  }
}

TEST(HahnCoherence, SlowerThanFid) {
  const OUParams p{4600.0, 3.5e-4};
  for (int i = 1; i < 100; ++i) {
    const double t = i * 2e-5;
    EXPECT_GE(hahn_coherence_analytic(p, t), fid_coherence_analytic(p, t));
  }
}

TEST(Calibrate, HitsTargets) {
  const OUParams p = calibrate(360e-6, 740e-6);
  EXPECT_NEAR(fid_decay_time_analytic(p), 360e-6, 360e-6 * 1e-9);
  EXPECT_NEAR(hahn_decay_time_analytic(p), 740e-6, 740e-6 * 1e-6);
  EXPECT_GT(p.sigma, 0.0);
  EXPECT_GT(p.tau_c, 0.0);
}

TEST(Calibrate, DoubledSigmaHalvesFidTimeForSlowNoise) {
  OUParams p{1.0 / 360e-6, 1.0};
  const double t1 = fid_decay_time_analytic(p);
  p.sigma *= 2.0;
  EXPECT_NEAR(fid_decay_time_analytic(p) / t1, 0.5, 0.025);
}

TEST(Calibrate, UnreachableRatioFails) {
  EXPECT_THROW(calibrate(360e-6, 360e-6), CalibrationFailure);
  EXPECT_THROW(calibrate(740e-6, 360e-6), CalibrationFailure);
  EXPECT_THROW(calibrate(0.0, 360e-6), InvalidInput);
  try {
    calibrate(360e-6, 360e-6);
  } catch (const CalibrationFailure& e) {
    EXPECT_NE(std::string(e.what()).find("best pair"), std::string::npos);
  }
}

TEST(SampleEpsilon, Models) {
  EXPECT_EQ(sample_epsilon(NoAmplitudeError{}, 1), 0.0);
  EXPECT_EQ(sample_epsilon(FixedAmplitudeError{0.05}, 1), 0.05);
  Rng rng(5);
  const double w = 0.1;
  for (int i = 0; i < 1000; ++i) {
    const double e = sample_epsilon(UniformAmplitudeError{w}, rng);
    EXPECT_GE(e, -w);
    EXPECT_LE(e, w);
  }
  EXPECT_THROW(sample_epsilon(GaussianAmplitudeError{-0.1}, 1), InvalidInput);
  EXPECT_THROW(sample_epsilon(UniformAmplitudeError{-0.1}, 1), InvalidInput);
}

TEST(SampleEpsilon, GaussianMean) {
  const double sigma = 0.05;
  const int n = 100000;
  Rng rng(17);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = sample_epsilon(GaussianAmplitudeError{sigma}, rng);
    sum += e;
    sum_sq += e * e;
  }
  EXPECT_LT(std::abs(sum / n), 3.0 * sigma / std::sqrt(n));
  EXPECT_NEAR(std::sqrt(sum_sq / n) / sigma, 1.0, 0.01);
}

TEST(Relaxation, Validation) {
  EXPECT_NO_THROW(RelaxationParams{}.validate());
  EXPECT_NO_THROW(RelaxationParams{1.52}.validate());
  EXPECT_THROW(RelaxationParams{0.0}.validate(), InvalidInput);
}

}  // namespace
}  // namespace rbsim
