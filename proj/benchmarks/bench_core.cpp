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

#include <benchmark/benchmark.h>

#include <cmath>

#include "rbsim/analysis.hpp"
#include "rbsim/clifford.hpp"
#include "rbsim/engine.hpp"
#include "rbsim/noise.hpp"
#include "rbsim/rb_sequence.hpp"

namespace {

using namespace rbsim;

const OUParams kNoise = calibrate(360e-6, 740e-6);

void BM_OuTrajectory(benchmark::State& state) {
  const double duration = static_cast<double>(state.range(0)) * 1e-6;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ou_trajectory(kNoise, duration, 1e-7, seed++));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(duration / 1e-7));
}
BENCHMARK(BM_OuTrajectory)->Arg(100)->Arg(1000)->Arg(10000);

void BM_CliffordCompose(benchmark::State& state) {
  const auto all = CliffordElement::all();
  std::size_t i = 0;
  CliffordElement acc;
  for (auto _ : state) {
    acc = compose(all[i++ % 24], acc);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_CliffordCompose);

void BM_PropagateNoisy(benchmark::State& state) {
  Rng rng(1);
  const RBSequence seq = sample_rb_sequence(static_cast<std::size_t>(state.range(0)), rng);
  const CompiledSequence c = compile_sequence(seq, SchemeId::kBareBb1, SchemeParams{});
  const NoiseTrajectory traj = ou_trajectory(kNoise, c.program.duration(), 1e-7, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(QubitState(), c.program, traj, 0.01));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(traj.samples.size()));
}
BENCHMARK(BM_PropagateNoisy)->Arg(8)->Arg(80);

void BM_PropagateExact(benchmark::State& state) {
  Rng rng(1);
  const RBSequence seq = sample_rb_sequence(80, rng);
  const CompiledSequence c = compile_sequence(seq, SchemeId::kSchemeC, SchemeParams{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(QubitState(), c.program, 0.01));
  }
}
BENCHMARK(BM_PropagateExact);

DecayCurve synthetic_curve() {
  DecayCurve c;
  for (double m : {1, 2, 4, 8, 16, 32, 64, 80}) {
    c.points.push_back({m, 0.98 * std::pow(0.9, std::pow(m, 0.6)), 0.003});
  }
  return c;
}

void BM_FitExponential(benchmark::State& state) {
  const DecayCurve c = synthetic_curve();
  for (auto _ : state) benchmark::DoNotOptimize(fit_exponential(c));
}
BENCHMARK(BM_FitExponential);

void BM_FitStretched(benchmark::State& state) {
  const DecayCurve c = synthetic_curve();
  for (auto _ : state) benchmark::DoNotOptimize(fit_stretched(c));
}
BENCHMARK(BM_FitStretched);

}  // namespace
BENCHMARK_MAIN();
