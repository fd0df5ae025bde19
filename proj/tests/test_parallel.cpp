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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "rbsim/parallel.hpp"

namespace rbsim {
namespace {

TEST(ResolveWorkers, ExplicitRequestWins) {
  EXPECT_EQ(resolve_workers(3), 3u);
  EXPECT_EQ(resolve_workers(1), 1u);
}

TEST(ResolveWorkers, EnvironmentFallback) {
  ::setenv(kWorkersEnvVar, "5", 1);
  EXPECT_EQ(resolve_workers(0), 5u);
  EXPECT_EQ(resolve_workers(2), 2u);
  ::unsetenv(kWorkersEnvVar);
  EXPECT_GE(resolve_workers(0), 1u);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (unsigned workers : {1u, 2u, 7u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, PropagatesExceptions) {
  std::atomic<int> ran{0};
  EXPECT_THROW(parallel_for(100, 4,
                            [&](std::size_t i) {
                              ++ran;
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  EXPECT_GE(ran.load(), 1);
}

}  // namespace
}  // namespace rbsim
