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

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "json.hpp"
#include "rbsim/engine.hpp"
#include "run_config.hpp"

namespace rbsim::cli {

/// Header `x,mean,stderr`, 10 significant digits.
void write_decay_table(const std::filesystem::path& path, const DecayCurve& curve);

/// "out/fig3.csv" + "bare_rect" -> "out/fig3_bare_rect.csv".
std::filesystem::path suffixed(const std::filesystem::path& path, std::string_view label);

/// Runs the experiment, writes its table(s) and the summary, prints a short
/// report to `log`. Returns the summary.
nlohmann::ordered_json run_experiment(RunConfig& rc, std::ostream& log);

}  // namespace rbsim::cli
