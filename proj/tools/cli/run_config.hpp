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

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rbsim/engine.hpp"

namespace rbsim::cli {

enum class Experiment { kRb, kCoherence, kCalibrate, kTable1, kFig2, kFig3, kFig4, kSchedule };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

enum class NoiseMode { kOff, kOu, kCalibrated };

struct NoiseSetting {
  NoiseMode mode = NoiseMode::kOff;
  OUParams ou;               ///< used when mode is kOu
  double t2_fid = 360e-6;    ///< calibration targets
  double t2_hahn = 740e-6;
};

struct RunConfig {
  Experiment experiment = Experiment::kRb;
  std::string preset;
  SimConfig sim;  ///< sim.noise is filled by resolve_noise()
  NoiseSetting noise;
  CoherenceSpec coherence;
  AccumulationSpec accumulation;
  double limit_t2_hahn = 760e-6;  ///< T2 for the Hahn-echo EPG limit
  double limit_t2_dd = 50e-3;     ///< T2 for the decoupled EPG limit
  bool simulate = false;          ///< table1: add simulated EPG; calibrate: check closure
  std::string gate = "+X180*+X90";
  std::size_t gate_index = 0;
  std::filesystem::path table_path;
  std::filesystem::path summary_path;
};

/// Known presets: none, paper-noise, fig3.
void apply_preset(RunConfig& rc, std::string_view name);
std::string_view default_preset(Experiment e);

/// Applies a config tree. Unknown keys and malformed values throw ConfigError
/// naming the field.
void apply_node(RunConfig& rc, const YAML::Node& root);

/// Builds a config: experiment defaults, preset, file, then overrides.
/// `overrides` uses the file schema.
RunConfig build_config(Experiment experiment, const std::filesystem::path& config_file,
                       const YAML::Node& overrides);

/// Calibrates when requested and stores the resulting OU parameters in both
/// rc.noise (mode becomes ou) and rc.sim.noise. Returns true if it calibrated.
bool resolve_noise(RunConfig& rc);

/// Full resolved config in the file schema; loading it back reproduces the run.
nlohmann::ordered_json echo(const RunConfig& rc);

std::vector<std::size_t> parse_m_values(std::string_view text, std::string_view field);

}  // namespace rbsim::cli
