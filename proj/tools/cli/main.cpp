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

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "rbsim/errors.hpp"
#include "run_config.hpp"
#include "units.hpp"

namespace {

using rbsim::cli::Experiment;

constexpr int kExitConfig = 1;
constexpr int kExitNumerics = 2;
constexpr int kExitIo = 3;

struct Flags {
  std::string config;
  std::string preset;
  std::string scheme;
  std::string m_values;
  std::string noise;
  std::string eps;
  std::string t1;
  std::string dt;
  std::string table;
  std::string summary;
  std::string kind;
  std::string sequence;
  std::string cycles;
  std::string gate;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::size_t> n_sequences;
  std::optional<std::size_t> n_noise;
  std::optional<std::size_t> index;
  bool simulate = false;
};

// Flags become an override tree in the config-file schema so both share one
// validation path.
YAML::Node overrides_from(const Flags& f) {
  YAML::Node n;
  if (!f.preset.empty()) n["preset"] = f.preset;
  if (!f.scheme.empty()) n["sim"]["scheme"] = f.scheme;
  if (!f.m_values.empty()) n["sim"]["m_values"] = f.m_values;
  if (!f.dt.empty()) n["sim"]["dt"] = f.dt;
  if (f.n_sequences) n["sim"]["n_sequences"] = std::to_string(*f.n_sequences);
  if (f.n_noise) n["sim"]["n_noise"] = std::to_string(*f.n_noise);
  if (f.seed) n["seed"] = std::to_string(*f.seed);
  if (f.workers) n["workers"] = std::to_string(*f.workers);
  if (f.simulate) n["simulate"] = "true";
  if (!f.noise.empty()) {
    // off | calibrated | ou:<sigma>,<tau_c>
    if (f.noise.rfind("ou:", 0) == 0) {
      const std::string rest = f.noise.substr(3);
      const auto comma = rest.find(',');
      if (comma == std::string::npos) {
        throw rbsim::cli::ConfigError("--noise", "expected ou:<sigma>,<tau_c>");
      }
      n["noise"]["mode"] = "ou";
      n["noise"]["sigma"] = rest.substr(0, comma);
      n["noise"]["tau_c"] = rest.substr(comma + 1);
    } else {
      n["noise"]["mode"] = f.noise;
    }
  }
  if (!f.eps.empty()) {
    // none | fixed:x | gaussian:x | uniform:x
    const auto colon = f.eps.find(':');
    n["amplitude_error"]["model"] = f.eps.substr(0, colon);
    if (colon != std::string::npos) n["amplitude_error"]["value"] = f.eps.substr(colon + 1);
  }
  if (!f.t1.empty()) n["relaxation"]["t1"] = f.t1;
  if (!f.kind.empty()) n["coherence"]["kind"] = f.kind;
  if (!f.sequence.empty()) n["coherence"]["sequence"] = f.sequence;
  if (!f.cycles.empty()) n["coherence"]["cycles"] = f.cycles;
  if (!f.gate.empty()) n["schedule"]["gate"] = f.gate;
  if (f.index) n["schedule"]["index"] = std::to_string(*f.index);
  if (!f.table.empty()) n["output"]["table"] = f.table;
  if (!f.summary.empty()) n["output"]["summary"] = f.summary;
  return n;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("-c,--config", f.config, "YAML config file");
  cmd->add_option("--preset", f.preset, "none | paper-noise | fig3");
  cmd->add_option("--scheme", f.scheme, "bare_rect | bare_bb1 | scheme_a ... scheme_e");
  cmd->add_option("--m-values", f.m_values, "sequence lengths: a..b or a,b,c");
  cmd->add_option("--noise", f.noise, "off | calibrated | ou:<sigma>,<tau_c>");
  cmd->add_option("--eps", f.eps, "none | fixed:x | gaussian:x | uniform:x");
  cmd->add_option("--t1", f.t1, "T1 with unit, or off");
  cmd->add_option("--dt", f.dt, "integration step with unit");
  cmd->add_option("--n-sequences", f.n_sequences, "random sequences per length");
  cmd->add_option("--n-noise", f.n_noise, "noise trajectories per sequence");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--workers", f.workers, "worker threads (0: default)");
  cmd->add_option("--table", f.table, "decay table output path");
  cmd->add_option("--summary", f.summary, "JSON summary output path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized benchmarking of noise-protected single-qubit gates"};
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::pair<Experiment, std::string>> commands{
      {"rb", {Experiment::kRb, "randomized benchmarking decay for one scheme"}},
      {"coherence", {Experiment::kCoherence, "FID, Hahn echo or pure DD decay"}},
      {"calibrate", {Experiment::kCalibrate, "fit OU noise to FID and Hahn times"}},
      {"table1", {Experiment::kTable1, "gate periods and dephasing EPG limits"}},
      {"fig2", {Experiment::kFig2, "BB1 decay with pure-dephasing predictions"}},
      {"fig3", {Experiment::kFig3, "rect, BB1, scheme a and scheme c decays"}},
      {"fig4", {Experiment::kFig4, "error accumulation and pure DD decays"}},
      {"schedule", {Experiment::kSchedule, "timing table of one compiled gate"}},
  };
  std::map<CLI::App*, Experiment> by_app;
  for (const auto& [name, entry] : commands) {
    CLI::App* cmd = app.add_subcommand(name, entry.second);
    add_common(cmd, flags);
    by_app[cmd] = entry.first;
    switch (entry.first) {
      case Experiment::kCoherence:
        cmd->add_option("--kind", flags.kind, "fid | hahn | dd");
        cmd->add_option("--sequence", flags.sequence, "xy4 | xy8 | xy16");
        cmd->add_option("--cycles", flags.cycles, "dd cycle counts: a..b or a,b,c");
        break;
      case Experiment::kCalibrate:
        cmd->add_flag("--simulate", flags.simulate, "check closure by simulation");
        break;
      case Experiment::kTable1:
        cmd->add_flag("--simulate", flags.simulate, "add simulated EPG column");
        break;
      case Experiment::kSchedule:
        cmd->add_option("--gate", flags.gate, "P*G, e.g. +X180*-Y90");
        cmd->add_option("--index", flags.index, "gate position in the sequence");
        break;
      default:
        break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  Experiment experiment = Experiment::kRb;
  for (const auto& [cmd, e] : by_app) {
    if (cmd->parsed()) experiment = e;
  }

  try {
    rbsim::cli::RunConfig rc =
        rbsim::cli::build_config(experiment, flags.config, overrides_from(flags));
    rbsim::cli::run_experiment(rc, std::cout);
    std::cout << "summary: " << rc.summary_path.string() << '\n';
    return EXIT_SUCCESS;
  } catch (const rbsim::cli::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const rbsim::CalibrationFailure& e) {
    std::cerr << "calibration failed: " << e.what() << '\n';
    return kExitNumerics;
  } catch (const rbsim::FitFailure& e) {
    std::cerr << "fit failed: " << e.what() << '\n';
    return kExitNumerics;
  } catch (const rbsim::InvalidInput& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const YAML::Exception& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  }
}
