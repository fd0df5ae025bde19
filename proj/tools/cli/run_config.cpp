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

#include "run_config.hpp"

#include <charconv>
#include <set>
#include <string>

#include "rbsim/analysis.hpp"
#include "units.hpp"

namespace rbsim::cli {
namespace {

using nlohmann::ordered_json;

std::string join(std::string_view a, std::string_view b) {
  return std::string(a) + "." + std::string(b);
}

void check_keys(const YAML::Node& node, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) throw ConfigError(where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where.empty() ? key : join(where, key), "unknown key");
  }
}

std::string scalar(const YAML::Node& n, std::string_view field) {
  if (!n.IsScalar()) throw ConfigError(field, "expected a scalar");
  return n.Scalar();
}

double time_of(const YAML::Node& n, std::string_view field) {
  return parse_quantity(scalar(n, field), Dimension::kTime, field);
}

double frequency_of(const YAML::Node& n, std::string_view field) {
  return parse_quantity(scalar(n, field), Dimension::kAngularFrequency, field);
}

double number_of(const YAML::Node& n, std::string_view field) {
  const std::string s = scalar(n, field);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ConfigError(field, "expected a plain number, got '" + s + "'");
  }
  return v;
}

std::uint64_t count_of(const YAML::Node& n, std::string_view field) {
  const std::string s = scalar(n, field);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ConfigError(field, "expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool bool_of(const YAML::Node& n, std::string_view field) {
  const std::string s = scalar(n, field);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError(field, "expected true or false, got '" + s + "'");
}

template <class F>
auto wrap(std::string_view field, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

std::vector<std::size_t> counts_of(const YAML::Node& n, std::string_view field) {
  if (n.IsScalar()) return parse_m_values(n.Scalar(), field);
  if (!n.IsSequence()) throw ConfigError(field, "expected a list or a range a..b");
  std::vector<std::size_t> out;
  for (const auto& v : n) out.push_back(count_of(v, field));
  return out;
}

std::vector<double> times_of(const YAML::Node& n, std::string_view field) {
  if (!n.IsSequence()) throw ConfigError(field, "expected a list of times");
  std::vector<double> out;
  for (const auto& v : n) out.push_back(time_of(v, field));
  return out;
}

DdKind parse_dd(std::string_view s, std::string_view field) {
  if (s == "xy4") return DdKind::kXY4;
  if (s == "xy8") return DdKind::kXY8;
  if (s == "xy16") return DdKind::kXY16;
  throw ConfigError(field, "expected xy4, xy8 or xy16");
}

std::string_view dd_name(DdKind k) {
  switch (k) {
    case DdKind::kXY4:
      return "xy4";
    case DdKind::kXY8:
      return "xy8";
    case DdKind::kXY16:
      return "xy16";
  }
  return "?";
}

CoherenceKind parse_kind(std::string_view s, std::string_view field) {
  if (s == "fid") return CoherenceKind::kFid;
  if (s == "hahn") return CoherenceKind::kHahn;
  if (s == "dd") return CoherenceKind::kDd;
  throw ConfigError(field, "expected fid, hahn or dd");
}

std::string_view kind_name(CoherenceKind k) {
  switch (k) {
    case CoherenceKind::kFid:
      return "fid";
    case CoherenceKind::kHahn:
      return "hahn";
    case CoherenceKind::kDd:
      return "dd";
  }
  return "?";
}

std::string_view noise_name(NoiseMode m) {
  switch (m) {
    case NoiseMode::kOff:
      return "off";
    case NoiseMode::kOu:
      return "ou";
    case NoiseMode::kCalibrated:
      return "calibrated";
  }
  return "?";
}

void apply_sim(RunConfig& rc, const YAML::Node& n) {
  check_keys(n, "sim", {"dt", "n_noise", "n_sequences", "m_values", "scheme", "normalize_to_m0"});
  if (n["dt"]) rc.sim.dt = time_of(n["dt"], "sim.dt");
  if (n["n_noise"]) rc.sim.n_noise = count_of(n["n_noise"], "sim.n_noise");
  if (n["n_sequences"]) rc.sim.n_sequences = count_of(n["n_sequences"], "sim.n_sequences");
  if (n["m_values"]) rc.sim.m_values = counts_of(n["m_values"], "sim.m_values");
  if (n["scheme"]) {
    rc.sim.scheme =
        wrap("sim.scheme", [&] { return parse_scheme(scalar(n["scheme"], "sim.scheme")); });
  }
  if (n["normalize_to_m0"]) {
    rc.sim.normalize_to_m0 = bool_of(n["normalize_to_m0"], "sim.normalize_to_m0");
  }
}

void apply_scheme_params(RunConfig& rc, const YAML::Node& n) {
  check_keys(n, "scheme_params",
             {"omega1", "pad_virtual_gates", "scheme_a_delay", "scheme_a_leading_delay",
              "scheme_b_delay", "scheme_c_delay", "scheme_d_spacing", "scheme_e_spacing"});
  auto& p = rc.sim.scheme_params;
  if (n["omega1"]) p.omega1 = frequency_of(n["omega1"], "scheme_params.omega1");
  if (n["pad_virtual_gates"]) {
    p.pad_virtual_gates = bool_of(n["pad_virtual_gates"], "scheme_params.pad_virtual_gates");
  }
  if (n["scheme_a_delay"]) p.scheme_a_delay = time_of(n["scheme_a_delay"], "scheme_params.scheme_a_delay");
  if (n["scheme_a_leading_delay"]) {
    p.scheme_a_leading_delay =
        bool_of(n["scheme_a_leading_delay"], "scheme_params.scheme_a_leading_delay");
  }
  if (n["scheme_b_delay"]) p.scheme_b_delay = time_of(n["scheme_b_delay"], "scheme_params.scheme_b_delay");
  if (n["scheme_c_delay"]) p.scheme_c_delay = time_of(n["scheme_c_delay"], "scheme_params.scheme_c_delay");
  if (n["scheme_d_spacing"]) {
    p.scheme_d_spacing = time_of(n["scheme_d_spacing"], "scheme_params.scheme_d_spacing");
  }
  if (n["scheme_e_spacing"]) {
    p.scheme_e_spacing = time_of(n["scheme_e_spacing"], "scheme_params.scheme_e_spacing");
  }
}

void apply_noise(RunConfig& rc, const YAML::Node& n) {
  check_keys(n, "noise", {"mode", "sigma", "tau_c", "t2_fid", "t2_hahn"});
  if (n["mode"]) {
    const std::string m = scalar(n["mode"], "noise.mode");
    if (m == "off") {
      rc.noise.mode = NoiseMode::kOff;
    } else if (m == "ou") {
      rc.noise.mode = NoiseMode::kOu;
    } else if (m == "calibrated") {
      rc.noise.mode = NoiseMode::kCalibrated;
    } else {
      throw ConfigError("noise.mode", "expected off, ou or calibrated");
    }
  }
  if (n["sigma"]) rc.noise.ou.sigma = frequency_of(n["sigma"], "noise.sigma");
  if (n["tau_c"]) rc.noise.ou.tau_c = time_of(n["tau_c"], "noise.tau_c");
  if (n["t2_fid"]) rc.noise.t2_fid = time_of(n["t2_fid"], "noise.t2_fid");
  if (n["t2_hahn"]) rc.noise.t2_hahn = time_of(n["t2_hahn"], "noise.t2_hahn");
}

void apply_amplitude(RunConfig& rc, const YAML::Node& n) {
  check_keys(n, "amplitude_error", {"model", "value"});
  std::string model = "none";
  if (n["model"]) model = scalar(n["model"], "amplitude_error.model");
  const bool has_value = static_cast<bool>(n["value"]);
  const double v = has_value ? number_of(n["value"], "amplitude_error.value") : 0.0;
  if (model != "none" && !has_value) throw ConfigError("amplitude_error.value", "required");
  if (model == "none") {
    rc.sim.eps_model = NoAmplitudeError{};
  } else if (model == "fixed") {
    rc.sim.eps_model = FixedAmplitudeError{v};
  } else if (model == "gaussian") {
    rc.sim.eps_model = GaussianAmplitudeError{v};
  } else if (model == "uniform") {
    rc.sim.eps_model = UniformAmplitudeError{v};
  } else {
    throw ConfigError("amplitude_error.model", "expected none, fixed, gaussian or uniform");
  }
  wrap("amplitude_error.value", [&] {
    validate(rc.sim.eps_model);
    return 0;
  });
}

void apply_relaxation(RunConfig& rc, const YAML::Node& n) {
  check_keys(n, "relaxation", {"t1"});
  if (!n["t1"]) return;
  if (n["t1"].IsScalar() && n["t1"].Scalar() == "off") {
    rc.sim.relaxation.t1.reset();
  } else {
    rc.sim.relaxation.t1 = time_of(n["t1"], "relaxation.t1");
  }
}

void apply_coherence(RunConfig& rc, const YAML::Node& n) {
  check_keys(n, "coherence", {"kind", "times", "sequence", "style", "tau_delay", "cycles"});
  auto& c = rc.coherence;
  if (n["kind"]) c.kind = parse_kind(scalar(n["kind"], "coherence.kind"), "coherence.kind");
  if (n["times"]) c.times = times_of(n["times"], "coherence.times");
  if (n["sequence"]) c.dd = parse_dd(scalar(n["sequence"], "coherence.sequence"), "coherence.sequence");
  if (n["style"]) {
    const std::string s = scalar(n["style"], "coherence.style");
    if (s == "rect") {
      c.style = PulseStyle::kRect;
    } else if (s == "bb1") {
      c.style = PulseStyle::kBb1;
    } else {
      throw ConfigError("coherence.style", "expected rect or bb1");
    }
  }
  if (n["tau_delay"]) c.tau_delay = time_of(n["tau_delay"], "coherence.tau_delay");
  if (n["cycles"]) c.cycles = counts_of(n["cycles"], "coherence.cycles");
}

void apply_accumulation(RunConfig& rc, const YAML::Node& n) {
  check_keys(n, "accumulation", {"epsilon", "cycles", "n_random", "tau_delay", "gate_scheme"});
  auto& a = rc.accumulation;
  if (n["epsilon"]) a.epsilon = number_of(n["epsilon"], "accumulation.epsilon");
  if (n["cycles"]) a.cycles = counts_of(n["cycles"], "accumulation.cycles");
  if (n["n_random"]) a.n_random = count_of(n["n_random"], "accumulation.n_random");
  if (n["tau_delay"]) a.tau_delay = time_of(n["tau_delay"], "accumulation.tau_delay");
  if (n["gate_scheme"]) {
    a.gate_scheme = wrap("accumulation.gate_scheme", [&] {
      return parse_scheme(scalar(n["gate_scheme"], "accumulation.gate_scheme"));
    });
  }
}

void validate_all(const RunConfig& rc) {
  wrap("sim", [&] {
    rc.sim.validate();
    return 0;
  });
  if (rc.noise.mode == NoiseMode::kOu) {
    wrap("noise", [&] {
      rc.noise.ou.validate();
      return 0;
    });
  }
  if (!(rc.noise.t2_fid > 0.0) || !(rc.noise.t2_hahn > rc.noise.t2_fid)) {
    throw ConfigError("noise.t2_hahn", "calibration needs 0 < t2_fid < t2_hahn");
  }
  if (!(rc.limit_t2_hahn > 0.0)) throw ConfigError("limits.t2_hahn", "must be > 0");
  if (!(rc.limit_t2_dd > 0.0)) throw ConfigError("limits.t2_dd", "must be > 0");
  if (rc.accumulation.n_random < 1) throw ConfigError("accumulation.n_random", "must be >= 1");
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kRb:
      return "rb";
    case Experiment::kCoherence:
      return "coherence";
    case Experiment::kCalibrate:
      return "calibrate";
    case Experiment::kTable1:
      return "table1";
    case Experiment::kFig2:
      return "fig2";
    case Experiment::kFig3:
      return "fig3";
    case Experiment::kFig4:
      return "fig4";
    case Experiment::kSchedule:
      return "schedule";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::kRb, Experiment::kCoherence, Experiment::kCalibrate,
                       Experiment::kTable1, Experiment::kFig2, Experiment::kFig3,
                       Experiment::kFig4, Experiment::kSchedule}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("experiment", "unknown experiment '" + std::string(name) + "'");
}

std::vector<std::size_t> parse_m_values(std::string_view text, std::string_view field) {
  std::vector<std::size_t> out;
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw ConfigError(field, "bad integer '" + std::string(s) + "'");
    }
    return v;
  };
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const std::size_t lo = number(text.substr(0, dots));
    const std::size_t hi = number(text.substr(dots + 2));
    if (lo > hi) throw ConfigError(field, "empty range");
    for (std::size_t m = lo; m <= hi; ++m) out.push_back(m);
    return out;
  }
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(number(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

std::string_view default_preset(Experiment e) {
  switch (e) {
    case Experiment::kTable1:
    case Experiment::kFig2:
    case Experiment::kFig4:
      return "paper-noise";
    case Experiment::kFig3:
      return "fig3";
    default:
      return "none";
  }
}

void apply_preset(RunConfig& rc, std::string_view name) {
  rc.preset = std::string(name);
  if (name == "none") return;
  if (name == "paper-noise" || name == "fig3") {
    rc.noise.mode = NoiseMode::kCalibrated;
    rc.noise.t2_fid = 360e-6;
    rc.noise.t2_hahn = 740e-6;
    rc.sim.relaxation.t1 = 1.52;
    rc.sim.n_sequences = 32;
    rc.sim.m_values = {1, 2, 4, 8, 16, 32, 64, 80};
    rc.sim.scheme_params.omega1 = kDefaultOmega1;
    rc.limit_t2_hahn = 760e-6;
    rc.limit_t2_dd = 50e-3;
    if (name == "fig3") rc.sim.eps_model = GaussianAmplitudeError{0.05};
    return;
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) +
                                  "' (expected none, paper-noise or fig3)");
}

void apply_node(RunConfig& rc, const YAML::Node& root) {
  if (!root || root.IsNull()) return;
  check_keys(root, "", {"experiment", "preset", "seed", "workers", "simulate", "sim",
                        "scheme_params", "noise", "amplitude_error", "relaxation", "coherence",
                        "accumulation", "limits", "schedule", "output"});
  if (root["seed"]) rc.sim.master_seed = count_of(root["seed"], "seed");
  if (root["workers"]) rc.sim.workers = static_cast<unsigned>(count_of(root["workers"], "workers"));
  if (root["simulate"]) rc.simulate = bool_of(root["simulate"], "simulate");
  if (root["sim"]) apply_sim(rc, root["sim"]);
  if (root["scheme_params"]) apply_scheme_params(rc, root["scheme_params"]);
  if (root["noise"]) apply_noise(rc, root["noise"]);
  if (root["amplitude_error"]) apply_amplitude(rc, root["amplitude_error"]);
  if (root["relaxation"]) apply_relaxation(rc, root["relaxation"]);
  if (root["coherence"]) apply_coherence(rc, root["coherence"]);
  if (root["accumulation"]) apply_accumulation(rc, root["accumulation"]);
  if (const auto n = root["limits"]) {
    check_keys(n, "limits", {"t2_hahn", "t2_dd"});
    if (n["t2_hahn"]) rc.limit_t2_hahn = time_of(n["t2_hahn"], "limits.t2_hahn");
    if (n["t2_dd"]) rc.limit_t2_dd = time_of(n["t2_dd"], "limits.t2_dd");
  }
  if (const auto n = root["schedule"]) {
    check_keys(n, "schedule", {"gate", "index"});
    if (n["gate"]) rc.gate = scalar(n["gate"], "schedule.gate");
    if (n["index"]) rc.gate_index = count_of(n["index"], "schedule.index");
  }
  if (const auto n = root["output"]) {
    check_keys(n, "output", {"table", "summary"});
    if (n["table"]) rc.table_path = scalar(n["table"], "output.table");
    if (n["summary"]) rc.summary_path = scalar(n["summary"], "output.summary");
  }
}

RunConfig build_config(Experiment experiment, const std::filesystem::path& config_file,
                       const YAML::Node& overrides) {
  YAML::Node file;
  if (!config_file.empty()) {
    try {
      file = YAML::LoadFile(config_file.string());
    } catch (const YAML::BadFile&) {
      throw IoError("cannot read config file " + config_file.string());
    } catch (const YAML::Exception& e) {
      throw ConfigError("<file>", e.what());
    }
  }
  if (file && file.IsMap() && file["experiment"]) {
    const auto named = parse_experiment(scalar(file["experiment"], "experiment"));
    if (named != experiment) {
      throw ConfigError("experiment", "file is for '" + std::string(to_string(named)) +
                                          "' but the command is '" +
                                          std::string(to_string(experiment)) + "'");
    }
  }

  RunConfig rc;
  rc.experiment = experiment;
  std::string preset(default_preset(experiment));
  if (file && file.IsMap() && file["preset"]) preset = scalar(file["preset"], "preset");
  if (overrides && overrides["preset"]) preset = scalar(overrides["preset"], "preset");
  apply_preset(rc, preset);
  apply_node(rc, file);
  apply_node(rc, overrides);

  if (rc.table_path.empty()) rc.table_path = std::string(to_string(experiment)) + ".csv";
  if (rc.summary_path.empty()) {
    rc.summary_path = std::string(to_string(experiment)) + "_summary.json";
  }
  validate_all(rc);
  return rc;
}

bool resolve_noise(RunConfig& rc) {
  bool calibrated = false;
  if (rc.noise.mode == NoiseMode::kCalibrated) {
    rc.noise.ou = calibrate(rc.noise.t2_fid, rc.noise.t2_hahn);
    rc.noise.mode = NoiseMode::kOu;
    calibrated = true;
  }
  if (rc.noise.mode == NoiseMode::kOu) {
    rc.sim.noise = rc.noise.ou;
  } else {
    rc.sim.noise.reset();
  }
  return calibrated;
}

ordered_json echo(const RunConfig& rc) {
  const auto t = [](double v) { return format_quantity(v, Dimension::kTime); };
  const auto f = [](double v) { return format_quantity(v, Dimension::kAngularFrequency); };
  ordered_json j;
  j["experiment"] = to_string(rc.experiment);
  j["preset"] = "none";  // everything a preset set is spelled out below
  j["seed"] = rc.sim.master_seed;
  j["workers"] = rc.sim.workers;
  j["simulate"] = rc.simulate;
  const auto& s = rc.sim;
  j["sim"] = {{"dt", t(s.dt)},
              {"n_noise", s.n_noise},
              {"n_sequences", s.n_sequences},
              {"m_values", s.m_values},
              {"scheme", to_string(s.scheme)},
              {"normalize_to_m0", s.normalize_to_m0}};
  const auto& p = s.scheme_params;
  j["scheme_params"] = {{"omega1", f(p.omega1)},
                        {"pad_virtual_gates", p.pad_virtual_gates},
                        {"scheme_a_delay", t(p.scheme_a_delay)},
                        {"scheme_a_leading_delay", p.scheme_a_leading_delay},
                        {"scheme_b_delay", t(p.scheme_b_delay)},
                        {"scheme_c_delay", t(p.scheme_c_delay)},
                        {"scheme_d_spacing", t(p.scheme_d_spacing)},
                        {"scheme_e_spacing", t(p.scheme_e_spacing)}};
  j["noise"] = {{"mode", noise_name(rc.noise.mode)},
                {"sigma", f(rc.noise.ou.sigma)},
                {"tau_c", t(rc.noise.ou.tau_c)},
                {"t2_fid", t(rc.noise.t2_fid)},
                {"t2_hahn", t(rc.noise.t2_hahn)}};
  ordered_json amp;
  std::visit(
      [&amp](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        char buf[32];
        auto num = [&buf](double v) {
          std::snprintf(buf, sizeof buf, "%.17g", v);
          return std::string(buf);
        };
        if constexpr (std::is_same_v<M, NoAmplitudeError>) {
          amp["model"] = "none";
        } else if constexpr (std::is_same_v<M, FixedAmplitudeError>) {
          amp = {{"model", "fixed"}, {"value", num(m.epsilon)}};
        } else if constexpr (std::is_same_v<M, GaussianAmplitudeError>) {
          amp = {{"model", "gaussian"}, {"value", num(m.sigma)}};
        } else {
          amp = {{"model", "uniform"}, {"value", num(m.half_width)}};
        }
      },
      s.eps_model);
  j["amplitude_error"] = amp;
  j["relaxation"] = {{"t1", s.relaxation.t1 ? t(*s.relaxation.t1) : std::string("off")}};
  ordered_json times = ordered_json::array();
  for (double x : rc.coherence.times) times.push_back(t(x));
  j["coherence"] = {{"kind", kind_name(rc.coherence.kind)},
                    {"times", times},
                    {"sequence", dd_name(rc.coherence.dd)},
                    {"style", rc.coherence.style == PulseStyle::kRect ? "rect" : "bb1"},
                    {"tau_delay", t(rc.coherence.tau_delay)},
                    {"cycles", rc.coherence.cycles}};
  char eps[32];
  std::snprintf(eps, sizeof eps, "%.17g", rc.accumulation.epsilon);
  j["accumulation"] = {{"epsilon", eps},
                       {"cycles", rc.accumulation.cycles},
                       {"n_random", rc.accumulation.n_random},
                       {"tau_delay", t(rc.accumulation.tau_delay)},
                       {"gate_scheme", to_string(rc.accumulation.gate_scheme)}};
  j["limits"] = {{"t2_hahn", t(rc.limit_t2_hahn)}, {"t2_dd", t(rc.limit_t2_dd)}};
  j["schedule"] = {{"gate", rc.gate}, {"index", rc.gate_index}};
  j["output"] = {{"table", rc.table_path.string()}, {"summary", rc.summary_path.string()}};
  return j;
}

}  // namespace rbsim::cli
