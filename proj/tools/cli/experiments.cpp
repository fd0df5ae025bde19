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

#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "rbsim/analysis.hpp"
#include "rbsim/clifford.hpp"
#include "rbsim/errors.hpp"
#include "units.hpp"

#ifndef RBSIM_VERSION
#define RBSIM_VERSION "unknown"
#endif

namespace rbsim::cli {
namespace {

using nlohmann::ordered_json;

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void close_checked(std::ofstream& os, const std::filesystem::path& path) {
  os.close();
  if (!os) throw IoError("failed writing " + path.string());
}

ordered_json fit_json(const FitResult& f) {
  static const char* const kNames[3][3] = {{"A", "d", ""}, {"A", "a", "k"}, {"c2", "c1", "c0"}};
  const auto model = static_cast<int>(f.model);
  ordered_json params, errors;
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    params[kNames[model][i]] = f.params[i];
    errors[kNames[model][i]] = f.std_errors[i];
  }
  ordered_json j{{"model", to_string(f.model)},
                 {"params", params},
                 {"std_errors", errors},
                 {"residual_norm", f.residual_norm},
                 {"reduced_chi2", f.reduced_chi2},
                 {"iterations", f.iterations},
                 {"weighted", f.weighted}};
  if (f.model == FitModel::kExponential) {
    j["rate"] = f.rate;
    j["rate_std_error"] = f.rate_error;
  }
  return j;
}

// Fits and limit comparisons for one RB curve.
ordered_json rb_summary(const DecayCurve& curve, const RunConfig& rc,
                        const std::filesystem::path& table) {
  ordered_json j{{"label", curve.label},
                 {"table", table.string()},
                 {"gate_period_s", curve.gate_period},
                 {"m0_reference", curve.reference ? ordered_json(*curve.reference) : ordered_json()}};
  const FitResult exp = fit_exponential(curve);
  j["fits"]["exponential"] = fit_json(exp);
  if (curve.points.size() >= 4) j["fits"]["stretched"] = fit_json(fit_stretched(curve));
  const Estimate epg = epg_from_fit(exp);
  const double lim_hahn = epg_limit(curve.gate_period, rc.limit_t2_hahn);
  const double lim_dd = epg_limit(curve.gate_period, rc.limit_t2_dd);
  j["epg"] = epg.value;
  j["epg_std_error"] = epg.std_error;
  j["epg_limit_hahn"] = lim_hahn;
  j["epg_limit_dd"] = lim_dd;
  j["below_hahn_limit"] = epg.value < lim_hahn;
  return j;
}

void report_rb(std::ostream& log, const ordered_json& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s tau %6.1f us  EPG %.3e +- %.1e  limit(T2 Hahn) %.3e",
                s["label"].get<std::string>().c_str(), s["gate_period_s"].get<double>() * 1e6,
                s["epg"].get<double>(), s["epg_std_error"].get<double>(),
                s["epg_limit_hahn"].get<double>());
  log << buf;
  if (s["fits"].contains("stretched")) {
    std::snprintf(buf, sizeof buf, "  k %.3f", s["fits"]["stretched"]["params"]["k"].get<double>());
    log << buf;
  }
  log << '\n';
}

DecayCurve run_rb_for(const RunConfig& rc, SchemeId scheme) {
  SimConfig cfg = rc.sim;
  cfg.scheme = scheme;
  return run_rb(cfg);
}

ordered_json run_rb_experiment(RunConfig& rc, std::ostream& log) {
  const DecayCurve curve = run_rb(rc.sim);
  write_decay_table(rc.table_path, curve);
  ordered_json s = rb_summary(curve, rc, rc.table_path);
  report_rb(log, s);
  return s;
}

void fill_coherence_defaults(CoherenceSpec& c) {
  if (c.kind == CoherenceKind::kDd) {
    if (c.cycles.empty()) c.cycles = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  } else if (c.times.empty()) {
    for (int i = 1; i <= 32; ++i) c.times.push_back(50e-6 * i);
  }
}

ordered_json coherence_summary(const DecayCurve& curve, const std::filesystem::path& table) {
  ordered_json j{{"label", curve.label}, {"table", table.string()}};
  try {
    j["decay_time_1e_s"] = decay_time(curve);
  } catch (const FitFailure&) {
    j["decay_time_1e_s"] = nullptr;
  }
  const FitResult exp = fit_exponential(curve);
  j["fits"]["exponential"] = fit_json(exp);
  if (exp.rate > 0.0) j["time_constant_s"] = time_constant(exp).value;
  return j;
}

ordered_json run_coherence_experiment(RunConfig& rc, std::ostream& log) {
  const DecayCurve curve = run_coherence(rc.coherence, rc.sim);
  write_decay_table(rc.table_path, curve);
  ordered_json s = coherence_summary(curve, rc.table_path);
  if (!s["decay_time_1e_s"].is_null()) {
    log << curve.label << " 1/e time " << s["decay_time_1e_s"].get<double>() * 1e6 << " us\n";
  } else {
    log << curve.label << " does not fall to 1/e within the grid\n";
  }
  return s;
}

ordered_json run_calibrate(RunConfig& rc, std::ostream& log) {
  const OUParams& p = rc.noise.ou;
  DecayCurve analytic;
  analytic.label = "fid_analytic";
  for (int i = 1; i <= 60; ++i) {
    const double t = rc.noise.t2_fid * 0.05 * i;
    analytic.points.push_back({t, fid_coherence_analytic(p, t), 0.0});
  }
  ordered_json s{{"fid_time_analytic_s", fid_decay_time_analytic(p)},
                 {"hahn_time_analytic_s", hahn_decay_time_analytic(p)}};
  log << "sigma " << p.sigma << " rad/s, tau_c " << p.tau_c * 1e6 << " us\n";
  if (rc.simulate) {
    const CoherenceTimes sim =
        simulate_coherence_times(p, rc.sim, rc.noise.t2_fid, rc.noise.t2_hahn);
    s["fid_time_simulated_s"] = sim.fid;
    s["hahn_time_simulated_s"] = sim.hahn;
    s["trajectories"] = rc.sim.n_noise;
    log << "simulated FID " << sim.fid * 1e6 << " us, Hahn " << sim.hahn * 1e6 << " us ("
        << rc.sim.n_noise << " trajectories)\n";
  }
  write_decay_table(rc.table_path, analytic);
  s["table"] = rc.table_path.string();
  return s;
}

ordered_json run_table1(RunConfig& rc, std::ostream& log) {
  static constexpr SchemeId kRows[] = {SchemeId::kBareBb1, SchemeId::kSchemeA,
                                       SchemeId::kSchemeB, SchemeId::kSchemeC,
                                       SchemeId::kSchemeD, SchemeId::kSchemeE};
  std::ofstream os = open_out(rc.table_path);
  os << "gate,tau,epg_m,epg_M";
  if (rc.simulate) os << ",epg_sim,epg_sim_stderr";
  os << '\n';
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %8s %10s %10s%s\n", "gate", "tau[us]", "EPG_m[1e-4]",
                "EPG_M[1e-4]", rc.simulate ? "  EPG_sim[1e-4]" : "");
  log << buf;
  ordered_json rows = ordered_json::array();
  for (SchemeId id : kRows) {
    const double tau = gate_period(id, rc.sim.scheme_params);
    const double lo = epg_limit(tau, rc.limit_t2_dd);
    const double hi = epg_limit(tau, rc.limit_t2_hahn);
    ordered_json row{{"gate", to_string(id)}, {"tau_s", tau}, {"epg_m", lo}, {"epg_M", hi}};
    std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g", std::string(to_string(id)).c_str(),
                  tau, lo, hi);
    os << buf;
    std::snprintf(buf, sizeof buf, "%-10s %8.0f %10.1f %10.1f", std::string(to_string(id)).c_str(),
                  tau * 1e6, lo * 1e4, hi * 1e4);
    log << buf;
    if (rc.simulate) {
      const DecayCurve curve = run_rb_for(rc, id);
      const Estimate epg = epg_from_fit(fit_exponential(curve));
      row["epg_sim"] = epg.value;
      row["epg_sim_std_error"] = epg.std_error;
      std::snprintf(buf, sizeof buf, ",%.10g,%.10g", epg.value, epg.std_error);
      os << buf;
      std::snprintf(buf, sizeof buf, "  %8.1f +- %.1f", epg.value * 1e4, epg.std_error * 1e4);
      log << buf;
    }
    os << '\n';
    log << '\n';
    rows.push_back(row);
  }
  close_checked(os, rc.table_path);
  return {{"table", rc.table_path.string()}, {"rows", rows}};
}

ordered_json run_fig2(RunConfig& rc, std::ostream& log) {
  ordered_json s = run_rb_experiment(rc, log);
  const double tau = gate_period(rc.sim.scheme, rc.sim.scheme_params);
  ordered_json theory = ordered_json::array();
  for (double t2 : {750e-6, 340e-6}) {
    const double epg = epg_limit(tau, t2);
    DecayCurve curve;
    curve.label = "dephasing";
    for (std::size_t m : rc.sim.m_values) {
      curve.points.push_back({static_cast<double>(m), std::pow(1.0 - 2.0 * epg, m), 0.0});
    }
    char label[32];
    std::snprintf(label, sizeof label, "t2_%.0fus", t2 * 1e6);
    const auto path = suffixed(rc.table_path, label);
    write_decay_table(path, curve);
    theory.push_back({{"t2_s", t2}, {"epg", epg}, {"table", path.string()}});
    std::snprintf(label, sizeof label, "%.1f%%", epg * 100.0);
    log << "pure dephasing T2 " << t2 * 1e6 << " us -> EPG " << label << '\n';
  }
  s["dephasing_predictions"] = theory;
  return s;
}

ordered_json run_fig3(RunConfig& rc, std::ostream& log) {
  ordered_json curves = ordered_json::array();
  for (SchemeId id :
       {SchemeId::kBareRect, SchemeId::kBareBb1, SchemeId::kSchemeA, SchemeId::kSchemeC}) {
    const DecayCurve curve = run_rb_for(rc, id);
    const auto path = suffixed(rc.table_path, to_string(id));
    write_decay_table(path, curve);
    curves.push_back(rb_summary(curve, rc, path));
    report_rb(log, curves.back());
  }
  return {{"curves", curves}};
}

ordered_json run_fig4(RunConfig& rc, std::ostream& log) {
  ordered_json s;
  const AccumulationResult acc = run_error_accumulation(rc.accumulation, rc.sim);
  const auto rep_path = suffixed(rc.table_path, "xy4_repeated");
  const auto rnd_path = suffixed(rc.table_path, "xy4_randomized");
  write_decay_table(rep_path, acc.repeated);
  write_decay_table(rnd_path, acc.randomized);
  const double rep_slope = loglog_slope(acc.repeated.xs(), acc.repeated.means());
  const double rnd_slope = loglog_slope(acc.randomized.xs(), acc.randomized.means());
  s["accumulation"] = {{"epsilon", rc.accumulation.epsilon},
                       {"repeated_table", rep_path.string()},
                       {"randomized_table", rnd_path.string()},
                       {"repeated_loglog_slope", rep_slope},
                       {"randomized_loglog_slope", rnd_slope}};
  log << "infidelity log-log slope: repeated XY-4 " << rep_slope << ", randomized " << rnd_slope
      << '\n';

  CoherenceSpec dd = rc.coherence;
  dd.kind = CoherenceKind::kDd;
  if (dd.cycles.empty()) dd.cycles = {16, 32, 64, 128, 256, 512, 1024};
  ordered_json dd_json = ordered_json::array();
  for (DdKind kind : {DdKind::kXY4, DdKind::kXY16}) {
    dd.dd = kind;
    if (kind == DdKind::kXY16) {
      for (auto& n : dd.cycles) n = std::max<std::size_t>(1, n / 4);
    }
    const DecayCurve curve = run_coherence(dd, rc.sim);
    const auto path = suffixed(rc.table_path, curve.label);
    write_decay_table(path, curve);
    ordered_json j = coherence_summary(curve, path);
    j["fits"]["quadratic"] = fit_json(fit_quadratic(curve));
    if (j.contains("time_constant_s")) {
      log << curve.label << " exponential time constant "
          << j["time_constant_s"].get<double>() * 1e3 << " ms\n";
    }
    dd_json.push_back(j);
  }
  s["pure_dd"] = dd_json;
  return s;
}

ordered_json run_schedule(RunConfig& rc, std::ostream& log) {
  const auto star = rc.gate.find('*');
  if (star == std::string::npos) throw ConfigError("schedule.gate", "expected P*G, e.g. +X180*-Y90");
  PGate p;
  GGate g;
  try {
    p = parse_pgate(rc.gate.substr(0, star));
    g = parse_ggate(rc.gate.substr(star + 1));
  } catch (const std::exception& e) {
    throw ConfigError("schedule.gate", e.what());
  }
  const PulseSchedule sched =
      compile_gate(p, g, rc.sim.scheme, rc.sim.scheme_params, rc.gate_index);
  std::ofstream os = open_out(rc.table_path);
  write_timing_table(os, sched);
  close_checked(os, rc.table_path);
  log << to_string(rc.sim.scheme) << ' ' << rc.gate << ": " << sched.segments().size()
      << " segments, " << sched.duration() * 1e6 << " us, period " << sched.period() * 1e6
      << " us\n";
  return {{"table", rc.table_path.string()},
          {"segments", sched.segments().size()},
          {"duration_s", sched.duration()},
          {"period_s", sched.period()},
          {"frame_shift_rad", sched.frame_shift()},
          {"drive_count", sched.drive_count()}};
}

}  // namespace

void write_decay_table(const std::filesystem::path& path, const DecayCurve& curve) {
  std::ofstream os = open_out(path);
  os << "x,mean,stderr\n";
  char buf[96];
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", p.x, p.mean, p.std_error);
    os << buf;
  }
  close_checked(os, path);
}

std::filesystem::path suffixed(const std::filesystem::path& path, std::string_view label) {
  std::filesystem::path out = path;
  out.replace_filename(path.stem().string() + "_" + std::string(label) +
                       path.extension().string());
  return out;
}

ordered_json run_experiment(RunConfig& rc, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  if (rc.experiment == Experiment::kCoherence) fill_coherence_defaults(rc.coherence);
  const bool calibrated = resolve_noise(rc);
  if (rc.experiment == Experiment::kCalibrate && !calibrated) {
    // calibrate always solves for the targets, whatever the noise mode says
    rc.noise.mode = NoiseMode::kCalibrated;
    resolve_noise(rc);
  }
  if (rc.experiment == Experiment::kFig2) rc.sim.scheme = SchemeId::kBareBb1;

  ordered_json summary;
  summary["experiment"] = to_string(rc.experiment);
  summary["version"] = RBSIM_VERSION;
  summary["master_seed"] = rc.sim.master_seed;
  summary["config"] = echo(rc);
  if (rc.sim.noise) {
    summary["noise"] = {{"calibrated", calibrated || rc.experiment == Experiment::kCalibrate},
                        {"sigma_rad_s", rc.sim.noise->sigma},
                        {"tau_c_s", rc.sim.noise->tau_c},
                        {"t2_fid_target_s", rc.noise.t2_fid},
                        {"t2_hahn_target_s", rc.noise.t2_hahn}};
  } else {
    summary["noise"] = nullptr;
  }

  ordered_json results;
  switch (rc.experiment) {
    case Experiment::kRb:
      results = run_rb_experiment(rc, log);
      break;
    case Experiment::kCoherence:
      results = run_coherence_experiment(rc, log);
      break;
    case Experiment::kCalibrate:
      results = run_calibrate(rc, log);
      break;
    case Experiment::kTable1:
      results = run_table1(rc, log);
      break;
    case Experiment::kFig2:
      results = run_fig2(rc, log);
      break;
    case Experiment::kFig3:
      results = run_fig3(rc, log);
      break;
    case Experiment::kFig4:
      results = run_fig4(rc, log);
      break;
    case Experiment::kSchedule:
      results = run_schedule(rc, log);
      break;
  }
  summary["results"] = results;
  summary["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream os = open_out(rc.summary_path);
  os << summary.dump(2) << '\n';
  close_checked(os, rc.summary_path);
  return summary;
}

}  // namespace rbsim::cli
