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

#include "rbsim/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "rbsim/errors.hpp"

namespace rbsim {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::size_t kMaxIterations = 500;
constexpr double kRelativeTolerance = 1e-10;

using ModelFn = std::function<void(const VectorXd& p, const VectorXd& x, VectorXd& f, MatrixXd& j)>;
using ProjectFn = std::function<void(VectorXd& p)>;

struct Data {
  VectorXd x;
  VectorXd y;
  VectorXd sqrt_w;
  bool weighted = false;
};

Data to_data(const DecayCurve& curve, std::size_t min_points, const char* who) {
  const std::size_t n = curve.points.size();
  if (n < min_points) {
    throw InvalidInput(std::string(who) + " needs at least " + std::to_string(min_points) +
                       " points");
  }
  Data d;
  d.x.resize(static_cast<Eigen::Index>(n));
  d.y.resize(static_cast<Eigen::Index>(n));
  d.sqrt_w = VectorXd::Ones(static_cast<Eigen::Index>(n));
  bool all_positive = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = curve.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.mean)) {
      throw InvalidInput(std::string(who) + ": non-finite data point");
    }
    d.x[static_cast<Eigen::Index>(i)] = p.x;
    d.y[static_cast<Eigen::Index>(i)] = p.mean;
    if (!(p.std_error > 0.0) || !std::isfinite(p.std_error)) all_positive = false;
  }
  if (all_positive) {
    d.weighted = true;
    for (std::size_t i = 0; i < n; ++i) {
      d.sqrt_w[static_cast<Eigen::Index>(i)] = 1.0 / curve.points[i].std_error;
    }
  }
  return d;
}

struct LmOutcome {
  VectorXd p;
  double cost = 0.0;  ///< weighted sum of squares
  std::size_t iterations = 0;
  bool converged = false;
};

double weighted_cost(const ModelFn& model, const VectorXd& p, const Data& d) {
  VectorXd f(d.x.size());
  MatrixXd j(d.x.size(), p.size());
  model(p, d.x, f, j);
  const double c = (d.sqrt_w.array() * (d.y - f).array()).matrix().squaredNorm();
  return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

LmOutcome levenberg_marquardt(const ModelFn& model, const ProjectFn& project, VectorXd p,
                              const Data& d) {
  const Eigen::Index n = d.x.size();
  const Eigen::Index k = p.size();
  VectorXd f(n);
  MatrixXd j(n, k);
  double mu = 1e-3;
  LmOutcome out;
  project(p);
  double cost = weighted_cost(model, p, d);
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    out.iterations = it + 1;
    if (cost == 0.0) {
      out.converged = true;
      break;
    }
    model(p, d.x, f, j);
    const VectorXd r = d.sqrt_w.asDiagonal() * (d.y - f);
    const MatrixXd jw = d.sqrt_w.asDiagonal() * j;
    const MatrixXd h = jw.transpose() * jw;
    const VectorXd g = jw.transpose() * r;
    VectorXd diag = h.diagonal();
    const double floor = std::max(diag.maxCoeff(), 1.0) * 1e-12;
    diag = diag.cwiseMax(floor);

    bool accepted = false;
    while (!accepted) {
      MatrixXd a = h;
      a.diagonal() += mu * diag;
      VectorXd trial = p + a.ldlt().solve(g);
      project(trial);
      const double trial_cost = weighted_cost(model, trial, d);
      if (trial_cost < cost) {
        const double change = (trial - p).norm();
        const double scale = p.norm() + kRelativeTolerance;
        p = trial;
        cost = trial_cost;
        mu = std::max(mu / 3.0, 1e-15);
        accepted = true;
        if (change <= kRelativeTolerance * scale) out.converged = true;
      } else {
        mu *= 4.0;
        if (mu > 1e16) {
          // No descent direction left: numerically at the minimum.
          out.converged = true;
          break;
        }
      }
    }
    if (out.converged) break;
  }
  out.p = p;
  out.cost = cost;
  return out;
}

void finish(FitResult& fit, const ModelFn& model, const VectorXd& p, const Data& d,
            std::size_t free_params) {
  const Eigen::Index n = d.x.size();
  VectorXd f(n);
  MatrixXd j(n, p.size());
  model(p, d.x, f, j);
  fit.residual_norm = (d.y - f).norm();
  const double chi2 = (d.sqrt_w.array() * (d.y - f).array()).matrix().squaredNorm();
  const auto dof = static_cast<double>(n) - static_cast<double>(free_params);
  fit.reduced_chi2 = dof > 0.0 ? chi2 / dof : 0.0;
  const MatrixXd jw = d.sqrt_w.asDiagonal() * j;
  const MatrixXd cov =
      (jw.transpose() * jw).completeOrthogonalDecomposition().pseudoInverse() *
      (dof > 0.0 ? fit.reduced_chi2 : 1.0);
  fit.std_errors.assign(static_cast<std::size_t>(p.size()), 0.0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    fit.std_errors[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, cov(i, i)));
  }
  fit.weighted = d.weighted;
}

[[noreturn]] void fail(const char* who, const LmOutcome& o) {
  std::ostringstream os;
  os << who << " did not converge after " << o.iterations << " iterations; params [";
  for (Eigen::Index i = 0; i < o.p.size(); ++i) os << (i ? ", " : "") << o.p[i];
  os << "], cost " << o.cost;
  throw FitFailure(os.str());
}

// ln y = b0 + b1 u over points with y > 0. Returns false if fewer than two.
bool log_linear(const VectorXd& u, const VectorXd& y, double& b0, double& b1) {
  std::vector<std::array<double, 2>> pts;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] > 0.0) pts.push_back({u[i], std::log(y[i])});
  }
  if (pts.size() < 2) return false;
  double su = 0, sl = 0, suu = 0, sul = 0;
  for (const auto& [a, l] : pts) {
    su += a;
    sl += l;
    suu += a * a;
    sul += a * l;
  }
  const auto n = static_cast<double>(pts.size());
  const double den = n * suu - su * su;
  if (std::abs(den) < 1e-300) return false;
  b1 = (n * sul - su * sl) / den;
  b0 = (sl - b1 * su) / n;
  return true;
}

// A e^{-rate x}
void exponential_model(const VectorXd& p, const VectorXd& x, VectorXd& f, MatrixXd& j) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double e = std::exp(-p[1] * x[i]);
    f[i] = p[0] * e;
    j(i, 0) = e;
    j(i, 1) = -p[0] * x[i] * e;
  }
}

// A e^{-c x^k}; a = e^{-c}.
void stretched_model(const VectorXd& p, const VectorXd& x, VectorXd& f, MatrixXd& j) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xk = std::pow(x[i], p[2]);
    const double e = std::exp(-p[1] * xk);
    f[i] = p[0] * e;
    j(i, 0) = e;
    j(i, 1) = -p[0] * xk * e;
    if (j.cols() > 2) j(i, 2) = -p[0] * p[1] * xk * std::log(x[i]) * e;
  }
}

}  // namespace

std::string_view to_string(FitModel model) {
  switch (model) {
    case FitModel::kExponential:
      return "exponential";
    case FitModel::kStretched:
      return "stretched";
    case FitModel::kQuadratic:
      return "quadratic";
  }
  return "?";
}

FitResult fit_exponential(const DecayCurve& curve) {
  const Data d = to_data(curve, 3, "fit_exponential");
  VectorXd p(2);
  double b0 = 0.0, b1 = 0.0;
  if (log_linear(d.x, d.y, b0, b1)) {
    p << std::exp(b0), std::max(0.0, -b1);
  } else {
    p << d.y[0], 0.0;
  }
  const ProjectFn project = [](VectorXd& q) { q[1] = std::max(q[1], 0.0); };
  const LmOutcome o = levenberg_marquardt(exponential_model, project, p, d);
  if (!o.converged) fail("fit_exponential", o);

  FitResult fit;
  fit.model = FitModel::kExponential;
  fit.iterations = o.iterations;
  finish(fit, exponential_model, o.p, d, 2);
  fit.rate = o.p[1];
  fit.rate_error = fit.std_errors[1];
  const double survive = std::exp(-fit.rate);
  fit.params = {o.p[0], -std::expm1(-fit.rate)};
  fit.std_errors[1] = survive * fit.rate_error;
  return fit;
}

FitResult fit_stretched(const DecayCurve& curve, const StretchedOptions& options) {
  const bool fixed = options.fixed_k.has_value();
  if (fixed && !(*options.fixed_k > 0.0)) throw InvalidInput("fixed k must be > 0");
  const Data d = to_data(curve, fixed ? 3 : 4, "fit_stretched");
  for (Eigen::Index i = 0; i < d.x.size(); ++i) {
    if (!(d.x[i] > 0.0)) throw InvalidInput("fit_stretched needs x > 0");
  }

  const std::vector<double> starts =
      fixed ? std::vector<double>{*options.fixed_k} : std::vector<double>{0.25, 0.5, 0.75, 1.0};
  std::optional<LmOutcome> best;
  std::optional<LmOutcome> last_failure;
  for (double k0 : starts) {
    VectorXd u = d.x.array().pow(k0).matrix();
    double b0 = 0.0, b1 = 0.0;
    VectorXd p(fixed ? 2 : 3);
    if (log_linear(u, d.y, b0, b1)) {
      p[0] = std::exp(b0);
      p[1] = std::max(-b1, 1e-12);
    } else {
      p[0] = d.y[0];
      p[1] = 1e-12;
    }
    if (!fixed) p[2] = k0;
    const ModelFn model = [k0, fixed](const VectorXd& q, const VectorXd& x, VectorXd& f,
                                      MatrixXd& j) {
      if (!fixed) {
        stretched_model(q, x, f, j);
        return;
      }
      VectorXd full(3);
      full << q[0], q[1], k0;
      stretched_model(full, x, f, j);
    };
    const ProjectFn project = [fixed](VectorXd& q) {
      q[1] = std::max(q[1], 0.0);
      if (!fixed) q[2] = std::clamp(q[2], 1e-3, 10.0);
    };
    LmOutcome o = levenberg_marquardt(model, project, p, d);
    if (!o.converged) {
      last_failure = o;
      continue;
    }
    if (!best || o.cost < best->cost) best = o;
  }
  if (!best) fail("fit_stretched", *last_failure);

  FitResult fit;
  fit.model = FitModel::kStretched;
  fit.iterations = best->iterations;
  const double k = fixed ? *options.fixed_k : best->p[2];
  const ModelFn model = [k, fixed](const VectorXd& q, const VectorXd& x, VectorXd& f,
                                   MatrixXd& j) {
    VectorXd full(3);
    full << q[0], q[1], fixed ? k : q[2];
    stretched_model(full, x, f, j);
  };
  finish(fit, model, best->p, d, fixed ? 2 : 3);
  const double a = std::exp(-best->p[1]);
  fit.params = {best->p[0], a, k};
  const double k_err = fixed ? 0.0 : fit.std_errors[2];
  fit.std_errors = {fit.std_errors[0], a * fit.std_errors[1], k_err};
  return fit;
}

FitResult fit_quadratic(const DecayCurve& curve) {
  Data d = to_data(curve, 3, "fit_quadratic");
  d.sqrt_w.setOnes();
  d.weighted = false;
  const Eigen::Index n = d.x.size();
  MatrixXd v(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) v.row(i) << d.x[i] * d.x[i], d.x[i], 1.0;
  const VectorXd c = v.colPivHouseholderQr().solve(d.y);
  const ModelFn model = [](const VectorXd& q, const VectorXd& x, VectorXd& f, MatrixXd& j) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      f[i] = q[0] * x[i] * x[i] + q[1] * x[i] + q[2];
      j.row(i) << x[i] * x[i], x[i], 1.0;
    }
  };
  FitResult fit;
  fit.model = FitModel::kQuadratic;
  finish(fit, model, c, d, 3);
  fit.params = {c[0], c[1], c[2]};
  return fit;
}

Estimate epg_from_fit(const FitResult& fit) {
  if (fit.model != FitModel::kExponential || fit.params.size() != 2) {
    throw InvalidInput("EPG needs an exponential fit");
  }
  return {fit.params[1] / 2.0, fit.std_errors[1] / 2.0};
}

Estimate time_constant(const FitResult& fit) {
  if (fit.model != FitModel::kExponential) {
    throw InvalidInput("time constant needs an exponential fit");
  }
  if (!(fit.rate > 0.0)) throw FitFailure("fitted decay rate is zero");
  return {1.0 / fit.rate, fit.rate_error / (fit.rate * fit.rate)};
}

double epg_limit(double tau, double t2) {
  if (!(tau > 0.0) || !(t2 > 0.0) || !std::isfinite(tau) || !std::isfinite(t2)) {
    throw InvalidInput("epg_limit needs tau > 0 and t2 > 0");
  }
  return -std::expm1(-tau / t2) / 3.0;
}

double decay_time(const DecayCurve& curve, double level) {
  if (!(level > 0.0)) throw InvalidInput("decay level must be > 0");
  const auto& pts = curve.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].mean > level) continue;
    if (i == 0) throw FitFailure("curve starts below the decay level; extend the grid earlier");
    const auto& a = pts[i - 1];
    const auto& b = pts[i];
    if (!(b.mean > 0.0)) {
      return a.x + (b.x - a.x) * (a.mean - level) / (a.mean - b.mean);
    }
    const double la = std::log(a.mean), lb = std::log(b.mean), ll = std::log(level);
    return a.x + (b.x - a.x) * (la - ll) / (la - lb);
  }
  throw FitFailure("curve never falls to the decay level; extend the grid later");
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidInput("loglog_slope needs two equally sized series of >= 2 points");
  }
  VectorXd lx(static_cast<Eigen::Index>(xs.size()));
  VectorXd ly(lx.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw InvalidInput("loglog_slope needs positive data");
    lx[static_cast<Eigen::Index>(i)] = std::log(xs[i]);
    ly[static_cast<Eigen::Index>(i)] = std::log(ys[i]);
  }
  const double mx = lx.mean(), my = ly.mean();
  const double sxx = (lx.array() - mx).square().sum();
  if (!(sxx > 0.0)) throw InvalidInput("loglog_slope needs distinct x");
  return ((lx.array() - mx) * (ly.array() - my)).sum() / sxx;
}

}  // namespace rbsim
