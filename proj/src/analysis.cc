// Copyright 2026 The polybrud Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polybrud/analysis.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "polybrud/error.h"
#include "polybrud/learner.h"

namespace polybrud {
namespace {

constexpr double kNewtonTolerance = 1e-12;
constexpr int kNewtonMaxIterations = 200;

double Horner(std::span<const double> coeffs, double t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// Coefficients of d/dt E[R(t, other)] for one agent, lowest power first,
// trailing zeros removed. `own_x` selects agent x (the other agent's moments
// are then moments_y).
std::vector<double> FieldPolynomial(const Polynomial2& poly,
                                    const DatasetStats& stats, bool own_x) {
  const int own_degree = own_x ? poly.degree_x() : poly.degree_y();
  const int other_degree = own_x ? poly.degree_y() : poly.degree_x();
  const std::vector<double>& other = own_x ? stats.moments_y : stats.moments_x;
  if (static_cast<int>(other.size()) <= other_degree) {
    Fail(ErrorCode::kInsufficientMoments,
         "dataset moments do not reach the polynomial degree");
  }
  std::vector<double> e(static_cast<std::size_t>(own_degree) + 1, 0.0);
  for (int i = 0; i <= own_degree; ++i) {
    for (int j = 0; j <= other_degree; ++j) {
      e[i] += (own_x ? poly.coeff(i, j) : poly.coeff(j, i)) * other[j];
    }
  }
  std::vector<double> d;
  for (std::size_t i = 1; i < e.size(); ++i) {
    d.push_back(static_cast<double>(i) * e[i]);
  }
  while (!d.empty() && d.back() == 0.0) d.pop_back();
  return d;
}

// Damped Newton on a univariate polynomial from several starting points.
std::optional<double> NewtonRoot(const std::vector<double>& f) {
  std::vector<double> df;
  for (std::size_t i = 1; i < f.size(); ++i) {
    df.push_back(static_cast<double>(i) * f[i]);
  }
  double scale = 0.0;
  for (double c : f) scale = std::max(scale, std::abs(c));

  for (double start : std::array{0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0}) {
    double t = start;
    double ft = Horner(f, t);
    for (int it = 0; it < kNewtonMaxIterations; ++it) {
      if (std::abs(ft) <= kNewtonTolerance * scale) return t;
      const double slope = Horner(df, t);
      if (slope == 0.0 || !std::isfinite(slope)) break;
      const double step = -ft / slope;
      double lambda = 1.0;
      double next = t + step;
      double fnext = Horner(f, next);
      for (int halvings = 0;
           halvings < 40 && !(std::abs(fnext) < std::abs(ft)); ++halvings) {
        lambda *= 0.5;
        next = t + lambda * step;
        fnext = Horner(f, next);
      }
      if (!(std::abs(fnext) < std::abs(ft))) {
        // No descent: accept a converged step, otherwise try the next start.
        if (std::abs(step) <= kNewtonTolerance * (1.0 + std::abs(t))) return t;
        break;
      }
      const bool tiny = std::abs(next - t) <= kNewtonTolerance * (1.0 + std::abs(t));
      t = next;
      ft = fnext;
      if (tiny) return t;
    }
  }
  return std::nullopt;
}

std::function<Gradient(double, double)> FieldFunction(Polynomial2 poly,
                                                      DatasetStats stats) {
  return [poly = std::move(poly), stats = std::move(stats)](double x, double y) {
    return BrudField(poly, stats, x, y);
  };
}

}  // namespace

Gradient BrudField(const Polynomial2& poly, const DatasetStats& stats,
                   double theta_x, double theta_y) {
  return BrudGradientExact(poly, JointPolicy{theta_x, theta_y, 0}, stats);
}

std::string_view FixedPointClassName(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::kUniqueFixedPoint: return "unique_fixed_point";
    case FixedPointClass::kNoFiniteFixedPoint: return "no_finite_fixed_point";
    case FixedPointClass::kLineOfFixedPoints: return "line_of_fixed_points";
    case FixedPointClass::kConstantField: return "constant_field";
  }
  return "unknown";
}

FixedPointReport SolveFixedPointNumerically(const Polynomial2& poly,
                                            const DatasetStats& stats) {
  FixedPointReport report;
  report.field_at = FieldFunction(poly, stats);
  const std::vector<double> fx = FieldPolynomial(poly, stats, true);
  const std::vector<double> fy = FieldPolynomial(poly, stats, false);
  const bool x_zero = fx.empty();
  const bool y_zero = fy.empty();
  const bool x_const = fx.size() <= 1;
  const bool y_const = fy.size() <= 1;

  if (x_const && y_const) {
    report.classification = FixedPointClass::kConstantField;
    report.degenerate = x_zero && y_zero;
    return report;
  }
  if ((x_const && !x_zero) || (y_const && !y_zero)) {
    report.classification = FixedPointClass::kNoFiniteFixedPoint;
    return report;
  }
  const std::optional<double> rx = x_zero ? std::optional<double>(0.0) : NewtonRoot(fx);
  const std::optional<double> ry = y_zero ? std::optional<double>(0.0) : NewtonRoot(fy);
  if (!rx || !ry) {
    Fail(ErrorCode::kUnsupported,
         "fixed-point solver did not converge for this game and dataset");
  }
  if (x_zero || y_zero) {
    report.classification = FixedPointClass::kLineOfFixedPoints;
    return report;
  }
  report.classification = FixedPointClass::kUniqueFixedPoint;
  report.point = std::make_pair(*rx, *ry);
  return report;
}

FixedPointReport BrudFixedPoint(const GameSpec& spec, const DatasetStats& stats) {
  const Polynomial2 poly = BuildGame(spec);
  if (stats.moments_x.size() < 3 || stats.moments_y.size() < 3) {
    Fail(ErrorCode::kInsufficientMoments, "stats need moments up to power 2");
  }
  FixedPointReport report;
  switch (spec.kind) {
    case GameKind::kDecoupled:
      report.classification = FixedPointClass::kConstantField;
      break;
    case GameKind::kSignAgreement:
      if (stats.mean_x == 0.0 && stats.mean_y == 0.0) {
        report.classification = FixedPointClass::kConstantField;
        report.degenerate = true;
      } else {
        report.classification = FixedPointClass::kNoFiniteFixedPoint;
      }
      break;
    case GameKind::kActionAgreement:
      report.classification = FixedPointClass::kUniqueFixedPoint;
      report.point = std::make_pair(stats.mean_y, stats.mean_x);
      break;
    case GameKind::kTwinPeaks: {
      const TwinPeaksParams& p = spec.twin_peaks;
      // m^2 + sigma^2 is the raw second moment.
      const double x = p.c * stats.mean_y / (2.0 * p.a + 2.0 * p.b * stats.moments_y[2]);
      const double y = p.c * stats.mean_x / (2.0 * p.a + 2.0 * p.b * stats.moments_x[2]);
      report.classification = FixedPointClass::kUniqueFixedPoint;
      report.point = std::make_pair(x, y);
      break;
    }
    case GameKind::kCustom:
      return SolveFixedPointNumerically(poly, stats);
  }
  report.field_at = FieldFunction(poly, stats);
  return report;
}

double TwinPeaksConvergedPolicy(const TwinPeaksParams& p, double other_mean,
                                double other_var) {
  ValidateTwinPeaks(p);
  return p.c * other_mean /
         (2.0 * p.a + 2.0 * p.b * (other_mean * other_mean + other_var));
}

std::pair<double, double> TrueOptimaTwinPeaks(const TwinPeaksParams& p) {
  ValidateTwinPeaks(p);
  const double t = std::sqrt((p.c - 2.0 * p.a) / (2.0 * p.b));

  const Polynomial2 poly = BuildGame(GameSpec::TwinPeaks(p.a, p.b, p.c));
  const Polynomial2 dxx = poly.PartialX().PartialX();
  const Polynomial2 dxy = poly.PartialX().PartialY();
  const Polynomial2 dyy = poly.PartialY().PartialY();
  const double tol = 1e-9 * std::max({1.0, p.a, p.b, p.c});
  for (double s : {t, -t}) {
    const Gradient g = poly.TrueGradient(s, s);
    const double hxx = dxx.Eval(s, s);
    const double hxy = dxy.Eval(s, s);
    const double hyy = dyy.Eval(s, s);
    if (std::abs(g.x) > tol || std::abs(g.y) > tol || !(hxx < 0.0) ||
        !(hxx * hyy - hxy * hxy > 0.0)) {
      Fail(ErrorCode::kInternal, "twin peaks optimum failed verification");
    }
  }
  return {t, -t};
}

std::optional<SigmaRoots> SigmaCondition(const TwinPeaksParams& p, double mean) {
  ValidateTwinPeaks(p);
  const double k = p.c / std::sqrt(2.0 * p.b * (p.c - 2.0 * p.a));
  const double base = -mean * mean - p.a / p.b;
  const double tol = 1e-12 * (mean * mean + std::abs(k * mean) + p.a / p.b);
  auto root = [tol](double radicand) -> std::optional<double> {
    if (radicand < -tol || std::isnan(radicand)) return std::nullopt;
    // Round-off near the optimum would otherwise surface as sqrt(eps).
    if (radicand <= tol) return 0.0;
    return std::sqrt(radicand);
  };
  SigmaRoots roots{root(base + k * mean), root(base - k * mean)};
  if (!roots.plus && !roots.minus) return std::nullopt;
  return roots;
}

}  // namespace polybrud
