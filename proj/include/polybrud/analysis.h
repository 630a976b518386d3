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

#ifndef POLYBRUD_ANALYSIS_H_
#define POLYBRUD_ANALYSIS_H_

#include <functional>
#include <optional>
#include <string_view>
#include <utility>

#include "polybrud/datasets.h"
#include "polybrud/polygame.h"
#include "polybrud/types.h"

namespace polybrud {

// Closed-form oracles for offline BRUD dynamics on polynomial games.

// Exact BRUD objective field grad J at a policy point, from dataset moments.
// Shares its implementation with BrudGradientExact.
Gradient BrudField(const Polynomial2& poly, const DatasetStats& stats,
                   double theta_x, double theta_y);

enum class FixedPointClass {
  kUniqueFixedPoint,
  kNoFiniteFixedPoint,
  kLineOfFixedPoints,
  kConstantField,
};

std::string_view FixedPointClassName(FixedPointClass c);

struct FixedPointReport {
  FixedPointClass classification = FixedPointClass::kNoFiniteFixedPoint;
  std::optional<std::pair<double, double>> point;  // iff kUniqueFixedPoint
  // Set when the field vanishes identically (every policy is stationary).
  bool degenerate = false;
  std::function<Gradient(double, double)> field_at;
};

// Named games use their closed forms; Custom games are solved numerically
// per agent (the field's x-component depends on theta_x only) by damped
// Newton, tolerance 1e-12, at most 200 iterations. Throws kUnsupported when
// the solver does not converge.
FixedPointReport BrudFixedPoint(const GameSpec& spec, const DatasetStats& stats);

// Same numerical solver applied to any polynomial; exposed so the named
// closed forms can be cross-checked against it.
FixedPointReport SolveFixedPointNumerically(const Polynomial2& poly,
                                            const DatasetStats& stats);

// Twin-peaks converged policy C m / (2A + 2B(m^2 + s)) for the other agent's
// mean m and variance s.
double TwinPeaksConvergedPolicy(const TwinPeaksParams& p, double other_mean,
                                double other_var);

// (+sqrt((C - 2A) / 2B), -sqrt((C - 2A) / 2B)). Verifies that the gradient
// vanishes and the Hessian is negative definite at both points.
std::pair<double, double> TrueOptimaTwinPeaks(const TwinPeaksParams& p);

struct SigmaRoots {
  std::optional<double> plus;
  std::optional<double> minus;
};

// Standard deviation the other agent's data must have, as a function of its
// mean, for the converged policy to equal a true optimum:
// sqrt(-m^2 +/- C / sqrt(2B(C - 2A)) m - A/B). Only real roots are kept;
// radicands within rounding of zero count as zero. nullopt when neither
// branch is real.
std::optional<SigmaRoots> SigmaCondition(const TwinPeaksParams& p, double mean);

}  // namespace polybrud

#endif  // POLYBRUD_ANALYSIS_H_
