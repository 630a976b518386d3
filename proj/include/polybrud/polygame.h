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

#ifndef POLYBRUD_POLYGAME_H_
#define POLYBRUD_POLYGAME_H_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polybrud/types.h"

namespace polybrud {

// Largest supported degree in either action.
inline constexpr int kMaxDegree = 8;

struct PolyTerm {
  int i = 0;  // degree in a_x
  int j = 0;  // degree in a_y
  double c = 0.0;
};

// Bivariate polynomial R(a_x, a_y) = sum_ij c_ij a_x^i a_y^j stored as a dense
// (m+1) x (n+1) coefficient matrix. Immutable once built.
class Polynomial2 {
 public:
  // The zero polynomial of degree (0, 0).
  Polynomial2() : Polynomial2(0, 0) {}

  // Zero polynomial with the given maximum degrees.
  Polynomial2(int degree_x, int degree_y);

  // Row-major coefficients, coeffs[i * (degree_y + 1) + j] = c_ij.
  Polynomial2(int degree_x, int degree_y, std::vector<double> coeffs);

  // Degrees are the smallest that hold every term. Repeated (i, j) pairs are
  // summed.
  static Polynomial2 FromTerms(std::span<const PolyTerm> terms);

  int degree_x() const { return degree_x_; }
  int degree_y() const { return degree_y_; }

  // Zero outside the stored range.
  double coeff(int i, int j) const;

  std::span<const double> coeffs() const { return coeffs_; }

  // Non-zero terms in (i, j) order.
  std::vector<PolyTerm> Terms() const;

  // Nested Horner: inner in a_y for every row i, outer in a_x.
  double Eval(double a_x, double a_y) const;

  Polynomial2 PartialX() const;
  Polynomial2 PartialY() const;

  // (dR/da_x, dR/da_y) at the point.
  Gradient TrueGradient(double a_x, double a_y) const;

  bool IsSymmetric() const;

  friend Polynomial2 operator+(const Polynomial2& a, const Polynomial2& b);
  friend bool operator==(const Polynomial2& a, const Polynomial2& b);

 private:
  int degree_x_;
  int degree_y_;
  std::vector<double> coeffs_;
  // Cached IsSymmetric(); Eval then orders its arguments canonically.
  bool symmetric_ = false;
};

enum class GameKind {
  kDecoupled,
  kSignAgreement,
  kActionAgreement,
  kTwinPeaks,
  kCustom,
};

std::string_view GameKindName(GameKind kind);
std::optional<GameKind> ParseGameKind(std::string_view name);

struct TwinPeaksParams {
  double a = 1.0;
  double b = 4.0;
  double c = 5.0;
};

struct GameSpec {
  GameKind kind = GameKind::kSignAgreement;
  TwinPeaksParams twin_peaks;       // kTwinPeaks only
  std::optional<Polynomial2> custom;  // kCustom only

  static GameSpec Decoupled() { return {GameKind::kDecoupled, {}, {}}; }
  static GameSpec SignAgreement() { return {GameKind::kSignAgreement, {}, {}}; }
  static GameSpec ActionAgreement() {
    return {GameKind::kActionAgreement, {}, {}};
  }
  static GameSpec TwinPeaks(double a, double b, double c) {
    return {GameKind::kTwinPeaks, {a, b, c}, {}};
  }
  static GameSpec Custom(Polynomial2 poly) {
    return {GameKind::kCustom, {}, std::move(poly)};
  }
};

// Throws kInvalidParams unless A > 0, B > 0, C > 2A (all finite).
void ValidateTwinPeaks(const TwinPeaksParams& p);

// R = a_x + a_y, a_x a_y, -(a_x - a_y)^2, or
// -A(a_x^2 + a_y^2) - B(a_x a_y)^2 + C a_x a_y; Custom returns its polynomial.
Polynomial2 BuildGame(const GameSpec& spec);

}  // namespace polybrud

#endif  // POLYBRUD_POLYGAME_H_
