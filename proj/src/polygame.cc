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

#include "polybrud/polygame.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "polybrud/error.h"

namespace polybrud {
namespace {

void CheckDegrees(int degree_x, int degree_y) {
  if (degree_x < 0 || degree_y < 0 || degree_x > kMaxDegree ||
      degree_y > kMaxDegree) {
    Fail(ErrorCode::kInvalidParams,
         "polynomial degrees must lie in [0, " + std::to_string(kMaxDegree) +
             "], got (" + std::to_string(degree_x) + ", " +
             std::to_string(degree_y) + ")");
  }
}

}  // namespace

Polynomial2::Polynomial2(int degree_x, int degree_y)
    : degree_x_(degree_x), degree_y_(degree_y) {
  CheckDegrees(degree_x, degree_y);
  coeffs_.assign(static_cast<std::size_t>((degree_x + 1) * (degree_y + 1)),
                 0.0);
}

Polynomial2::Polynomial2(int degree_x, int degree_y, std::vector<double> coeffs)
    : degree_x_(degree_x), degree_y_(degree_y), coeffs_(std::move(coeffs)) {
  CheckDegrees(degree_x, degree_y);
  if (coeffs_.size() !=
      static_cast<std::size_t>((degree_x + 1) * (degree_y + 1))) {
    Fail(ErrorCode::kInvalidParams,
         "coefficient matrix must have (m+1)*(n+1) entries");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) {
      Fail(ErrorCode::kInvalidParams, "coefficients must be finite");
    }
  }
  symmetric_ = IsSymmetric();
}

Polynomial2 Polynomial2::FromTerms(std::span<const PolyTerm> terms) {
  int m = 0;
  int n = 0;
  for (const PolyTerm& t : terms) {
    if (t.i < 0 || t.j < 0) {
      Fail(ErrorCode::kInvalidParams, "term degrees must be non-negative");
    }
    m = std::max(m, t.i);
    n = std::max(n, t.j);
  }
  CheckDegrees(m, n);
  std::vector<double> coeffs(static_cast<std::size_t>((m + 1) * (n + 1)), 0.0);
  for (const PolyTerm& t : terms) coeffs[t.i * (n + 1) + t.j] += t.c;
  return Polynomial2(m, n, std::move(coeffs));
}

double Polynomial2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i > degree_x_ || j > degree_y_) return 0.0;
  return coeffs_[i * (degree_y_ + 1) + j];
}

std::vector<PolyTerm> Polynomial2::Terms() const {
  std::vector<PolyTerm> out;
  for (int i = 0; i <= degree_x_; ++i) {
    for (int j = 0; j <= degree_y_; ++j) {
      const double c = coeff(i, j);
      if (c != 0.0) out.push_back({i, j, c});
    }
  }
  return out;
}

double Polynomial2::Eval(double a_x, double a_y) const {
  // Swap-invariant games must give R(x, y) == R(y, x) bit for bit.
  if (symmetric_ && a_x > a_y) std::swap(a_x, a_y);
  double result = 0.0;
  for (int i = degree_x_; i >= 0; --i) {
    double row = 0.0;
    for (int j = degree_y_; j >= 0; --j) row = row * a_y + coeff(i, j);
    result = result * a_x + row;
  }
  return result;
}

Polynomial2 Polynomial2::PartialX() const {
  if (degree_x_ == 0) return Polynomial2(0, degree_y_);
  Polynomial2 d(degree_x_ - 1, degree_y_);
  for (int i = 1; i <= degree_x_; ++i) {
    for (int j = 0; j <= degree_y_; ++j) {
      d.coeffs_[(i - 1) * (degree_y_ + 1) + j] = i * coeff(i, j);
    }
  }
  d.symmetric_ = d.IsSymmetric();
  return d;
}

Polynomial2 Polynomial2::PartialY() const {
  if (degree_y_ == 0) return Polynomial2(degree_x_, 0);
  Polynomial2 d(degree_x_, degree_y_ - 1);
  for (int i = 0; i <= degree_x_; ++i) {
    for (int j = 1; j <= degree_y_; ++j) {
      d.coeffs_[i * degree_y_ + (j - 1)] = j * coeff(i, j);
    }
  }
  d.symmetric_ = d.IsSymmetric();
  return d;
}

Gradient Polynomial2::TrueGradient(double a_x, double a_y) const {
  return {PartialX().Eval(a_x, a_y), PartialY().Eval(a_x, a_y)};
}

bool Polynomial2::IsSymmetric() const {
  const int d = std::max(degree_x_, degree_y_);
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j < i; ++j) {
      if (coeff(i, j) != coeff(j, i)) return false;
    }
  }
  return true;
}

Polynomial2 operator+(const Polynomial2& a, const Polynomial2& b) {
  Polynomial2 sum(std::max(a.degree_x_, b.degree_x_),
                  std::max(a.degree_y_, b.degree_y_));
  for (int i = 0; i <= sum.degree_x_; ++i) {
    for (int j = 0; j <= sum.degree_y_; ++j) {
      sum.coeffs_[i * (sum.degree_y_ + 1) + j] = a.coeff(i, j) + b.coeff(i, j);
    }
  }
  sum.symmetric_ = sum.IsSymmetric();
  return sum;
}

bool operator==(const Polynomial2& a, const Polynomial2& b) {
  const int m = std::max(a.degree_x_, b.degree_x_);
  const int n = std::max(a.degree_y_, b.degree_y_);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (a.coeff(i, j) != b.coeff(i, j)) return false;
    }
  }
  return true;
}

std::string_view GameKindName(GameKind kind) {
  switch (kind) {
    case GameKind::kDecoupled: return "decoupled";
    case GameKind::kSignAgreement: return "sign_agreement";
    case GameKind::kActionAgreement: return "action_agreement";
    case GameKind::kTwinPeaks: return "twin_peaks";
    case GameKind::kCustom: return "custom";
  }
  return "unknown";
}

std::optional<GameKind> ParseGameKind(std::string_view name) {
  for (GameKind k : {GameKind::kDecoupled, GameKind::kSignAgreement,
                     GameKind::kActionAgreement, GameKind::kTwinPeaks,
                     GameKind::kCustom}) {
    if (GameKindName(k) == name) return k;
  }
  return std::nullopt;
}

void ValidateTwinPeaks(const TwinPeaksParams& p) {
  if (!(std::isfinite(p.a) && std::isfinite(p.b) && std::isfinite(p.c))) {
    Fail(ErrorCode::kInvalidParams, "twin peaks parameters must be finite");
  }
  if (!(p.a > 0.0)) Fail(ErrorCode::kInvalidParams, "twin peaks requires A > 0");
  if (!(p.b > 0.0)) Fail(ErrorCode::kInvalidParams, "twin peaks requires B > 0");
  if (!(p.c > 2.0 * p.a)) {
    Fail(ErrorCode::kInvalidParams, "twin peaks requires C > 2A");
  }
}

Polynomial2 BuildGame(const GameSpec& spec) {
  switch (spec.kind) {
    case GameKind::kDecoupled: {
      const PolyTerm terms[] = {{1, 0, 1.0}, {0, 1, 1.0}};
      return Polynomial2::FromTerms(terms);
    }
    case GameKind::kSignAgreement: {
      const PolyTerm terms[] = {{1, 1, 1.0}};
      return Polynomial2::FromTerms(terms);
    }
    case GameKind::kActionAgreement: {
      // -(a_x - a_y)^2 = -a_x^2 + 2 a_x a_y - a_y^2
      const PolyTerm terms[] = {{2, 0, -1.0}, {1, 1, 2.0}, {0, 2, -1.0}};
      return Polynomial2::FromTerms(terms);
    }
    case GameKind::kTwinPeaks: {
      const TwinPeaksParams& p = spec.twin_peaks;
      ValidateTwinPeaks(p);
      const PolyTerm terms[] = {
          {2, 0, -p.a}, {0, 2, -p.a}, {2, 2, -p.b}, {1, 1, p.c}};
      return Polynomial2::FromTerms(terms);
    }
    case GameKind::kCustom:
      if (!spec.custom) {
        Fail(ErrorCode::kInvalidParams, "custom game needs a polynomial");
      }
      return *spec.custom;
  }
  Fail(ErrorCode::kInvalidParams, "unknown game kind");
}

}  // namespace polybrud
