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

#include "polybrud/datasets.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "polybrud/error.h"
#include "polybrud/rng.h"
#include "text.h"

namespace polybrud {

std::string_view DatasetKindName(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kUniformBox: return "uniform_box";
    case DatasetKind::kGaussianCentered: return "gaussian_centered";
  }
  return "unknown";
}

std::optional<DatasetKind> ParseDatasetKind(std::string_view name) {
  if (name == "uniform_box") return DatasetKind::kUniformBox;
  if (name == "gaussian_centered") return DatasetKind::kGaussianCentered;
  return std::nullopt;
}

void ValidateDatasetSpec(const DatasetSpec& spec) {
  if (spec.size < 1) Fail(ErrorCode::kInvalidSpec, "dataset size must be >= 1");
  switch (spec.kind) {
    case DatasetKind::kUniformBox:
      if (!(spec.low_x < spec.high_x) || !(spec.low_y < spec.high_y)) {
        Fail(ErrorCode::kInvalidSpec, "uniform box requires low < high");
      }
      if (!std::isfinite(spec.low_x) || !std::isfinite(spec.high_x) ||
          !std::isfinite(spec.low_y) || !std::isfinite(spec.high_y)) {
        Fail(ErrorCode::kInvalidSpec, "uniform box bounds must be finite");
      }
      break;
    case DatasetKind::kGaussianCentered:
      if (!(spec.sigma_x >= 0.0) || !(spec.sigma_y >= 0.0) ||
          !std::isfinite(spec.sigma_x) || !std::isfinite(spec.sigma_y)) {
        Fail(ErrorCode::kInvalidSpec, "gaussian sigma must be finite and >= 0");
      }
      if (!std::isfinite(spec.center_x) || !std::isfinite(spec.center_y)) {
        Fail(ErrorCode::kInvalidSpec, "gaussian center must be finite");
      }
      break;
  }
}

std::vector<JointActionSample> Generate(const DatasetSpec& spec) {
  ValidateDatasetSpec(spec);
  Rng rng(spec.seed);
  std::vector<JointActionSample> out;
  out.reserve(static_cast<std::size_t>(spec.size));
  auto push = [&out](double x, double y) {
    JointActionSample s;
    s.a_x = x;
    s.a_y = y;
    s.id = static_cast<std::int64_t>(out.size());
    out.push_back(s);
  };
  if (spec.kind == DatasetKind::kUniformBox) {
    for (std::int64_t k = 0; k < spec.size; ++k) {
      const double x = rng.Uniform(spec.low_x, spec.high_x);
      const double y = rng.Uniform(spec.low_y, spec.high_y);
      push(x, y);
    }
    return out;
  }
  for (std::int64_t k = 0; k + 1 < spec.size; k += 2) {
    const double zx = spec.sigma_x * rng.Normal();
    const double zy = spec.sigma_y * rng.Normal();
    push(spec.center_x + zx, spec.center_y + zy);
    push(spec.center_x - zx, spec.center_y - zy);
  }
  if (spec.size % 2 == 1) push(spec.center_x, spec.center_y);
  return out;
}

DatasetStats ComputeStats(std::span<const JointActionSample> samples,
                          int max_power) {
  if (samples.empty()) {
    Fail(ErrorCode::kEmptyDataset, "cannot compute stats of an empty dataset");
  }
  if (max_power < 2) {
    Fail(ErrorCode::kInvalidParams, "max_power must be >= 2");
  }
  const auto powers = static_cast<std::size_t>(max_power) + 1;
  DatasetStats stats;
  stats.moments_x.assign(powers, 0.0);
  stats.moments_y.assign(powers, 0.0);
  const double n = static_cast<double>(samples.size());
  for (const JointActionSample& s : samples) {
    double px = 1.0;
    double py = 1.0;
    for (std::size_t p = 0; p < powers; ++p) {
      stats.moments_x[p] += px;
      stats.moments_y[p] += py;
      px *= s.a_x;
      py *= s.a_y;
    }
  }
  for (std::size_t p = 0; p < powers; ++p) {
    stats.moments_x[p] /= n;
    stats.moments_y[p] /= n;
  }
  stats.moments_x[0] = 1.0;
  stats.moments_y[0] = 1.0;
  stats.mean_x = stats.moments_x[1];
  stats.mean_y = stats.moments_y[1];
  // Centered second pass; the raw-moment difference loses precision when
  // the mean is large relative to the spread.
  double sx = 0.0;
  double sy = 0.0;
  for (const JointActionSample& s : samples) {
    sx += (s.a_x - stats.mean_x) * (s.a_x - stats.mean_x);
    sy += (s.a_y - stats.mean_y) * (s.a_y - stats.mean_y);
  }
  stats.var_x = sx / n;
  stats.var_y = sy / n;
  return stats;
}

void WriteDatasetCsv(std::ostream& out,
                     std::span<const JointActionSample> samples) {
  out << "id,a_x,a_y\n";
  for (const JointActionSample& s : samples) {
    out << s.id << ',' << internal::FormatDouble(s.a_x) << ','
        << internal::FormatDouble(s.a_y) << '\n';
  }
}

void WriteDatasetCsv(const std::filesystem::path& path,
                     std::span<const JointActionSample> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  WriteDatasetCsv(out, samples);
  if (!out) Fail(ErrorCode::kIoError, "write failed: " + path.string());
}

std::vector<JointActionSample> ReadDatasetCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || internal::Trim(line) != "id,a_x,a_y") {
    Fail(ErrorCode::kIoError, "dataset CSV must start with header id,a_x,a_y");
  }
  std::vector<JointActionSample> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::Trim(line).empty()) continue;
    const auto fields = internal::SplitCsvLine(line);
    if (fields.size() != 3) {
      Fail(ErrorCode::kIoError,
           "dataset CSV line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const auto id = internal::ParseNumber<std::int64_t>(fields[0]);
    const auto x = internal::ParseNumber<double>(fields[1]);
    const auto y = internal::ParseNumber<double>(fields[2]);
    if (!id || !x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
      Fail(ErrorCode::kIoError,
           "dataset CSV line " + std::to_string(line_no) + ": malformed value");
    }
    JointActionSample s;
    s.a_x = *x;
    s.a_y = *y;
    s.id = *id;
    out.push_back(s);
  }
  return out;
}

std::vector<JointActionSample> ReadDatasetCsv(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  return ReadDatasetCsv(in);
}

}  // namespace polybrud
