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

#ifndef POLYBRUD_DATASETS_H_
#define POLYBRUD_DATASETS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polybrud/types.h"

namespace polybrud {

// Plug-in moments of an empirical joint-action distribution. Variances use
// the population (divide by N) convention.
struct DatasetStats {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  // moments_x[p] = E[a_x^p] for p = 0..P.
  std::vector<double> moments_x;
  std::vector<double> moments_y;

  int max_power() const { return static_cast<int>(moments_x.size()) - 1; }
};

enum class DatasetKind { kUniformBox, kGaussianCentered };

std::string_view DatasetKindName(DatasetKind kind);
std::optional<DatasetKind> ParseDatasetKind(std::string_view name);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kUniformBox;
  std::int64_t size = 1000;
  // kUniformBox: a_x ~ U(low_x, high_x), a_y ~ U(low_y, high_y).
  double low_x = -1.0, high_x = 1.0;
  double low_y = -1.0, high_y = 1.0;
  // kGaussianCentered: center plus per-agent standard deviation.
  double center_x = 0.0, center_y = 0.0;
  double sigma_x = 0.0, sigma_y = 0.0;
  std::uint64_t seed = 0;
};

void ValidateDatasetSpec(const DatasetSpec& spec);

// Deterministic in spec.seed. Gaussian datasets are drawn as antithetic
// pairs (center + z, center - z), so the sample mean equals the center up to
// rounding; an odd-sized dataset gets the center itself as its last sample.
std::vector<JointActionSample> Generate(const DatasetSpec& spec);

// Requires at least one sample and max_power >= 2.
DatasetStats ComputeStats(std::span<const JointActionSample> samples,
                          int max_power);

// CSV with header `id,a_x,a_y`.
void WriteDatasetCsv(std::ostream& out,
                     std::span<const JointActionSample> samples);
void WriteDatasetCsv(const std::filesystem::path& path,
                     std::span<const JointActionSample> samples);
std::vector<JointActionSample> ReadDatasetCsv(std::istream& in);
std::vector<JointActionSample> ReadDatasetCsv(
    const std::filesystem::path& path);

}  // namespace polybrud

#endif  // POLYBRUD_DATASETS_H_
