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

#ifndef POLYBRUD_EXPERIMENT_H_
#define POLYBRUD_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polybrud/datasets.h"
#include "polybrud/learner.h"
#include "polybrud/pjap.h"
#include "polybrud/polygame.h"

namespace polybrud {

inline constexpr std::string_view kVersion = "0.3.0";
inline constexpr std::string_view kSeedEnvVar = "POLYBRUD_SEED";
inline constexpr std::string_view kFieldGridHeader = "a_x,a_y,dJx,dJy,dRx,dRy";

enum class ExperimentKind {
  kOnlineBufferSweep,
  kOfflineUniform,
  kTwinPeaksVarianceSweep,
  kPjapComparison,
  kAnalyze,
};

std::string_view ExperimentKindName(ExperimentKind kind);
std::optional<ExperimentKind> ParseExperimentKind(std::string_view name);

struct GridSpec {
  double min = -1.5;
  double max = 1.5;
  int n = 21;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kAnalyze;
  GameSpec game;
  std::optional<DatasetSpec> dataset;
  // When set, the dataset is read from this CSV instead of generated.
  std::optional<std::filesystem::path> dataset_path;
  LearnConfig learn;
  std::optional<PjapConfig> pjap;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<double, double>> initial_policies;
  std::filesystem::path output_dir;
  // Online sweep; nullopt entries are unbounded buffers.
  std::vector<std::optional<std::size_t>> capacities;
  // Variance sweep: per-agent standard deviations.
  std::vector<double> sigmas;
  GridSpec grid;
  // Resolved document, echoed into the manifest.
  std::string source_json;
};

// One configurable leaf. `flag` is the mirrored command-line option.
struct ConfigKey {
  std::string key;
  std::string flag;
  std::string help;
  std::string default_json;  // empty when there is no default
};

std::span<const ConfigKey> ConfigKeys();

// A configuration document: a JSON object whose leaves can be overridden by
// dotted key before it is resolved into an ExperimentConfig.
class ConfigDocument {
 public:
  ConfigDocument();
  ~ConfigDocument();
  ConfigDocument(const ConfigDocument& other);
  ConfigDocument& operator=(const ConfigDocument& other);
  ConfigDocument(ConfigDocument&&) noexcept;
  ConfigDocument& operator=(ConfigDocument&&) noexcept;

  static ConfigDocument FromFile(const std::filesystem::path& path);
  static ConfigDocument FromString(std::string_view json_text);

  // `value` is parsed as a JSON literal, falling back to a plain string.
  // Throws kConfigError for keys not in ConfigKeys().
  void Set(std::string_view key, std::string_view value);

  std::string ToJson() const;

  // Applies defaults and validates. Errors name the offending field.
  ExperimentConfig Resolve() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Reads dataset_path or generates from the dataset spec. kConfigError when
// the config has neither.
std::vector<JointActionSample> LoadDataset(const ExperimentConfig& config);

struct ManifestEntry {
  std::string path;   // relative to the output directory
  std::string label;  // run or artifact description
  double seconds = 0.0;
};

struct ExperimentManifest {
  std::string config_json;
  std::string version;
  std::filesystem::path output_dir;
  std::vector<ManifestEntry> files;
  // Reward polynomial, so downstream tools can redraw reward contours.
  std::vector<PolyTerm> game_terms;
  double total_seconds = 0.0;

  std::string ToJson() const;
};

struct RunOptions {
  bool dry_run = false;
  int jobs = 1;
};

// Executes every run of the experiment, writes one CSV per run plus
// `manifest.json`. On failure all files written so far are removed and the
// error is rethrown. With dry_run the planned manifest is returned and
// nothing is written.
ExperimentManifest RunExperiment(const ExperimentConfig& config,
                                 const RunOptions& options);

// Key-value report of the closed-form analysis for the configured game and
// dataset.
std::string AnalyzeReport(const ExperimentConfig& config,
                          std::span<const JointActionSample> dataset);

// Grid of grad J (from the dataset) and grad R over [min, max]^2.
void WriteFieldGrid(std::ostream& out, const Polynomial2& poly,
                    const DatasetStats& stats, const GridSpec& grid);

}  // namespace polybrud

#endif  // POLYBRUD_EXPERIMENT_H_
