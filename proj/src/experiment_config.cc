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

#include <algorithm>
#include <cmath>
#include <deque>
#include <tuple>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "polybrud/error.h"
#include "polybrud/experiment.h"
#include "text.h"

namespace polybrud {
namespace {

using json = nlohmann::json;

std::string FlagFor(std::string_view key) {
  std::string flag = "--";
  for (char c : key) flag += (c == '.' || c == '_') ? '-' : c;
  return flag;
}

std::vector<ConfigKey> BuildKeys() {
  struct Row {
    const char* key;
    const char* default_json;
    const char* help;
  };
  static const Row rows[] = {
      {"experiment", "",
       "online_buffer_sweep | offline_uniform | twin_peaks_variance_sweep | "
       "pjap_comparison | analyze"},
      {"game.kind", "\"sign_agreement\"",
       "decoupled | sign_agreement | action_agreement | twin_peaks | custom"},
      {"game.A", "1", "twin peaks A (> 0)"},
      {"game.B", "4", "twin peaks B (> 0)"},
      {"game.C", "5", "twin peaks C (> 2A)"},
      {"game.terms", "[]", "custom game terms [[i, j, c], ...]"},
      {"dataset.kind", "\"uniform_box\"", "uniform_box | gaussian_centered"},
      {"dataset.size", "1000", "number of samples"},
      {"dataset.low", "[-1,-1]", "uniform box lower bounds (scalar or [x, y])"},
      {"dataset.high", "[1,1]", "uniform box upper bounds (scalar or [x, y])"},
      {"dataset.center", "[0,0]", "gaussian center (scalar or [x, y])"},
      {"dataset.sigma", "[0,0]", "gaussian std deviation (scalar or [x, y])"},
      {"dataset.seed", "", "dataset seed (default $POLYBRUD_SEED, else 0)"},
      {"dataset.path", "", "read the dataset from a CSV (id,a_x,a_y) instead"},
      {"learn.learning_rate", "0.01", "gradient ascent step size"},
      {"learn.batch_size", "64", "minibatch size"},
      {"learn.steps", "50000", "number of updates"},
      {"learn.gradient_mode", "",
       "exact_moments | minibatch (default: minibatch for online and PJAP "
       "experiments, exact_moments otherwise)"},
      {"learn.exploration_noise_sigma", "0.3", "online exploration noise"},
      {"learn.param_clamp", "null", "optional [low, high] parameter clamp"},
      {"pjap.alpha", "5", "PJAP Gaussian sharpness"},
      {"pjap.epsilon", "0.01", "PJAP minimum priority"},
      {"pjap.refresh_fraction", "0.1", "share of priorities refreshed per step"},
      {"pjap.distance", "\"joint_action_l1\"",
       "joint_action_l1 | trajectory_mean_l1"},
      {"seeds", "", "run seeds (default [$POLYBRUD_SEED], else [0])"},
      {"initial_policies", "[[0,0]]", "initial policies [[theta_x, theta_y], ...]"},
      {"output_dir", "\"out\"", "directory for CSVs and the manifest"},
      {"online.capacities", "[64,640,6400,0]",
       "online buffer capacities (0 = unbounded)"},
      {"sweep.sigmas", "[0,0.25,0.5]", "variance sweep standard deviations"},
      {"analyze.grid_min", "-1.5", "field grid lower bound"},
      {"analyze.grid_max", "1.5", "field grid upper bound"},
      {"analyze.grid_n", "21", "field grid points per axis"},
  };
  std::vector<ConfigKey> keys;
  for (const Row& r : rows) {
    keys.push_back({r.key, FlagFor(r.key), r.help, r.default_json});
  }
  return keys;
}

[[noreturn]] void ConfigFail(std::string_view field, const std::string& what) {
  Fail(ErrorCode::kConfigError, std::string(field) + ": " + what);
}

std::uint64_t DefaultSeed() {
  const char* env = std::getenv(std::string(kSeedEnvVar).c_str());
  if (env == nullptr) return 0;
  const auto v = internal::ParseNumber<std::uint64_t>(internal::Trim(env));
  if (!v) {
    ConfigFail(kSeedEnvVar, "must be a non-negative integer, got '" +
                                std::string(env) + "'");
  }
  return *v;
}

// Typed access to the resolved document with field-level errors.
class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {}

  const json* Find(std::string_view key) const {
    const json* node = &doc_;
    std::size_t start = 0;
    for (;;) {
      const std::size_t dot = key.find('.', start);
      const std::string part(key.substr(start, dot - start));
      if (!node->is_object()) return nullptr;
      auto it = node->find(part);
      if (it == node->end() || it->is_null()) return nullptr;
      node = &*it;
      if (dot == std::string_view::npos) return node;
      start = dot + 1;
    }
  }

  // Value at key, or the key's default; nullptr when neither exists.
  const json* Value(std::string_view key) {
    if (const json* v = Find(key)) return Record(key, *v);
    for (const ConfigKey& k : ConfigKeys()) {
      if (k.key == key && !k.default_json.empty()) {
        defaults_.push_back(json::parse(k.default_json));
        if (defaults_.back().is_null()) return nullptr;
        return Record(key, defaults_.back());
      }
    }
    return nullptr;
  }

  // Notes a value in the fully resolved document echoed to the manifest.
  const json* Record(std::string_view key, const json& value) {
    json* node = &resolved_;
    std::size_t start = 0;
    for (;;) {
      const std::size_t dot = key.find('.', start);
      json& child = (*node)[std::string(key.substr(start, dot - start))];
      if (dot == std::string_view::npos) {
        child = value;
        return &value;
      }
      node = &child;
      start = dot + 1;
    }
  }

  const json& resolved() const { return resolved_; }

  double Number(std::string_view key) {
    const json* v = Require(key);
    if (!v->is_number()) ConfigFail(key, "expected a number");
    return v->get<double>();
  }

  std::int64_t Integer(std::string_view key) {
    return IntegerOf(*Require(key), key);
  }

  std::string String(std::string_view key) {
    const json* v = Require(key);
    if (!v->is_string()) ConfigFail(key, "expected a string");
    return v->get<std::string>();
  }

  // Scalar broadcast to both agents, or a two-element array.
  std::pair<double, double> Pair(std::string_view key) {
    const json* v = Require(key);
    if (v->is_number()) return {v->get<double>(), v->get<double>()};
    if (v->is_array() && v->size() == 2 && (*v)[0].is_number() &&
        (*v)[1].is_number()) {
      return {(*v)[0].get<double>(), (*v)[1].get<double>()};
    }
    ConfigFail(key, "expected a number or a [x, y] pair");
  }

  const json* Require(std::string_view key) {
    const json* v = Value(key);
    if (v == nullptr) ConfigFail(key, "required");
    return v;
  }

  static std::int64_t IntegerOf(const json& v, std::string_view key) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9.0e15) {
        return static_cast<std::int64_t>(d);
      }
    }
    ConfigFail(key, "expected an integer");
  }

 private:
  const json& doc_;
  std::deque<json> defaults_;  // stable addresses for parsed defaults
  json resolved_ = json::object();
};

void CheckKnownKeys(const json& doc) {
  std::set<std::string> leaves;
  std::set<std::string> sections;
  for (const ConfigKey& k : ConfigKeys()) {
    leaves.insert(k.key);
    const auto dot = k.key.find('.');
    if (dot != std::string::npos) sections.insert(k.key.substr(0, dot));
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& top = it.key();
    if (leaves.count(top)) continue;
    if (!sections.count(top)) ConfigFail(top, "unknown key");
    if (it->is_null()) continue;
    if (!it->is_object()) ConfigFail(top, "expected an object");
    for (auto child = it->begin(); child != it->end(); ++child) {
      const std::string full = top + "." + child.key();
      if (!leaves.count(full)) ConfigFail(full, "unknown key");
    }
  }
}

std::string ExperimentNames() {
  std::string out;
  for (ExperimentKind k :
       {ExperimentKind::kOnlineBufferSweep, ExperimentKind::kOfflineUniform,
        ExperimentKind::kTwinPeaksVarianceSweep, ExperimentKind::kPjapComparison,
        ExperimentKind::kAnalyze}) {
    if (!out.empty()) out += ", ";
    out += ExperimentKindName(k);
  }
  return out;
}

GameSpec ReadGame(Reader& r) {
  const std::string kind_name = r.String("game.kind");
  const auto kind = ParseGameKind(kind_name);
  if (!kind) {
    ConfigFail("game.kind",
               "unknown game '" + kind_name +
                   "' (valid: decoupled, sign_agreement, action_agreement, "
                   "twin_peaks, custom)");
  }
  GameSpec spec;
  spec.kind = *kind;
  spec.twin_peaks = {r.Number("game.A"), r.Number("game.B"), r.Number("game.C")};
  if (*kind == GameKind::kCustom) {
    const json* terms = r.Require("game.terms");
    if (!terms->is_array() || terms->empty()) {
      ConfigFail("game.terms", "custom game needs a non-empty [[i, j, c], ...] list");
    }
    std::vector<PolyTerm> parsed;
    for (const json& t : *terms) {
      if (!t.is_array() || t.size() != 3 || !t[2].is_number()) {
        ConfigFail("game.terms", "each term must be [i, j, c]");
      }
      parsed.push_back({static_cast<int>(Reader::IntegerOf(t[0], "game.terms")),
                        static_cast<int>(Reader::IntegerOf(t[1], "game.terms")),
                        t[2].get<double>()});
    }
    try {
      spec.custom = Polynomial2::FromTerms(parsed);
    } catch (const Error& e) {
      ConfigFail("game.terms", e.what());
    }
  }
  try {
    BuildGame(spec);
  } catch (const Error& e) {
    ConfigFail("game", e.what());
  }
  return spec;
}

DatasetSpec ReadDataset(Reader& r, std::uint64_t default_seed) {
  DatasetSpec spec;
  const std::string kind_name = r.String("dataset.kind");
  const auto kind = ParseDatasetKind(kind_name);
  if (!kind) {
    ConfigFail("dataset.kind", "unknown dataset kind '" + kind_name +
                                   "' (valid: uniform_box, gaussian_centered)");
  }
  spec.kind = *kind;
  spec.size = r.Integer("dataset.size");
  std::tie(spec.low_x, spec.low_y) = r.Pair("dataset.low");
  std::tie(spec.high_x, spec.high_y) = r.Pair("dataset.high");
  std::tie(spec.center_x, spec.center_y) = r.Pair("dataset.center");
  std::tie(spec.sigma_x, spec.sigma_y) = r.Pair("dataset.sigma");
  if (r.Find("dataset.seed")) {
    const std::int64_t seed = r.Integer("dataset.seed");
    if (seed < 0) ConfigFail("dataset.seed", "must be non-negative");
    spec.seed = static_cast<std::uint64_t>(seed);
  } else {
    spec.seed = default_seed;
    r.Record("dataset.seed", spec.seed);
  }
  try {
    ValidateDatasetSpec(spec);
  } catch (const Error& e) {
    ConfigFail("dataset", e.what());
  }
  return spec;
}

}  // namespace

std::string_view ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kOnlineBufferSweep: return "online_buffer_sweep";
    case ExperimentKind::kOfflineUniform: return "offline_uniform";
    case ExperimentKind::kTwinPeaksVarianceSweep: return "twin_peaks_variance_sweep";
    case ExperimentKind::kPjapComparison: return "pjap_comparison";
    case ExperimentKind::kAnalyze: return "analyze";
  }
  return "unknown";
}

std::optional<ExperimentKind> ParseExperimentKind(std::string_view name) {
  for (ExperimentKind k :
       {ExperimentKind::kOnlineBufferSweep, ExperimentKind::kOfflineUniform,
        ExperimentKind::kTwinPeaksVarianceSweep, ExperimentKind::kPjapComparison,
        ExperimentKind::kAnalyze}) {
    if (ExperimentKindName(k) == name) return k;
  }
  return std::nullopt;
}

std::span<const ConfigKey> ConfigKeys() {
  static const std::vector<ConfigKey> keys = BuildKeys();
  return keys;
}

struct ConfigDocument::Impl {
  json doc = json::object();
};

ConfigDocument::ConfigDocument() : impl_(std::make_unique<Impl>()) {}
ConfigDocument::~ConfigDocument() = default;
ConfigDocument::ConfigDocument(const ConfigDocument& other)
    : impl_(std::make_unique<Impl>(*other.impl_)) {}
ConfigDocument& ConfigDocument::operator=(const ConfigDocument& other) {
  if (this != &other) impl_ = std::make_unique<Impl>(*other.impl_);
  return *this;
}
ConfigDocument::ConfigDocument(ConfigDocument&&) noexcept = default;
ConfigDocument& ConfigDocument::operator=(ConfigDocument&&) noexcept = default;

ConfigDocument ConfigDocument::FromString(std::string_view json_text) {
  ConfigDocument doc;
  try {
    doc.impl_->doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kConfigError, std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.impl_->doc.is_object()) {
    Fail(ErrorCode::kConfigError, "config: top level must be an object");
  }
  return doc;
}

ConfigDocument ConfigDocument::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromString(ss.str());
}

void ConfigDocument::Set(std::string_view key, std::string_view value) {
  const auto keys = ConfigKeys();
  if (std::none_of(keys.begin(), keys.end(),
                   [&](const ConfigKey& k) { return k.key == key; })) {
    ConfigFail(key, "unknown key");
  }
  json parsed = json::parse(value.begin(), value.end(), nullptr,
                            /*allow_exceptions=*/false);
  if (parsed.is_discarded()) parsed = std::string(value);

  json* node = &impl_->doc;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = key.find('.', start);
    const std::string part(key.substr(start, dot - start));
    if (dot == std::string_view::npos) {
      (*node)[part] = std::move(parsed);
      return;
    }
    json& child = (*node)[part];
    if (!child.is_object()) child = json::object();
    node = &child;
    start = dot + 1;
  }
}

std::string ConfigDocument::ToJson() const { return impl_->doc.dump(2); }

ExperimentConfig ConfigDocument::Resolve() const {
  const json& doc = impl_->doc;
  CheckKnownKeys(doc);
  Reader r(doc);
  ExperimentConfig cfg;

  const json* exp = r.Find("experiment");
  if (exp == nullptr) ConfigFail("experiment", "required (valid: " + ExperimentNames() + ")");
  if (!exp->is_string() || !ParseExperimentKind(exp->get<std::string>())) {
    ConfigFail("experiment", "unknown experiment '" +
                                 (exp->is_string() ? exp->get<std::string>() : exp->dump()) +
                                 "' (valid: " + ExperimentNames() + ")");
  }
  cfg.experiment = *ParseExperimentKind(exp->get<std::string>());
  r.Record("experiment", *exp);
  const bool online = cfg.experiment == ExperimentKind::kOnlineBufferSweep;

  cfg.game = ReadGame(r);

  const std::uint64_t default_seed = DefaultSeed();
  if (r.Find("dataset")) {
    if (const json* path = r.Find("dataset.path")) {
      if (!path->is_string()) ConfigFail("dataset.path", "expected a string");
      cfg.dataset_path = path->get<std::string>();
      r.Record("dataset.path", *path);
    } else {
      cfg.dataset = ReadDataset(r, default_seed);
    }
  } else if (!online) {
    ConfigFail("dataset", "required for experiment '" +
                              std::string(ExperimentKindName(cfg.experiment)) + "'");
  }

  LearnConfig& learn = cfg.learn;
  learn.learning_rate = r.Number("learn.learning_rate");
  const std::int64_t batch = r.Integer("learn.batch_size");
  if (batch < 1) ConfigFail("learn.batch_size", "must be >= 1");
  learn.batch_size = static_cast<std::size_t>(batch);
  learn.steps = r.Integer("learn.steps");
  if (r.Find("learn.gradient_mode")) {
    const std::string mode = r.String("learn.gradient_mode");
    const auto parsed = ParseGradientMode(mode);
    if (!parsed) {
      ConfigFail("learn.gradient_mode",
                 "unknown mode '" + mode + "' (valid: exact_moments, minibatch)");
    }
    learn.gradient_mode = *parsed;
  } else {
    learn.gradient_mode =
        (online || cfg.experiment == ExperimentKind::kPjapComparison)
            ? GradientMode::kMinibatch
            : GradientMode::kExactMoments;
  }
  r.Record("learn.gradient_mode", std::string(GradientModeName(learn.gradient_mode)));
  learn.exploration_noise_sigma = r.Number("learn.exploration_noise_sigma");
  if (r.Find("learn.param_clamp")) learn.param_clamp = r.Pair("learn.param_clamp");
  try {
    ValidateLearnConfig(learn);
  } catch (const Error& e) {
    ConfigFail("learn", e.what());
  }

  if (r.Find("pjap") || cfg.experiment == ExperimentKind::kPjapComparison) {
    PjapConfig pjap;
    pjap.alpha = r.Number("pjap.alpha");
    pjap.epsilon = r.Number("pjap.epsilon");
    pjap.refresh_fraction = r.Number("pjap.refresh_fraction");
    const std::string distance = r.String("pjap.distance");
    const auto kind = ParseDistanceKind(distance);
    if (!kind) {
      ConfigFail("pjap.distance", "unknown distance '" + distance +
                                      "' (valid: joint_action_l1, trajectory_mean_l1)");
    }
    pjap.distance = *kind;
    try {
      ValidatePjapConfig(pjap);
    } catch (const Error& e) {
      ConfigFail("pjap", e.what());
    }
    cfg.pjap = pjap;
  }
  if (cfg.experiment == ExperimentKind::kPjapComparison &&
      learn.gradient_mode != GradientMode::kMinibatch) {
    ConfigFail("learn.gradient_mode", "pjap_comparison requires minibatch");
  }

  if (const json* seeds = r.Find("seeds")) {
    if (seeds->is_array()) {
      for (const json& s : *seeds) {
        const std::int64_t v = Reader::IntegerOf(s, "seeds");
        if (v < 0) ConfigFail("seeds", "must be non-negative");
        cfg.seeds.push_back(static_cast<std::uint64_t>(v));
      }
    } else {
      const std::int64_t v = Reader::IntegerOf(*seeds, "seeds");
      if (v < 0) ConfigFail("seeds", "must be non-negative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(v));
    }
    if (cfg.seeds.empty()) ConfigFail("seeds", "must not be empty");
  } else {
    cfg.seeds.push_back(default_seed);
  }
  r.Record("seeds", cfg.seeds);

  const json* inits = r.Require("initial_policies");
  if (!inits->is_array() || inits->empty()) {
    ConfigFail("initial_policies", "expected a non-empty [[theta_x, theta_y], ...] list");
  }
  for (const json& p : *inits) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      ConfigFail("initial_policies", "each entry must be [theta_x, theta_y]");
    }
    cfg.initial_policies.emplace_back(p[0].get<double>(), p[1].get<double>());
  }

  cfg.output_dir = r.String("output_dir");

  const json* caps = r.Require("online.capacities");
  if (!caps->is_array() || caps->empty()) {
    ConfigFail("online.capacities", "expected a non-empty list");
  }
  for (const json& c : *caps) {
    const std::int64_t v = Reader::IntegerOf(c, "online.capacities");
    if (v < 0) ConfigFail("online.capacities", "must be >= 0");
    if (v == 0) {
      cfg.capacities.push_back(std::nullopt);
    } else {
      if (online && static_cast<std::size_t>(v) < learn.batch_size) {
        ConfigFail("online.capacities", "capacities must be >= learn.batch_size");
      }
      cfg.capacities.push_back(static_cast<std::size_t>(v));
    }
  }

  const json* sigmas = r.Require("sweep.sigmas");
  if (!sigmas->is_array() || sigmas->empty()) {
    ConfigFail("sweep.sigmas", "expected a non-empty list");
  }
  for (const json& s : *sigmas) {
    if (!s.is_number() || s.get<double>() < 0.0) {
      ConfigFail("sweep.sigmas", "entries must be numbers >= 0");
    }
    cfg.sigmas.push_back(s.get<double>());
  }
  if (cfg.experiment == ExperimentKind::kTwinPeaksVarianceSweep &&
      (!cfg.dataset || cfg.dataset->kind != DatasetKind::kGaussianCentered)) {
    ConfigFail("dataset.kind",
               "twin_peaks_variance_sweep needs a generated gaussian_centered dataset");
  }

  cfg.grid.min = r.Number("analyze.grid_min");
  cfg.grid.max = r.Number("analyze.grid_max");
  const std::int64_t n = r.Integer("analyze.grid_n");
  if (n < 1 || n > 10000) ConfigFail("analyze.grid_n", "must lie in [1, 10000]");
  cfg.grid.n = static_cast<int>(n);
  if (!(cfg.grid.min <= cfg.grid.max)) {
    ConfigFail("analyze.grid_min", "must be <= analyze.grid_max");
  }
  cfg.source_json = r.resolved().dump(2);
  return cfg;
}

}  // namespace polybrud
