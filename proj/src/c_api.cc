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

#include "polybrud/polybrud.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "polybrud/analysis.h"
#include "polybrud/buffer.h"
#include "polybrud/datasets.h"
#include "polybrud/error.h"
#include "polybrud/experiment.h"
#include "polybrud/learner.h"
#include "polybrud/pjap.h"
#include "polybrud/polygame.h"

using namespace polybrud;

struct pb_game {
  GameSpec spec;
  Polynomial2 poly;
};

struct pb_dataset {
  std::vector<JointActionSample> samples;
};

struct pb_buffer {
  ReplayBuffer buffer;
};

struct pb_record {
  RunRecord record;
};

struct pb_config {
  ConfigDocument doc;
};

struct pb_manifest {
  ExperimentManifest manifest;
  std::string output_dir;
};

namespace {

thread_local std::string g_last_error;

pb_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return PB_ERR_INVALID_PARAMS;
    case ErrorCode::kInvalidSpec: return PB_ERR_INVALID_SPEC;
    case ErrorCode::kEmptyDataset: return PB_ERR_EMPTY_DATASET;
    case ErrorCode::kEmptyBuffer: return PB_ERR_EMPTY_BUFFER;
    case ErrorCode::kEmptyBatch: return PB_ERR_EMPTY_BATCH;
    case ErrorCode::kUnknownId: return PB_ERR_UNKNOWN_ID;
    case ErrorCode::kInsufficientMoments: return PB_ERR_INSUFFICIENT_MOMENTS;
    case ErrorCode::kNonFiniteGradient: return PB_ERR_NON_FINITE_GRADIENT;
    case ErrorCode::kNegativeDistance: return PB_ERR_NEGATIVE_DISTANCE;
    case ErrorCode::kEmptyTrajectory: return PB_ERR_EMPTY_TRAJECTORY;
    case ErrorCode::kUnsupported: return PB_ERR_UNSUPPORTED;
    case ErrorCode::kConfigError: return PB_ERR_CONFIG;
    case ErrorCode::kIoError: return PB_ERR_IO;
    case ErrorCode::kInternal: return PB_ERR_INTERNAL;
  }
  return PB_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
pb_status Guard(F&& body) {
  try {
    g_last_error.clear();
    body();
    return PB_OK;
  } catch (const Error& e) {
    g_last_error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PB_ERR_INTERNAL;
  }
}

pb_status NullArg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return PB_ERR_NULL_ARGUMENT;
}

#define PB_REQUIRE(ptr) \
  do {                  \
    if ((ptr) == nullptr) return NullArg(#ptr); \
  } while (0)

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

LearnConfig ToLearn(const pb_learn_config& c) {
  LearnConfig out;
  out.learning_rate = c.learning_rate;
  out.batch_size = c.batch_size;
  out.steps = c.steps;
  out.gradient_mode = c.gradient_mode == PB_GRADIENT_MINIBATCH
                          ? GradientMode::kMinibatch
                          : GradientMode::kExactMoments;
  out.exploration_noise_sigma = c.exploration_noise_sigma;
  if (c.has_param_clamp) out.param_clamp = std::make_pair(c.clamp_low, c.clamp_high);
  return out;
}

PjapConfig ToPjap(const pb_pjap_config& c) {
  PjapConfig out;
  out.alpha = c.alpha;
  out.epsilon = c.epsilon;
  out.refresh_fraction = c.refresh_fraction;
  out.distance = c.distance == PB_DISTANCE_TRAJECTORY_MEAN_L1
                     ? DistanceKind::kTrajectoryMeanL1
                     : DistanceKind::kJointActionL1;
  return out;
}

std::optional<std::size_t> ToCapacity(size_t capacity) {
  if (capacity == 0) return std::nullopt;
  return capacity;
}

int StatsPower(const Polynomial2& poly) {
  return std::max({2, poly.degree_x(), poly.degree_y()});
}

}  // namespace

extern "C" {

const char* pb_version(void) {
  static const std::string version(kVersion);
  return version.c_str();
}

const char* pb_last_error(void) { return g_last_error.c_str(); }

void pb_string_free(char* s) { std::free(s); }

pb_learn_config pb_learn_config_default(void) {
  const LearnConfig d;
  pb_learn_config c{};
  c.learning_rate = d.learning_rate;
  c.batch_size = d.batch_size;
  c.steps = d.steps;
  c.gradient_mode = PB_GRADIENT_EXACT_MOMENTS;
  c.exploration_noise_sigma = d.exploration_noise_sigma;
  c.has_param_clamp = 0;
  return c;
}

pb_pjap_config pb_pjap_config_default(void) {
  const PjapConfig d;
  return pb_pjap_config{d.alpha, d.epsilon, d.refresh_fraction,
                        PB_DISTANCE_JOINT_ACTION_L1};
}

pb_status pb_game_create(pb_game_kind kind, double a, double b, double c,
                         pb_game** out) {
  PB_REQUIRE(out);
  return Guard([&] {
    GameSpec spec;
    switch (kind) {
      case PB_GAME_DECOUPLED: spec = GameSpec::Decoupled(); break;
      case PB_GAME_SIGN_AGREEMENT: spec = GameSpec::SignAgreement(); break;
      case PB_GAME_ACTION_AGREEMENT: spec = GameSpec::ActionAgreement(); break;
      case PB_GAME_TWIN_PEAKS: spec = GameSpec::TwinPeaks(a, b, c); break;
      default: Fail(ErrorCode::kInvalidParams, "unknown game kind");
    }
    Polynomial2 poly = BuildGame(spec);
    *out = new pb_game{std::move(spec), std::move(poly)};
  });
}

pb_status pb_game_create_custom(const int* i, const int* j, const double* c,
                                size_t n_terms, pb_game** out) {
  PB_REQUIRE(out);
  if (n_terms > 0) {
    PB_REQUIRE(i);
    PB_REQUIRE(j);
    PB_REQUIRE(c);
  }
  return Guard([&] {
    std::vector<PolyTerm> terms;
    for (size_t k = 0; k < n_terms; ++k) terms.push_back({i[k], j[k], c[k]});
    Polynomial2 poly = Polynomial2::FromTerms(terms);
    *out = new pb_game{GameSpec::Custom(poly), poly};
  });
}

void pb_game_destroy(pb_game* game) { delete game; }

pb_status pb_game_eval(const pb_game* game, double a_x, double a_y, double* out) {
  PB_REQUIRE(game);
  PB_REQUIRE(out);
  return Guard([&] { *out = game->poly.Eval(a_x, a_y); });
}

pb_status pb_game_gradient(const pb_game* game, double a_x, double a_y,
                           double* out_x, double* out_y) {
  PB_REQUIRE(game);
  PB_REQUIRE(out_x);
  PB_REQUIRE(out_y);
  return Guard([&] {
    const Gradient g = game->poly.TrueGradient(a_x, a_y);
    *out_x = g.x;
    *out_y = g.y;
  });
}

pb_status pb_dataset_generate(const pb_dataset_spec* spec, pb_dataset** out) {
  PB_REQUIRE(spec);
  PB_REQUIRE(out);
  return Guard([&] {
    DatasetSpec s;
    s.kind = spec->kind == PB_DATASET_GAUSSIAN_CENTERED
                 ? DatasetKind::kGaussianCentered
                 : DatasetKind::kUniformBox;
    s.size = spec->size;
    s.low_x = spec->low_x;
    s.high_x = spec->high_x;
    s.low_y = spec->low_y;
    s.high_y = spec->high_y;
    s.center_x = spec->center_x;
    s.center_y = spec->center_y;
    s.sigma_x = spec->sigma_x;
    s.sigma_y = spec->sigma_y;
    s.seed = spec->seed;
    *out = new pb_dataset{Generate(s)};
  });
}

pb_status pb_dataset_from_arrays(const double* a_x, const double* a_y, size_t n,
                                 pb_dataset** out) {
  PB_REQUIRE(out);
  if (n > 0) {
    PB_REQUIRE(a_x);
    PB_REQUIRE(a_y);
  }
  return Guard([&] {
    auto ds = std::make_unique<pb_dataset>();
    for (size_t k = 0; k < n; ++k) {
      if (!std::isfinite(a_x[k]) || !std::isfinite(a_y[k])) {
        Fail(ErrorCode::kInvalidSpec, "dataset actions must be finite");
      }
      JointActionSample s;
      s.a_x = a_x[k];
      s.a_y = a_y[k];
      s.id = static_cast<std::int64_t>(k);
      ds->samples.push_back(s);
    }
    *out = ds.release();
  });
}

pb_status pb_dataset_load_csv(const char* path, pb_dataset** out) {
  PB_REQUIRE(path);
  PB_REQUIRE(out);
  return Guard([&] { *out = new pb_dataset{ReadDatasetCsv(std::filesystem::path(path))}; });
}

pb_status pb_dataset_save_csv(const pb_dataset* dataset, const char* path) {
  PB_REQUIRE(dataset);
  PB_REQUIRE(path);
  return Guard([&] { WriteDatasetCsv(std::filesystem::path(path), dataset->samples); });
}

void pb_dataset_destroy(pb_dataset* dataset) { delete dataset; }

size_t pb_dataset_size(const pb_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->samples.size();
}

pb_status pb_dataset_get(const pb_dataset* dataset, size_t index, double* a_x,
                         double* a_y) {
  PB_REQUIRE(dataset);
  PB_REQUIRE(a_x);
  PB_REQUIRE(a_y);
  return Guard([&] {
    if (index >= dataset->samples.size()) {
      Fail(ErrorCode::kInvalidParams, "dataset index out of range");
    }
    *a_x = dataset->samples[index].a_x;
    *a_y = dataset->samples[index].a_y;
  });
}

pb_status pb_dataset_stats(const pb_dataset* dataset, pb_stats* out) {
  PB_REQUIRE(dataset);
  PB_REQUIRE(out);
  return Guard([&] {
    const DatasetStats s = ComputeStats(dataset->samples, 2);
    *out = pb_stats{s.mean_x, s.mean_y, s.var_x, s.var_y};
  });
}

pb_status pb_dataset_moments(const pb_dataset* dataset, int max_power,
                             double* moments_x, double* moments_y) {
  PB_REQUIRE(dataset);
  PB_REQUIRE(moments_x);
  PB_REQUIRE(moments_y);
  return Guard([&] {
    const DatasetStats s = ComputeStats(dataset->samples, max_power);
    std::copy(s.moments_x.begin(), s.moments_x.end(), moments_x);
    std::copy(s.moments_y.begin(), s.moments_y.end(), moments_y);
  });
}

pb_status pb_buffer_create(size_t capacity, pb_buffer** out) {
  PB_REQUIRE(out);
  return Guard([&] { *out = new pb_buffer{ReplayBuffer(ToCapacity(capacity))}; });
}

void pb_buffer_destroy(pb_buffer* buffer) { delete buffer; }

pb_status pb_buffer_insert(pb_buffer* buffer, double a_x, double a_y,
                           double priority, int64_t* out_id) {
  PB_REQUIRE(buffer);
  return Guard([&] {
    JointActionSample s;
    s.a_x = a_x;
    s.a_y = a_y;
    s.id = buffer->buffer.next_id();
    const EntryId id = buffer->buffer.Insert(s, priority);
    if (out_id != nullptr) *out_id = id;
  });
}

size_t pb_buffer_size(const pb_buffer* buffer) {
  return buffer == nullptr ? 0 : buffer->buffer.size();
}

double pb_buffer_total_priority(const pb_buffer* buffer) {
  return buffer == nullptr ? 0.0 : buffer->buffer.TotalPriority();
}

pb_status pb_buffer_priority(const pb_buffer* buffer, int64_t id, double* out) {
  PB_REQUIRE(buffer);
  PB_REQUIRE(out);
  return Guard([&] { *out = buffer->buffer.Priority(id); });
}

pb_status pb_buffer_update_priorities(pb_buffer* buffer, const int64_t* ids,
                                      const double* priorities, size_t n) {
  PB_REQUIRE(buffer);
  if (n > 0) {
    PB_REQUIRE(ids);
    PB_REQUIRE(priorities);
  }
  return Guard([&] {
    buffer->buffer.UpdatePriorities(std::span<const EntryId>(ids, n),
                                    std::span<const double>(priorities, n));
  });
}

pb_status pb_buffer_sample_uniform(const pb_buffer* buffer, size_t batch_size,
                                   uint64_t seed, int64_t* out_ids) {
  PB_REQUIRE(buffer);
  PB_REQUIRE(out_ids);
  return Guard([&] {
    Rng rng(seed);
    const SampleBatch b = buffer->buffer.SampleUniform(batch_size, rng);
    std::copy(b.ids.begin(), b.ids.end(), out_ids);
  });
}

pb_status pb_buffer_sample_prioritized(const pb_buffer* buffer,
                                       size_t batch_size, uint64_t seed,
                                       int64_t* out_ids) {
  PB_REQUIRE(buffer);
  PB_REQUIRE(out_ids);
  return Guard([&] {
    Rng rng(seed);
    const SampleBatch b = buffer->buffer.SamplePrioritized(batch_size, rng);
    std::copy(b.ids.begin(), b.ids.end(), out_ids);
  });
}

pb_status pb_buffer_pjap_refresh(pb_buffer* buffer, double theta_x,
                                 double theta_y, const pb_pjap_config* config,
                                 const int64_t* recent_ids, size_t n_recent,
                                 uint64_t seed, size_t* out_count) {
  PB_REQUIRE(buffer);
  PB_REQUIRE(config);
  if (n_recent > 0) PB_REQUIRE(recent_ids);
  return Guard([&] {
    const PjapConfig cfg = ToPjap(*config);
    ValidatePjapConfig(cfg);
    Rng rng(seed);
    const std::size_t n = Refresh(buffer->buffer, JointPolicy{theta_x, theta_y, 0},
                                  cfg, std::span<const EntryId>(recent_ids, n_recent),
                                  rng);
    if (out_count != nullptr) *out_count = n;
  });
}

pb_status pb_buffer_dump_csv(const pb_buffer* buffer, const char* path) {
  PB_REQUIRE(buffer);
  PB_REQUIRE(path);
  return Guard([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) Fail(ErrorCode::kIoError, std::string("cannot open ") + path);
    buffer->buffer.DumpCsv(out);
    out.close();
    if (!out) Fail(ErrorCode::kIoError, std::string("write failed: ") + path);
  });
}

pb_status pb_brud_gradient_exact(const pb_game* game, const pb_dataset* dataset,
                                 double theta_x, double theta_y, double* out_x,
                                 double* out_y) {
  PB_REQUIRE(game);
  PB_REQUIRE(dataset);
  PB_REQUIRE(out_x);
  PB_REQUIRE(out_y);
  return Guard([&] {
    const DatasetStats stats = ComputeStats(dataset->samples, StatsPower(game->poly));
    const Gradient g =
        BrudGradientExact(game->poly, JointPolicy{theta_x, theta_y, 0}, stats);
    *out_x = g.x;
    *out_y = g.y;
  });
}

pb_status pb_brud_gradient_minibatch(const pb_game* game, const pb_dataset* batch,
                                     double theta_x, double theta_y,
                                     double* out_x, double* out_y) {
  PB_REQUIRE(game);
  PB_REQUIRE(batch);
  PB_REQUIRE(out_x);
  PB_REQUIRE(out_y);
  return Guard([&] {
    const Gradient g = BrudGradientMinibatch(
        game->poly, JointPolicy{theta_x, theta_y, 0}, batch->samples);
    *out_x = g.x;
    *out_y = g.y;
  });
}

pb_status pb_train_offline(const pb_game* game, const pb_dataset* dataset,
                           double theta_x, double theta_y,
                           const pb_learn_config* learn,
                           const pb_pjap_config* pjap, uint64_t seed,
                           pb_record** out) {
  PB_REQUIRE(game);
  PB_REQUIRE(dataset);
  PB_REQUIRE(learn);
  PB_REQUIRE(out);
  return Guard([&] {
    std::optional<PjapConfig> prioritizer;
    if (pjap != nullptr) prioritizer = ToPjap(*pjap);
    RunRecord record = TrainOffline(game->poly, dataset->samples,
                                    JointPolicy{theta_x, theta_y, 0},
                                    ToLearn(*learn), prioritizer, seed);
    *out = new pb_record{std::move(record)};
  });
}

pb_status pb_train_online(const pb_game* game, double theta_x, double theta_y,
                          const pb_learn_config* learn, size_t capacity,
                          uint64_t seed, pb_record** out, pb_buffer** out_buffer) {
  PB_REQUIRE(game);
  PB_REQUIRE(learn);
  PB_REQUIRE(out);
  return Guard([&] {
    OnlineRun run = TrainOnline(game->poly, JointPolicy{theta_x, theta_y, 0},
                                ToLearn(*learn), ToCapacity(capacity), seed);
    auto record = std::make_unique<pb_record>(pb_record{std::move(run.record)});
    if (out_buffer != nullptr) *out_buffer = new pb_buffer{std::move(run.buffer)};
    *out = record.release();
  });
}

void pb_record_destroy(pb_record* record) { delete record; }

size_t pb_record_rows(const pb_record* record) {
  return record == nullptr ? 0 : record->record.rows.size();
}

pb_status pb_record_row(const pb_record* record, size_t index, pb_run_row* out) {
  PB_REQUIRE(record);
  PB_REQUIRE(out);
  return Guard([&] {
    if (index >= record->record.rows.size()) {
      Fail(ErrorCode::kInvalidParams, "record row out of range");
    }
    const RunRow& r = record->record.rows[index];
    *out = pb_run_row{r.step, r.theta_x, r.theta_y, r.reward, r.grad_x,
                      r.grad_y, r.mean_distance, r.total_priority};
  });
}

pb_status pb_record_save_csv(const pb_record* record, const char* path) {
  PB_REQUIRE(record);
  PB_REQUIRE(path);
  return Guard([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) Fail(ErrorCode::kIoError, std::string("cannot open ") + path);
    WriteRunRecordCsv(out, record->record);
    out.close();
    if (!out) Fail(ErrorCode::kIoError, std::string("write failed: ") + path);
  });
}

pb_status pb_pjap_priority(double distance, const pb_pjap_config* config,
                           double* out) {
  PB_REQUIRE(config);
  PB_REQUIRE(out);
  return Guard([&] {
    const PjapConfig cfg = ToPjap(*config);
    ValidatePjapConfig(cfg);
    *out = Priority(distance, cfg);
  });
}

double pb_distance_joint_action(double a_x, double a_y, double theta_x,
                                double theta_y) {
  return DistanceJointAction(JointAction{a_x, a_y}, JointPolicy{theta_x, theta_y, 0});
}

pb_status pb_distance_trajectory(const double* a_x, const double* a_y,
                                 size_t steps, double theta_x, double theta_y,
                                 double* out) {
  PB_REQUIRE(out);
  if (steps > 0) {
    PB_REQUIRE(a_x);
    PB_REQUIRE(a_y);
  }
  return Guard([&] {
    std::vector<JointAction> traj;
    for (size_t t = 0; t < steps; ++t) traj.push_back({a_x[t], a_y[t]});
    *out = DistanceTrajectory(traj, JointPolicy{theta_x, theta_y, 0});
  });
}

pb_status pb_brud_fixed_point(const pb_game* game, const pb_dataset* dataset,
                              pb_fixed_point* out) {
  PB_REQUIRE(game);
  PB_REQUIRE(dataset);
  PB_REQUIRE(out);
  return Guard([&] {
    const DatasetStats stats = ComputeStats(dataset->samples, StatsPower(game->poly));
    const FixedPointReport r = BrudFixedPoint(game->spec, stats);
    pb_fixed_point fp{};
    switch (r.classification) {
      case FixedPointClass::kUniqueFixedPoint: fp.classification = PB_FIXED_POINT_UNIQUE; break;
      case FixedPointClass::kNoFiniteFixedPoint: fp.classification = PB_FIXED_POINT_NONE; break;
      case FixedPointClass::kLineOfFixedPoints: fp.classification = PB_FIXED_POINT_LINE; break;
      case FixedPointClass::kConstantField: fp.classification = PB_FIXED_POINT_CONSTANT_FIELD; break;
    }
    fp.has_point = r.point.has_value();
    fp.x = r.point ? r.point->first : std::numeric_limits<double>::quiet_NaN();
    fp.y = r.point ? r.point->second : std::numeric_limits<double>::quiet_NaN();
    fp.degenerate = r.degenerate;
    *out = fp;
  });
}

pb_status pb_twin_peaks_optima(double a, double b, double c, double* out_plus,
                               double* out_minus) {
  PB_REQUIRE(out_plus);
  PB_REQUIRE(out_minus);
  return Guard([&] {
    const auto [plus, minus] = TrueOptimaTwinPeaks({a, b, c});
    *out_plus = plus;
    *out_minus = minus;
  });
}

pb_status pb_sigma_condition(double a, double b, double c, double mean,
                             int* out_found, double* out_plus, double* out_minus) {
  PB_REQUIRE(out_found);
  PB_REQUIRE(out_plus);
  PB_REQUIRE(out_minus);
  return Guard([&] {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto roots = SigmaCondition({a, b, c}, mean);
    *out_found = roots.has_value();
    *out_plus = roots && roots->plus ? *roots->plus : nan;
    *out_minus = roots && roots->minus ? *roots->minus : nan;
  });
}

pb_status pb_config_create(pb_config** out) {
  PB_REQUIRE(out);
  return Guard([&] { *out = new pb_config{}; });
}

pb_status pb_config_load(const char* path, pb_config** out) {
  PB_REQUIRE(path);
  PB_REQUIRE(out);
  return Guard([&] { *out = new pb_config{ConfigDocument::FromFile(path)}; });
}

pb_status pb_config_parse(const char* json_text, pb_config** out) {
  PB_REQUIRE(json_text);
  PB_REQUIRE(out);
  return Guard([&] { *out = new pb_config{ConfigDocument::FromString(json_text)}; });
}

void pb_config_destroy(pb_config* config) { delete config; }

pb_status pb_config_set(pb_config* config, const char* key, const char* value) {
  PB_REQUIRE(config);
  PB_REQUIRE(key);
  PB_REQUIRE(value);
  return Guard([&] { config->doc.Set(key, value); });
}

pb_status pb_config_validate(const pb_config* config) {
  PB_REQUIRE(config);
  return Guard([&] { config->doc.Resolve(); });
}

pb_status pb_config_to_json(const pb_config* config, char** out) {
  PB_REQUIRE(config);
  PB_REQUIRE(out);
  return Guard([&] { *out = CopyString(config->doc.ToJson()); });
}

size_t pb_config_key_count(void) { return ConfigKeys().size(); }

pb_status pb_config_key_info(size_t index, const char** key, const char** flag,
                             const char** help, const char** default_json) {
  return Guard([&] {
    const auto keys = ConfigKeys();
    if (index >= keys.size()) Fail(ErrorCode::kInvalidParams, "key index out of range");
    const ConfigKey& k = keys[index];
    if (key != nullptr) *key = k.key.c_str();
    if (flag != nullptr) *flag = k.flag.c_str();
    if (help != nullptr) *help = k.help.c_str();
    if (default_json != nullptr) *default_json = k.default_json.c_str();
  });
}

pb_status pb_experiment_run(const pb_config* config, int dry_run, int jobs,
                            pb_manifest** out) {
  PB_REQUIRE(config);
  PB_REQUIRE(out);
  return Guard([&] {
    const ExperimentConfig cfg = config->doc.Resolve();
    RunOptions options;
    options.dry_run = dry_run != 0;
    options.jobs = jobs;
    ExperimentManifest m = RunExperiment(cfg, options);
    std::string dir = m.output_dir.string();
    *out = new pb_manifest{std::move(m), std::move(dir)};
  });
}

void pb_manifest_destroy(pb_manifest* manifest) { delete manifest; }

size_t pb_manifest_file_count(const pb_manifest* manifest) {
  return manifest == nullptr ? 0 : manifest->manifest.files.size();
}

const char* pb_manifest_file(const pb_manifest* manifest, size_t index) {
  if (manifest == nullptr || index >= manifest->manifest.files.size()) return nullptr;
  return manifest->manifest.files[index].path.c_str();
}

const char* pb_manifest_output_dir(const pb_manifest* manifest) {
  return manifest == nullptr ? nullptr : manifest->output_dir.c_str();
}

pb_status pb_manifest_to_json(const pb_manifest* manifest, char** out) {
  PB_REQUIRE(manifest);
  PB_REQUIRE(out);
  return Guard([&] { *out = CopyString(manifest->manifest.ToJson()); });
}

pb_status pb_analyze(const pb_config* config, const char* grid_path,
                     char** out_report) {
  PB_REQUIRE(config);
  PB_REQUIRE(out_report);
  return Guard([&] {
    const ExperimentConfig cfg = config->doc.Resolve();
    const std::vector<JointActionSample> data = LoadDataset(cfg);
    const std::string report = AnalyzeReport(cfg, data);
    if (grid_path != nullptr) {
      const Polynomial2 poly = BuildGame(cfg.game);
      std::ofstream out(grid_path, std::ios::binary);
      if (!out) Fail(ErrorCode::kIoError, std::string("cannot open ") + grid_path);
      WriteFieldGrid(out, poly, ComputeStats(data, StatsPower(poly)), cfg.grid);
      out.close();
      if (!out) Fail(ErrorCode::kIoError, std::string("write failed: ") + grid_path);
    }
    *out_report = CopyString(report);
  });
}

pb_status pb_generate_dataset_csv(const pb_config* config, const char* path) {
  PB_REQUIRE(config);
  PB_REQUIRE(path);
  return Guard([&] {
    const ExperimentConfig cfg = config->doc.Resolve();
    WriteDatasetCsv(std::filesystem::path(path), LoadDataset(cfg));
  });
}

}  // extern "C"
