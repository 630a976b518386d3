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

/* C interface to the polybrud library.
 *
 * Objects are opaque handles created by pb_*_create / pb_*_load functions and
 * released by the matching pb_*_destroy. Every fallible call returns a
 * pb_status; on failure pb_last_error() holds a message for the calling
 * thread. Strings returned through char** are owned by the caller and must be
 * released with pb_string_free.
 */
#ifndef POLYBRUD_POLYBRUD_H_
#define POLYBRUD_POLYBRUD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PB_API __declspec(dllexport)
#else
#define PB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pb_status {
  PB_OK = 0,
  PB_ERR_INVALID_PARAMS = 1,
  PB_ERR_INVALID_SPEC = 2,
  PB_ERR_EMPTY_DATASET = 3,
  PB_ERR_EMPTY_BUFFER = 4,
  PB_ERR_EMPTY_BATCH = 5,
  PB_ERR_UNKNOWN_ID = 6,
  PB_ERR_INSUFFICIENT_MOMENTS = 7,
  PB_ERR_NON_FINITE_GRADIENT = 8,
  PB_ERR_NEGATIVE_DISTANCE = 9,
  PB_ERR_EMPTY_TRAJECTORY = 10,
  PB_ERR_UNSUPPORTED = 11,
  PB_ERR_CONFIG = 12,
  PB_ERR_IO = 13,
  PB_ERR_INTERNAL = 14,
  PB_ERR_NULL_ARGUMENT = 15
} pb_status;

typedef enum pb_game_kind {
  PB_GAME_DECOUPLED = 0,
  PB_GAME_SIGN_AGREEMENT = 1,
  PB_GAME_ACTION_AGREEMENT = 2,
  PB_GAME_TWIN_PEAKS = 3
} pb_game_kind;

typedef enum pb_dataset_kind {
  PB_DATASET_UNIFORM_BOX = 0,
  PB_DATASET_GAUSSIAN_CENTERED = 1
} pb_dataset_kind;

typedef enum pb_gradient_mode {
  PB_GRADIENT_EXACT_MOMENTS = 0,
  PB_GRADIENT_MINIBATCH = 1
} pb_gradient_mode;

typedef enum pb_distance_kind {
  PB_DISTANCE_JOINT_ACTION_L1 = 0,
  PB_DISTANCE_TRAJECTORY_MEAN_L1 = 1
} pb_distance_kind;

typedef enum pb_fixed_point_class {
  PB_FIXED_POINT_UNIQUE = 0,
  PB_FIXED_POINT_NONE = 1,
  PB_FIXED_POINT_LINE = 2,
  PB_FIXED_POINT_CONSTANT_FIELD = 3
} pb_fixed_point_class;

typedef struct pb_game pb_game;
typedef struct pb_dataset pb_dataset;
typedef struct pb_buffer pb_buffer;
typedef struct pb_record pb_record;
typedef struct pb_config pb_config;
typedef struct pb_manifest pb_manifest;

typedef struct pb_dataset_spec {
  pb_dataset_kind kind;
  int64_t size;
  double low_x, high_x, low_y, high_y;
  double center_x, center_y, sigma_x, sigma_y;
  uint64_t seed;
} pb_dataset_spec;

typedef struct pb_stats {
  double mean_x, mean_y, var_x, var_y;
} pb_stats;

typedef struct pb_learn_config {
  double learning_rate;
  size_t batch_size;
  int64_t steps;
  pb_gradient_mode gradient_mode;
  double exploration_noise_sigma;
  int has_param_clamp;
  double clamp_low, clamp_high;
} pb_learn_config;

typedef struct pb_pjap_config {
  double alpha;
  double epsilon;
  double refresh_fraction;
  pb_distance_kind distance;
} pb_pjap_config;

typedef struct pb_run_row {
  int64_t step;
  double theta_x, theta_y, reward, grad_x, grad_y, mean_distance,
      total_priority;
} pb_run_row;

typedef struct pb_fixed_point {
  pb_fixed_point_class classification;
  int has_point;
  double x, y;
  int degenerate;
} pb_fixed_point;

/* Library-wide. */
PB_API const char* pb_version(void);
PB_API const char* pb_last_error(void);
PB_API void pb_string_free(char* s);
PB_API pb_learn_config pb_learn_config_default(void);
PB_API pb_pjap_config pb_pjap_config_default(void);

/* Games. */
PB_API pb_status pb_game_create(pb_game_kind kind, double a, double b, double c,
                                pb_game** out);
PB_API pb_status pb_game_create_custom(const int* i, const int* j,
                                       const double* c, size_t n_terms,
                                       pb_game** out);
PB_API void pb_game_destroy(pb_game* game);
PB_API pb_status pb_game_eval(const pb_game* game, double a_x, double a_y,
                              double* out);
PB_API pb_status pb_game_gradient(const pb_game* game, double a_x, double a_y,
                                  double* out_x, double* out_y);

/* Datasets. */
PB_API pb_status pb_dataset_generate(const pb_dataset_spec* spec,
                                     pb_dataset** out);
PB_API pb_status pb_dataset_from_arrays(const double* a_x, const double* a_y,
                                        size_t n, pb_dataset** out);
PB_API pb_status pb_dataset_load_csv(const char* path, pb_dataset** out);
PB_API pb_status pb_dataset_save_csv(const pb_dataset* dataset, const char* path);
PB_API void pb_dataset_destroy(pb_dataset* dataset);
PB_API size_t pb_dataset_size(const pb_dataset* dataset);
PB_API pb_status pb_dataset_get(const pb_dataset* dataset, size_t index,
                                double* a_x, double* a_y);
PB_API pb_status pb_dataset_stats(const pb_dataset* dataset, pb_stats* out);
/* moments_x / moments_y receive max_power + 1 raw moments each. */
PB_API pb_status pb_dataset_moments(const pb_dataset* dataset, int max_power,
                                    double* moments_x, double* moments_y);

/* Replay buffer. capacity 0 means unbounded. */
PB_API pb_status pb_buffer_create(size_t capacity, pb_buffer** out);
PB_API void pb_buffer_destroy(pb_buffer* buffer);
PB_API pb_status pb_buffer_insert(pb_buffer* buffer, double a_x, double a_y,
                                  double priority, int64_t* out_id);
PB_API size_t pb_buffer_size(const pb_buffer* buffer);
PB_API double pb_buffer_total_priority(const pb_buffer* buffer);
PB_API pb_status pb_buffer_priority(const pb_buffer* buffer, int64_t id,
                                    double* out);
PB_API pb_status pb_buffer_update_priorities(pb_buffer* buffer,
                                             const int64_t* ids,
                                             const double* priorities, size_t n);
/* Fills out_ids[batch_size]; the rng is seeded with `seed`. */
PB_API pb_status pb_buffer_sample_uniform(const pb_buffer* buffer,
                                          size_t batch_size, uint64_t seed,
                                          int64_t* out_ids);
PB_API pb_status pb_buffer_sample_prioritized(const pb_buffer* buffer,
                                              size_t batch_size, uint64_t seed,
                                              int64_t* out_ids);
PB_API pb_status pb_buffer_pjap_refresh(pb_buffer* buffer, double theta_x,
                                        double theta_y,
                                        const pb_pjap_config* config,
                                        const int64_t* recent_ids,
                                        size_t n_recent, uint64_t seed,
                                        size_t* out_count);
PB_API pb_status pb_buffer_dump_csv(const pb_buffer* buffer, const char* path);

/* Learner. */
PB_API pb_status pb_brud_gradient_exact(const pb_game* game,
                                        const pb_dataset* dataset,
                                        double theta_x, double theta_y,
                                        double* out_x, double* out_y);
PB_API pb_status pb_brud_gradient_minibatch(const pb_game* game,
                                            const pb_dataset* batch,
                                            double theta_x, double theta_y,
                                            double* out_x, double* out_y);
/* pjap may be NULL for uniform sampling. */
PB_API pb_status pb_train_offline(const pb_game* game, const pb_dataset* dataset,
                                  double theta_x, double theta_y,
                                  const pb_learn_config* learn,
                                  const pb_pjap_config* pjap, uint64_t seed,
                                  pb_record** out);
/* capacity 0 means unbounded; out_buffer may be NULL. */
PB_API pb_status pb_train_online(const pb_game* game, double theta_x,
                                 double theta_y, const pb_learn_config* learn,
                                 size_t capacity, uint64_t seed,
                                 pb_record** out, pb_buffer** out_buffer);
PB_API void pb_record_destroy(pb_record* record);
PB_API size_t pb_record_rows(const pb_record* record);
PB_API pb_status pb_record_row(const pb_record* record, size_t index,
                               pb_run_row* out);
PB_API pb_status pb_record_save_csv(const pb_record* record, const char* path);

/* PJAP. */
PB_API pb_status pb_pjap_priority(double distance, const pb_pjap_config* config,
                                  double* out);
PB_API double pb_distance_joint_action(double a_x, double a_y, double theta_x,
                                       double theta_y);
PB_API pb_status pb_distance_trajectory(const double* a_x, const double* a_y,
                                        size_t steps, double theta_x,
                                        double theta_y, double* out);

/* Analysis. For custom games `kind` is ignored and the game is solved
 * numerically. */
PB_API pb_status pb_brud_fixed_point(const pb_game* game,
                                     const pb_dataset* dataset,
                                     pb_fixed_point* out);
PB_API pb_status pb_twin_peaks_optima(double a, double b, double c,
                                      double* out_plus, double* out_minus);
/* Writes NaN for branches without a real root; returns PB_OK with
 * *out_found = 0 when neither exists. */
PB_API pb_status pb_sigma_condition(double a, double b, double c, double mean,
                                    int* out_found, double* out_plus,
                                    double* out_minus);

/* Experiment configuration and driver. */
PB_API pb_status pb_config_create(pb_config** out);
PB_API pb_status pb_config_load(const char* path, pb_config** out);
PB_API pb_status pb_config_parse(const char* json_text, pb_config** out);
PB_API void pb_config_destroy(pb_config* config);
PB_API pb_status pb_config_set(pb_config* config, const char* key,
                               const char* value);
PB_API pb_status pb_config_validate(const pb_config* config);
PB_API pb_status pb_config_to_json(const pb_config* config, char** out);
PB_API size_t pb_config_key_count(void);
/* Borrowed pointers into static storage; default_json may be "". */
PB_API pb_status pb_config_key_info(size_t index, const char** key,
                                    const char** flag, const char** help,
                                    const char** default_json);

PB_API pb_status pb_experiment_run(const pb_config* config, int dry_run,
                                   int jobs, pb_manifest** out);
PB_API void pb_manifest_destroy(pb_manifest* manifest);
PB_API size_t pb_manifest_file_count(const pb_manifest* manifest);
/* Path relative to the output directory. */
PB_API const char* pb_manifest_file(const pb_manifest* manifest, size_t index);
PB_API const char* pb_manifest_output_dir(const pb_manifest* manifest);
PB_API pb_status pb_manifest_to_json(const pb_manifest* manifest, char** out);

/* Key-value analysis report; writes the field grid CSV when grid_path is
 * non-NULL. */
PB_API pb_status pb_analyze(const pb_config* config, const char* grid_path,
                            char** out_report);
/* Writes the configured dataset as CSV. */
PB_API pb_status pb_generate_dataset_csv(const pb_config* config,
                                         const char* path);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  /* POLYBRUD_POLYBRUD_H_ */
