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

#ifndef POLYBRUD_LEARNER_H_
#define POLYBRUD_LEARNER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "polybrud/buffer.h"
#include "polybrud/datasets.h"
#include "polybrud/pjap.h"
#include "polybrud/polygame.h"
#include "polybrud/types.h"

namespace polybrud {

enum class GradientMode { kExactMoments, kMinibatch };

std::string_view GradientModeName(GradientMode mode);
std::optional<GradientMode> ParseGradientMode(std::string_view name);

struct LearnConfig {
  double learning_rate = 0.01;
  std::size_t batch_size = 64;
  std::int64_t steps = 50000;
  GradientMode gradient_mode = GradientMode::kExactMoments;
  double exploration_noise_sigma = 0.3;  // online only
  std::optional<std::pair<double, double>> param_clamp;
};

void ValidateLearnConfig(const LearnConfig& config);

struct RunRow {
  std::int64_t step = 0;
  double theta_x = 0.0;
  double theta_y = 0.0;
  double reward = 0.0;
  double grad_x = 0.0;
  double grad_y = 0.0;
  double mean_distance = 0.0;
  double total_priority = 0.0;
};

// Row k is the policy after k updates together with the gradient and mean
// sampled L1 distance of update k. Row 0 is the initial policy with zero
// gradient and distance.
struct RunRecord {
  std::vector<RunRow> rows;
};

inline constexpr std::string_view kRunRecordHeader =
    "step,theta_x,theta_y,reward,grad_x,grad_y,mean_distance,total_priority";

void WriteRunRecordCsv(std::ostream& out, const RunRecord& record);

// Each agent's partial of R at its own parameter, averaged over the other
// agent's actions in the batch.
Gradient BrudGradientMinibatch(const Polynomial2& poly,
                               const JointPolicy& policy,
                               std::span<const JointActionSample> batch);

// The same expectation taken over a whole dataset through its raw moments:
// grad_x = sum_ij c_ij i theta_x^(i-1) E[a_y^j]. Throws kInsufficientMoments
// if the stats do not reach the polynomial's degrees.
Gradient BrudGradientExact(const Polynomial2& poly, const JointPolicy& policy,
                           const DatasetStats& stats);

// theta + lr * gradient, clamped if configured. Throws kNonFiniteGradient.
JointPolicy GradientAscentStep(const JointPolicy& policy,
                               const Gradient& gradient,
                               const LearnConfig& config);

// Static-dataset training. The dataset is loaded into an unbounded buffer
// with unit priorities. With a prioritizer (Minibatch mode only) batches are
// drawn by priority and priorities are refreshed after every update.
RunRecord TrainOffline(const Polynomial2& poly,
                       std::span<const JointActionSample> dataset,
                       const JointPolicy& initial, const LearnConfig& config,
                       const std::optional<PjapConfig>& prioritizer,
                       std::uint64_t seed);

struct OnlineRun {
  RunRecord record;
  ReplayBuffer buffer;
};

// Act with Gaussian exploration, insert into a FIFO buffer (nullopt capacity
// = unbounded), sample a uniform batch and ascend. In kExactMoments mode the
// expectation is taken over the whole buffer instead of a batch.
OnlineRun TrainOnline(const Polynomial2& poly, const JointPolicy& initial,
                      const LearnConfig& config,
                      std::optional<std::size_t> buffer_capacity,
                      std::uint64_t seed);

}  // namespace polybrud

#endif  // POLYBRUD_LEARNER_H_
