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

#include "polybrud/learner.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "polybrud/error.h"
#include "polybrud/rng.h"
#include "text.h"

namespace polybrud {
namespace {

// Streams for Rng::Derive, so a run seed equal to a dataset seed still gets
// an independent sampling sequence.
constexpr std::uint64_t kOfflineStream = 0x0ff1;
constexpr std::uint64_t kOnlineStream = 0x0e1e;

// sum_i i e_i t^(i-1) for univariate coefficients e.
double DerivativeAt(std::span<const double> e, double t) {
  double acc = 0.0;
  for (std::size_t i = e.size() - 1; i >= 1; --i) {
    acc = acc * t + static_cast<double>(i) * e[i];
  }
  return acc;
}

double MeanDistance(std::span<const JointActionSample> samples,
                    const JointPolicy& policy) {
  double total = 0.0;
  for (const JointActionSample& s : samples) {
    total += DistanceJointAction(s, policy);
  }
  return total / static_cast<double>(samples.size());
}

RunRow MakeRow(const Polynomial2& poly, const JointPolicy& policy,
               const Gradient& g, double distance, double total_priority) {
  return {policy.update_count, policy.theta_x, policy.theta_y,
          poly.Eval(policy.theta_x, policy.theta_y), g.x, g.y, distance,
          total_priority};
}

}  // namespace

std::string_view GradientModeName(GradientMode mode) {
  switch (mode) {
    case GradientMode::kExactMoments: return "exact_moments";
    case GradientMode::kMinibatch: return "minibatch";
  }
  return "unknown";
}

std::optional<GradientMode> ParseGradientMode(std::string_view name) {
  if (name == "exact_moments") return GradientMode::kExactMoments;
  if (name == "minibatch") return GradientMode::kMinibatch;
  return std::nullopt;
}

void ValidateLearnConfig(const LearnConfig& config) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    Fail(ErrorCode::kInvalidParams, "learning_rate must be > 0");
  }
  if (config.batch_size < 1) {
    Fail(ErrorCode::kInvalidParams, "batch_size must be >= 1");
  }
  if (config.steps < 1) Fail(ErrorCode::kInvalidParams, "steps must be >= 1");
  if (!(config.exploration_noise_sigma >= 0.0) ||
      !std::isfinite(config.exploration_noise_sigma)) {
    Fail(ErrorCode::kInvalidParams, "exploration_noise_sigma must be >= 0");
  }
  if (config.param_clamp &&
      !(config.param_clamp->first < config.param_clamp->second)) {
    Fail(ErrorCode::kInvalidParams, "param_clamp requires low < high");
  }
}

void WriteRunRecordCsv(std::ostream& out, const RunRecord& record) {
  using internal::FormatDouble;
  out << kRunRecordHeader << '\n';
  for (const RunRow& r : record.rows) {
    out << r.step << ',' << FormatDouble(r.theta_x) << ','
        << FormatDouble(r.theta_y) << ',' << FormatDouble(r.reward) << ','
        << FormatDouble(r.grad_x) << ',' << FormatDouble(r.grad_y) << ','
        << FormatDouble(r.mean_distance) << ','
        << FormatDouble(r.total_priority) << '\n';
  }
}

Gradient BrudGradientMinibatch(const Polynomial2& poly,
                               const JointPolicy& policy,
                               std::span<const JointActionSample> batch) {
  if (batch.empty()) Fail(ErrorCode::kEmptyBatch, "gradient of an empty batch");
  const Polynomial2 dx = poly.PartialX();
  const Polynomial2 dy = poly.PartialY();
  Gradient g;
  for (const JointActionSample& s : batch) {
    g.x += dx.Eval(policy.theta_x, s.a_y);
    g.y += dy.Eval(s.a_x, policy.theta_y);
  }
  const double n = static_cast<double>(batch.size());
  g.x /= n;
  g.y /= n;
  return g;
}

Gradient BrudGradientExact(const Polynomial2& poly, const JointPolicy& policy,
                           const DatasetStats& stats) {
  const int m = poly.degree_x();
  const int n = poly.degree_y();
  if (static_cast<int>(stats.moments_y.size()) <= n ||
      static_cast<int>(stats.moments_x.size()) <= m) {
    Fail(ErrorCode::kInsufficientMoments,
         "dataset moments do not reach the polynomial degree");
  }
  // E_y[R(t, y)] = sum_i ex_i t^i with ex_i = sum_j c_ij E[y^j]; likewise for y.
  std::vector<double> ex(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<double> ey(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double c = poly.coeff(i, j);
      ex[i] += c * stats.moments_y[j];
      ey[j] += c * stats.moments_x[i];
    }
  }
  return {DerivativeAt(ex, policy.theta_x), DerivativeAt(ey, policy.theta_y)};
}

JointPolicy GradientAscentStep(const JointPolicy& policy,
                               const Gradient& gradient,
                               const LearnConfig& config) {
  if (!std::isfinite(gradient.x) || !std::isfinite(gradient.y)) {
    Fail(ErrorCode::kNonFiniteGradient, "gradient is not finite");
  }
  JointPolicy next = policy;
  next.theta_x += config.learning_rate * gradient.x;
  next.theta_y += config.learning_rate * gradient.y;
  if (config.param_clamp) {
    const auto [lo, hi] = *config.param_clamp;
    next.theta_x = std::clamp(next.theta_x, lo, hi);
    next.theta_y = std::clamp(next.theta_y, lo, hi);
  }
  ++next.update_count;
  return next;
}

RunRecord TrainOffline(const Polynomial2& poly,
                       std::span<const JointActionSample> dataset,
                       const JointPolicy& initial, const LearnConfig& config,
                       const std::optional<PjapConfig>& prioritizer,
                       std::uint64_t seed) {
  ValidateLearnConfig(config);
  if (dataset.empty()) Fail(ErrorCode::kEmptyDataset, "offline dataset is empty");
  const bool exact = config.gradient_mode == GradientMode::kExactMoments;
  if (prioritizer) {
    ValidatePjapConfig(*prioritizer);
    if (exact) {
      Fail(ErrorCode::kInvalidParams,
           "prioritized sampling requires the minibatch gradient mode");
    }
  }

  Rng rng = Rng::Derive(seed, kOfflineStream);
  ReplayBuffer buffer(std::nullopt);
  for (const JointActionSample& s : dataset) buffer.Insert(s, 1.0);

  DatasetStats stats;
  if (exact) {
    stats = ComputeStats(
        dataset, std::max({2, poly.degree_x(), poly.degree_y()}));
  }

  RunRecord record;
  record.rows.reserve(static_cast<std::size_t>(config.steps) + 1);
  JointPolicy policy = initial;
  policy.update_count = 0;
  record.rows.push_back(MakeRow(poly, policy, {}, 0.0, buffer.TotalPriority()));

  for (std::int64_t k = 0; k < config.steps; ++k) {
    Gradient g;
    double distance = 0.0;
    if (exact) {
      g = BrudGradientExact(poly, policy, stats);
      distance = MeanDistance(dataset, policy);
      policy = GradientAscentStep(policy, g, config);
    } else {
      const SampleBatch batch =
          prioritizer ? buffer.SamplePrioritized(config.batch_size, rng)
                      : buffer.SampleUniform(config.batch_size, rng);
      g = BrudGradientMinibatch(poly, policy, batch.actions);
      distance = MeanDistance(batch.actions, policy);
      policy = GradientAscentStep(policy, g, config);
      if (prioritizer) Refresh(buffer, policy, *prioritizer, batch.ids, rng);
    }
    record.rows.push_back(
        MakeRow(poly, policy, g, distance, buffer.TotalPriority()));
  }
  return record;
}

OnlineRun TrainOnline(const Polynomial2& poly, const JointPolicy& initial,
                      const LearnConfig& config,
                      std::optional<std::size_t> buffer_capacity,
                      std::uint64_t seed) {
  ValidateLearnConfig(config);
  if (buffer_capacity && *buffer_capacity < config.batch_size) {
    Fail(ErrorCode::kInvalidParams, "buffer capacity must be >= batch_size");
  }
  const bool exact = config.gradient_mode == GradientMode::kExactMoments;
  const int powers = std::max({2, poly.degree_x(), poly.degree_y()});

  Rng rng = Rng::Derive(seed, kOnlineStream);
  OnlineRun run{RunRecord{}, ReplayBuffer(buffer_capacity)};
  ReplayBuffer& buffer = run.buffer;
  run.record.rows.reserve(static_cast<std::size_t>(config.steps) + 1);
  JointPolicy policy = initial;
  policy.update_count = 0;
  run.record.rows.push_back(MakeRow(poly, policy, {}, 0.0, 0.0));

  for (std::int64_t k = 0; k < config.steps; ++k) {
    JointActionSample act;
    act.a_x = policy.theta_x + config.exploration_noise_sigma * rng.Normal();
    act.a_y = policy.theta_y + config.exploration_noise_sigma * rng.Normal();
    act.id = k;
    buffer.Insert(act, buffer.empty() ? 1.0 : buffer.MaxPriority());

    Gradient g;
    double distance = 0.0;
    if (exact) {
      const std::vector<JointActionSample> contents = buffer.Contents();
      g = BrudGradientExact(poly, policy, ComputeStats(contents, powers));
      distance = MeanDistance(contents, policy);
    } else {
      const SampleBatch batch = buffer.SampleUniform(config.batch_size, rng);
      g = BrudGradientMinibatch(poly, policy, batch.actions);
      distance = MeanDistance(batch.actions, policy);
    }
    policy = GradientAscentStep(policy, g, config);
    run.record.rows.push_back(
        MakeRow(poly, policy, g, distance, buffer.TotalPriority()));
  }
  return run;
}

}  // namespace polybrud
