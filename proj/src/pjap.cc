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

#include "polybrud/pjap.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "polybrud/error.h"

namespace polybrud {

std::string_view DistanceKindName(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kJointActionL1: return "joint_action_l1";
    case DistanceKind::kTrajectoryMeanL1: return "trajectory_mean_l1";
  }
  return "unknown";
}

std::optional<DistanceKind> ParseDistanceKind(std::string_view name) {
  if (name == "joint_action_l1") return DistanceKind::kJointActionL1;
  if (name == "trajectory_mean_l1") return DistanceKind::kTrajectoryMeanL1;
  return std::nullopt;
}

void ValidatePjapConfig(const PjapConfig& config) {
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) {
    Fail(ErrorCode::kInvalidParams, "pjap.alpha must be > 0");
  }
  if (!(config.epsilon > 0.0 && config.epsilon <= 1.0)) {
    Fail(ErrorCode::kInvalidParams, "pjap.epsilon must lie in (0, 1]");
  }
  if (!(config.refresh_fraction > 0.0 && config.refresh_fraction <= 1.0)) {
    Fail(ErrorCode::kInvalidParams, "pjap.refresh_fraction must lie in (0, 1]");
  }
}

double DistanceJointAction(const JointAction& action, const JointPolicy& policy) {
  return std::abs(action.a_x - policy.theta_x) +
         std::abs(action.a_y - policy.theta_y);
}

double DistanceTrajectory(std::span<const JointAction> trajectory,
                          const JointPolicy& policy) {
  if (trajectory.empty()) {
    Fail(ErrorCode::kEmptyTrajectory, "trajectory must contain at least one step");
  }
  constexpr double kAgents = 2.0;
  double total = 0.0;
  for (const JointAction& a : trajectory) total += DistanceJointAction(a, policy);
  return total / (kAgents * static_cast<double>(trajectory.size()));
}

double SampleDistance(const JointAction& action, const JointPolicy& policy,
                      DistanceKind kind) {
  if (kind == DistanceKind::kTrajectoryMeanL1) {
    return DistanceTrajectory(std::span<const JointAction>(&action, 1), policy);
  }
  return DistanceJointAction(action, policy);
}

double Priority(double distance, const PjapConfig& config) {
  if (distance < 0.0 || std::isnan(distance)) {
    Fail(ErrorCode::kNegativeDistance, "distance must be >= 0");
  }
  return std::max(std::exp(-config.alpha * distance * distance), config.epsilon);
}

std::size_t Refresh(ReplayBuffer& buffer, const JointPolicy& policy,
                    const PjapConfig& config, std::span<const EntryId> recent,
                    Rng& rng) {
  if (buffer.empty()) Fail(ErrorCode::kEmptyBuffer, "cannot refresh an empty buffer");
  const std::size_t size = buffer.size();
  const auto quota = std::min(
      size, static_cast<std::size_t>(
                std::ceil(config.refresh_fraction * static_cast<double>(size))));

  std::vector<EntryId> ids;
  std::unordered_set<EntryId> chosen;
  ids.reserve(std::max(quota, recent.size()));
  for (EntryId id : recent) {
    if (!buffer.Contains(id)) {
      Fail(ErrorCode::kUnknownId, "refresh of unknown entry " + std::to_string(id));
    }
    if (chosen.insert(id).second) ids.push_back(id);
  }
  if (quota == size) {
    for (EntryId id = buffer.oldest_id(); id < buffer.next_id(); ++id) {
      if (chosen.insert(id).second) ids.push_back(id);
    }
  } else {
    while (ids.size() < quota) {
      const EntryId id = buffer.oldest_id() +
                         static_cast<EntryId>(rng.UniformInt(size));
      if (chosen.insert(id).second) ids.push_back(id);
    }
  }

  std::vector<double> priorities;
  priorities.reserve(ids.size());
  for (EntryId id : ids) {
    priorities.push_back(
        Priority(SampleDistance(buffer.Get(id), policy, config.distance), config));
  }
  buffer.UpdatePriorities(ids, priorities);
  return ids.size();
}

}  // namespace polybrud
