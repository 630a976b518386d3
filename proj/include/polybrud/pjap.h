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

#ifndef POLYBRUD_PJAP_H_
#define POLYBRUD_PJAP_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "polybrud/buffer.h"
#include "polybrud/rng.h"
#include "polybrud/types.h"

namespace polybrud {

// Proximal joint-action prioritisation: stored joint actions close to the
// current joint policy are sampled more often.

enum class DistanceKind {
  kJointActionL1,      // |a_x - theta_x| + |a_y - theta_y|
  kTrajectoryMeanL1,   // the same sum divided by N * T (= 2 for one sample)
};

std::string_view DistanceKindName(DistanceKind kind);
std::optional<DistanceKind> ParseDistanceKind(std::string_view name);

struct PjapConfig {
  double alpha = 5.0;             // Gaussian sharpness
  double epsilon = 0.01;          // priority floor, in (0, 1]
  double refresh_fraction = 0.1;  // share of the buffer refreshed per update
  DistanceKind distance = DistanceKind::kJointActionL1;
};

void ValidatePjapConfig(const PjapConfig& config);

double DistanceJointAction(const JointAction& action, const JointPolicy& policy);

// Mean per-agent, per-step L1 distance of a stored action sequence to the
// policy outputs. Throws kEmptyTrajectory on an empty sequence.
double DistanceTrajectory(std::span<const JointAction> trajectory,
                          const JointPolicy& policy);

// Distance of one stored sample under the configured measure.
double SampleDistance(const JointAction& action, const JointPolicy& policy,
                      DistanceKind kind);

// max(exp(-alpha d^2), epsilon). Throws kNegativeDistance for d < 0.
double Priority(double distance, const PjapConfig& config);

// Recomputes priorities for the unique ids in `recent` plus uniformly chosen
// distinct entries up to ceil(refresh_fraction * size) in total. Returns the
// number of entries refreshed.
std::size_t Refresh(ReplayBuffer& buffer, const JointPolicy& policy,
                    const PjapConfig& config, std::span<const EntryId> recent,
                    Rng& rng);

}  // namespace polybrud

#endif  // POLYBRUD_PJAP_H_
