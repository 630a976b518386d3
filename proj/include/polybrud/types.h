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

#ifndef POLYBRUD_TYPES_H_
#define POLYBRUD_TYPES_H_

#include <cstdint>

namespace polybrud {

struct JointAction {
  double a_x = 0.0;
  double a_y = 0.0;
};

// A joint action stored in a dataset or buffer. `id` is the sample's index
// within the dataset it was generated into (or read from).
struct JointActionSample : JointAction {
  std::int64_t id = 0;
};

// Linear-unit deterministic policies: each agent's action is its parameter.
struct JointPolicy {
  double theta_x = 0.0;
  double theta_y = 0.0;
  std::int64_t update_count = 0;
};

struct Gradient {
  double x = 0.0;
  double y = 0.0;
};

}  // namespace polybrud

#endif  // POLYBRUD_TYPES_H_
