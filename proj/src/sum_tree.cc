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

#include "polybrud/sum_tree.h"

#include <algorithm>
#include <cmath>

namespace polybrud {

SumTree::SumTree(std::size_t min_leaves) : leaves_(1) {
  while (leaves_ < min_leaves) leaves_ *= 2;
  sum_.assign(2 * leaves_, 0.0);
  max_.assign(2 * leaves_, 0.0);
}

void SumTree::Reserve(std::size_t min_leaves) {
  if (min_leaves <= leaves_) return;
  SumTree grown(min_leaves);
  for (std::size_t i = 0; i < leaves_; ++i) {
    grown.sum_[grown.leaves_ + i] = sum_[leaves_ + i];
    grown.max_[grown.leaves_ + i] = max_[leaves_ + i];
  }
  for (std::size_t node = grown.leaves_ - 1; node >= 1; --node) {
    grown.Refresh(node);
  }
  *this = std::move(grown);
}

void SumTree::Refresh(std::size_t node) {
  sum_[node] = sum_[2 * node] + sum_[2 * node + 1];
  max_[node] = std::max(max_[2 * node], max_[2 * node + 1]);
}

void SumTree::Set(std::size_t leaf, double value) {
  std::size_t node = leaves_ + leaf;
  sum_[node] = value;
  max_[node] = value;
  for (node /= 2; node >= 1; node /= 2) Refresh(node);
}

std::size_t SumTree::Find(double mass) const {
  std::size_t node = 1;
  while (node < leaves_) {
    const double left = sum_[2 * node];
    const double right = sum_[2 * node + 1];
    if (mass < left || right <= 0.0) {
      node = 2 * node;
    } else {
      mass -= left;
      node = 2 * node + 1;
    }
  }
  return node - leaves_;
}

double SumTree::MaxSumDefect() const {
  double worst = 0.0;
  for (std::size_t node = 1; node < leaves_; ++node) {
    const double expect = sum_[2 * node] + sum_[2 * node + 1];
    const double scale = std::max(1.0, std::abs(expect));
    worst = std::max(worst, std::abs(sum_[node] - expect) / scale);
  }
  return worst;
}

}  // namespace polybrud
