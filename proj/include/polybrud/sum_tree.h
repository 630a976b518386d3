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

#ifndef POLYBRUD_SUM_TREE_H_
#define POLYBRUD_SUM_TREE_H_

#include <cstddef>
#include <vector>

namespace polybrud {

// Array-backed binary tree over non-negative leaf values. Node k has children
// 2k and 2k+1; leaves occupy [leaf_capacity, 2 * leaf_capacity). Every
// internal node stores both the sum and the max of its subtree, recomputed
// from the children on each write (never accumulated as deltas), so the sums
// stay consistent to rounding of a single addition per level.
class SumTree {
 public:
  explicit SumTree(std::size_t min_leaves = 1);

  std::size_t leaf_capacity() const { return leaves_; }

  // Doubles the leaf capacity until it holds `min_leaves`; existing leaf
  // values are kept.
  void Reserve(std::size_t min_leaves);

  void Set(std::size_t leaf, double value);
  double Get(std::size_t leaf) const { return sum_[leaves_ + leaf]; }

  double Total() const { return sum_[1]; }
  double Max() const { return max_[1]; }

  // Leaf whose cumulative range [prefix, prefix + value) contains `mass`,
  // for 0 <= mass < Total(). Never returns a zero-valued leaf while Total()
  // is positive; masses at or beyond Total() map to the last positive leaf.
  std::size_t Find(double mass) const;

  // Largest |node - (left + right)| over internal nodes, relative to the
  // node's magnitude (absolute when the node is below 1).
  double MaxSumDefect() const;

 private:
  void Refresh(std::size_t node);

  std::size_t leaves_;
  std::vector<double> sum_;
  std::vector<double> max_;
};

}  // namespace polybrud

#endif  // POLYBRUD_SUM_TREE_H_
