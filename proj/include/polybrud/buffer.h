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

#ifndef POLYBRUD_BUFFER_H_
#define POLYBRUD_BUFFER_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "polybrud/datasets.h"
#include "polybrud/rng.h"
#include "polybrud/sum_tree.h"
#include "polybrud/types.h"

namespace polybrud {

// Entry ids are insertion sequence numbers: the n-th insert returns n - 1.
// An id stays valid until the entry is evicted.
using EntryId = std::int64_t;

struct SampleBatch {
  std::vector<EntryId> ids;
  std::vector<JointActionSample> actions;
  DatasetStats stats;  // moments up to power 2
};

// Replay buffer with FIFO eviction and a sum-tree over per-entry priorities.
// Single writer; sampling is const and may run concurrently with other
// readers, never with a writer.
class ReplayBuffer {
 public:
  // std::nullopt means unbounded.
  explicit ReplayBuffer(std::optional<std::size_t> capacity);

  std::optional<std::size_t> capacity() const { return capacity_; }
  std::size_t size() const { return static_cast<std::size_t>(next_id_ - oldest_id_); }
  bool empty() const { return next_id_ == oldest_id_; }

  EntryId oldest_id() const { return oldest_id_; }
  EntryId next_id() const { return next_id_; }
  bool Contains(EntryId id) const { return id >= oldest_id_ && id < next_id_; }

  // Evicts the oldest entry first when full. `priority` must be positive and
  // finite.
  EntryId Insert(const JointActionSample& sample, double priority);

  // With replacement, uniform over current entries.
  SampleBatch SampleUniform(std::size_t batch_size, Rng& rng) const;

  // With replacement, P(e) = priority(e) / TotalPriority().
  SampleBatch SamplePrioritized(std::size_t batch_size, Rng& rng) const;

  // Throws kUnknownId for ids not currently stored; nothing is written in
  // that case.
  void UpdatePriorities(std::span<const EntryId> ids,
                        std::span<const double> priorities);

  const JointActionSample& Get(EntryId id) const;
  double Priority(EntryId id) const;
  double TotalPriority() const { return tree_.Total(); }
  // 0 when empty.
  double MaxPriority() const { return tree_.Max(); }

  // Oldest to newest.
  std::vector<JointActionSample> Contents() const;

  const SumTree& tree() const { return tree_; }

  // CSV with header `id,a_x,a_y,priority`, oldest entry first; `id` is the
  // entry id.
  void DumpCsv(std::ostream& out) const;

 private:
  std::size_t SlotOf(EntryId id) const;
  void CheckId(EntryId id) const;
  SampleBatch MakeBatch(std::vector<EntryId> ids) const;

  std::optional<std::size_t> capacity_;
  std::vector<JointActionSample> slots_;
  std::vector<EntryId> slot_ids_;
  SumTree tree_;
  EntryId oldest_id_ = 0;
  EntryId next_id_ = 0;
};

}  // namespace polybrud

#endif  // POLYBRUD_BUFFER_H_
