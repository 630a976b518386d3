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

#include "polybrud/buffer.h"

#include <cmath>
#include <ostream>
#include <string>

#include "polybrud/error.h"
#include "text.h"

namespace polybrud {
namespace {

void CheckPriority(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    Fail(ErrorCode::kInvalidParams, "priorities must be positive and finite");
  }
}

}  // namespace

ReplayBuffer::ReplayBuffer(std::optional<std::size_t> capacity)
    : capacity_(capacity), tree_(capacity.value_or(1)) {
  if (capacity_ && *capacity_ == 0) {
    Fail(ErrorCode::kInvalidParams, "buffer capacity must be positive");
  }
  if (capacity_) {
    slots_.resize(*capacity_);
    slot_ids_.assign(*capacity_, -1);
  }
}

std::size_t ReplayBuffer::SlotOf(EntryId id) const {
  return capacity_ ? static_cast<std::size_t>(id % static_cast<EntryId>(*capacity_))
                   : static_cast<std::size_t>(id);
}

void ReplayBuffer::CheckId(EntryId id) const {
  if (!Contains(id)) {
    Fail(ErrorCode::kUnknownId, "unknown buffer entry id " + std::to_string(id));
  }
}

EntryId ReplayBuffer::Insert(const JointActionSample& sample, double priority) {
  CheckPriority(priority);
  if (!std::isfinite(sample.a_x) || !std::isfinite(sample.a_y)) {
    Fail(ErrorCode::kInvalidParams, "buffer actions must be finite");
  }
  const EntryId id = next_id_;
  JointActionSample stored = sample;
  stored.id = id;
  if (capacity_ && size() == *capacity_) ++oldest_id_;  // FIFO eviction
  const std::size_t slot = SlotOf(id);
  if (!capacity_) {
    slots_.push_back(stored);
    slot_ids_.push_back(id);
    tree_.Reserve(slots_.size());
  } else {
    slots_[slot] = stored;
    slot_ids_[slot] = id;
  }
  tree_.Set(slot, priority);
  ++next_id_;
  return id;
}

SampleBatch ReplayBuffer::MakeBatch(std::vector<EntryId> ids) const {
  SampleBatch batch;
  batch.actions.reserve(ids.size());
  for (EntryId id : ids) batch.actions.push_back(slots_[SlotOf(id)]);
  batch.ids = std::move(ids);
  batch.stats = ComputeStats(batch.actions, 2);
  return batch;
}

SampleBatch ReplayBuffer::SampleUniform(std::size_t batch_size, Rng& rng) const {
  if (empty()) Fail(ErrorCode::kEmptyBuffer, "cannot sample an empty buffer");
  if (batch_size == 0) Fail(ErrorCode::kInvalidParams, "batch size must be >= 1");
  std::vector<EntryId> ids(batch_size);
  const auto n = static_cast<std::uint64_t>(size());
  for (EntryId& id : ids) {
    id = oldest_id_ + static_cast<EntryId>(rng.UniformInt(n));
  }
  return MakeBatch(std::move(ids));
}

SampleBatch ReplayBuffer::SamplePrioritized(std::size_t batch_size,
                                            Rng& rng) const {
  if (empty()) Fail(ErrorCode::kEmptyBuffer, "cannot sample an empty buffer");
  if (batch_size == 0) Fail(ErrorCode::kInvalidParams, "batch size must be >= 1");
  const double total = tree_.Total();
  std::vector<EntryId> ids(batch_size);
  for (EntryId& id : ids) {
    id = slot_ids_[tree_.Find(rng.Uniform() * total)];
  }
  return MakeBatch(std::move(ids));
}

void ReplayBuffer::UpdatePriorities(std::span<const EntryId> ids,
                                    std::span<const double> priorities) {
  if (ids.size() != priorities.size()) {
    Fail(ErrorCode::kInvalidParams, "ids and priorities differ in length");
  }
  for (std::size_t k = 0; k < ids.size(); ++k) {
    CheckId(ids[k]);
    CheckPriority(priorities[k]);
  }
  for (std::size_t k = 0; k < ids.size(); ++k) {
    tree_.Set(SlotOf(ids[k]), priorities[k]);
  }
}

const JointActionSample& ReplayBuffer::Get(EntryId id) const {
  CheckId(id);
  return slots_[SlotOf(id)];
}

double ReplayBuffer::Priority(EntryId id) const {
  CheckId(id);
  return tree_.Get(SlotOf(id));
}

std::vector<JointActionSample> ReplayBuffer::Contents() const {
  std::vector<JointActionSample> out;
  out.reserve(size());
  for (EntryId id = oldest_id_; id < next_id_; ++id) {
    out.push_back(slots_[SlotOf(id)]);
  }
  return out;
}

void ReplayBuffer::DumpCsv(std::ostream& out) const {
  out << "id,a_x,a_y,priority\n";
  for (EntryId id = oldest_id_; id < next_id_; ++id) {
    const std::size_t slot = SlotOf(id);
    out << id << ',' << internal::FormatDouble(slots_[slot].a_x) << ','
        << internal::FormatDouble(slots_[slot].a_y) << ','
        << internal::FormatDouble(tree_.Get(slot)) << '\n';
  }
}

}  // namespace polybrud
