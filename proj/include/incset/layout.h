// Copyright 2026 The Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Replicated data placement: which machine holds which items, and the
// inverted item -> machines index every cover algorithm reads from.

#ifndef INCSET_LAYOUT_H_
#define INCSET_LAYOUT_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "incset/common.h"

namespace incset {

struct PlacementConfig {
  std::uint32_t universe_size = 10000;
  std::uint32_t machine_count = 50;
  std::uint32_t replication = 3;
  std::uint64_t seed = 1;

  // Throws ConfigError when the invariants do not hold.
  void Validate() const;
};

// Machine id -> sorted item ids.
using MachineMap = std::vector<ItemSet>;
// Item id -> sorted machine ids.
using ItemIndex = std::vector<std::vector<MachineId>>;

ItemIndex InvertLayout(const MachineMap& machines, std::uint32_t universe_size);
ItemIndex InvertLayout(const MachineMap& machines);

// Immutable after construction; safe to share read-only between threads.
class DataLayout {
 public:
  DataLayout() = default;
  DataLayout(MachineMap machines, std::uint32_t universe_size,
             std::uint32_t replication = 0, std::uint64_t seed = 0);

  std::uint32_t universe_size() const { return universe_size_; }
  std::uint32_t machine_count() const {
    return static_cast<std::uint32_t>(machines_.size());
  }
  // Zero when the layout was not produced by GeneratePlacement.
  std::uint32_t replication() const { return replication_; }
  std::uint64_t seed() const { return seed_; }

  const MachineMap& machines() const { return machines_; }
  const ItemIndex& item_index() const { return item_index_; }

  std::span<const ItemId> items_of(MachineId m) const { return machines_[m]; }
  std::span<const MachineId> machines_of(ItemId item) const {
    if (item >= item_index_.size()) return {};
    return item_index_[item];
  }
  bool Holds(MachineId m, ItemId item) const;

  friend bool operator==(const DataLayout&, const DataLayout&) = default;

 private:
  std::uint32_t universe_size_ = 0;
  std::uint32_t replication_ = 0;
  std::uint64_t seed_ = 0;
  MachineMap machines_;
  ItemIndex item_index_;
};

// Places every item on `replication` distinct machines drawn uniformly
// without replacement (partial Fisher-Yates), seeded and deterministic.
DataLayout GeneratePlacement(const PlacementConfig& config);

struct Cover {
  std::vector<MachineId> machines;  // sorted, unique

  std::size_t span() const { return machines.size(); }
  friend bool operator==(const Cover&, const Cover&) = default;
};

// True iff every target item is held by at least one cover machine. Throws
// ValidationError on an unknown machine id.
bool ValidateCover(const Cover& cover, std::span<const ItemId> target,
                   const DataLayout& layout);

// Placement text format:
//   #placement v1 universe=<n> machines=<m> replication=<r> seed=<s>
//   <machine_id>\t<ascending item ids separated by spaces>
void WritePlacement(std::ostream& out, const DataLayout& layout);
DataLayout ReadPlacement(std::istream& in);
void SavePlacement(const std::string& path, const DataLayout& layout);
DataLayout LoadPlacement(const std::string& path);

}  // namespace incset

#endif  // INCSET_LAYOUT_H_
