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

#include "incset/layout.h"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "text_util.h"

namespace incset {

void PlacementConfig::Validate() const {
  if (universe_size < 1) throw ConfigError("universe_size must be >= 1");
  if (machine_count < 1) throw ConfigError("machine_count must be >= 1");
  if (replication < 1) throw ConfigError("replication must be >= 1");
  if (replication > machine_count) {
    throw ConfigError("replication (" + std::to_string(replication) +
                      ") exceeds machine_count (" +
                      std::to_string(machine_count) + ")");
  }
}

ItemIndex InvertLayout(const MachineMap& machines,
                       std::uint32_t universe_size) {
  ItemIndex index(universe_size);
  for (MachineId m = 0; m < machines.size(); ++m) {
    for (ItemId item : machines[m]) {
      if (item >= universe_size) {
        throw ValidationError("item " + std::to_string(item) +
                              " outside universe of size " +
                              std::to_string(universe_size));
      }
      index[item].push_back(m);  // ascending since m ascends
    }
  }
  return index;
}

ItemIndex InvertLayout(const MachineMap& machines) {
  std::uint32_t universe = 0;
  for (const auto& items : machines) {
    if (!items.empty()) universe = std::max(universe, items.back() + 1);
  }
  return InvertLayout(machines, universe);
}

DataLayout::DataLayout(MachineMap machines, std::uint32_t universe_size,
                       std::uint32_t replication, std::uint64_t seed)
    : universe_size_(universe_size),
      replication_(replication),
      seed_(seed),
      machines_(std::move(machines)) {
  for (auto& items : machines_) Normalize(items);
  item_index_ = InvertLayout(machines_, universe_size_);
}

bool DataLayout::Holds(MachineId m, ItemId item) const {
  const auto& items = machines_[m];
  return std::binary_search(items.begin(), items.end(), item);
}

DataLayout GeneratePlacement(const PlacementConfig& config) {
  config.Validate();
  Rng rng(config.seed);
  MachineMap machines(config.machine_count);
  std::vector<MachineId> pool(config.machine_count);
  for (ItemId item = 0; item < config.universe_size; ++item) {
    std::iota(pool.begin(), pool.end(), 0);
    for (std::uint32_t k = 0; k < config.replication; ++k) {
      const auto j = k + rng.Uniform(config.machine_count - k);
      std::swap(pool[k], pool[j]);
      machines[pool[k]].push_back(item);  // items ascend per machine
    }
  }
  return DataLayout(std::move(machines), config.universe_size,
                    config.replication, config.seed);
}

bool ValidateCover(const Cover& cover, std::span<const ItemId> target,
                   const DataLayout& layout) {
  for (MachineId m : cover.machines) {
    if (m >= layout.machine_count()) {
      throw ValidationError("unknown machine id " + std::to_string(m));
    }
  }
  for (ItemId item : target) {
    bool held = false;
    for (MachineId m : cover.machines) {
      if (layout.Holds(m, item)) {
        held = true;
        break;
      }
    }
    if (!held) return false;
  }
  return true;
}

void WritePlacement(std::ostream& out, const DataLayout& layout) {
  std::string buf = "#placement v1 universe=" +
                    std::to_string(layout.universe_size()) +
                    " machines=" + std::to_string(layout.machine_count()) +
                    " replication=" + std::to_string(layout.replication()) +
                    " seed=" + std::to_string(layout.seed()) + "\n";
  for (MachineId m = 0; m < layout.machine_count(); ++m) {
    buf += std::to_string(m);
    buf.push_back('\t');
    internal::AppendIdList(buf, layout.items_of(m));
    buf.push_back('\n');
  }
  out << buf;
}

namespace {

struct PlacementHeader {
  std::uint32_t universe = 0;
  std::uint32_t machines = 0;
  std::uint32_t replication = 0;
  std::uint64_t seed = 0;
};

PlacementHeader ParseHeader(std::string_view line) {
  constexpr std::string_view kMagic = "#placement v1";
  if (line.substr(0, kMagic.size()) != kMagic) {
    throw ParseError("expected '#placement v1' header", 1);
  }
  PlacementHeader header;
  bool seen[4] = {false, false, false, false};
  std::string_view rest = line.substr(kMagic.size());
  while (!(rest = internal::Trim(rest)).empty()) {
    const auto space = rest.find(' ');
    const std::string_view field = rest.substr(0, space);
    rest = space == std::string_view::npos ? std::string_view{}
                                           : rest.substr(space);
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("malformed header field '" + std::string(field) + "'",
                       1);
    }
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    auto need = [&](auto parsed) {
      if (!parsed) {
        throw ParseError("bad value for '" + std::string(key) + "'", 1);
      }
      return *parsed;
    };
    if (key == "universe") {
      header.universe = need(internal::ParseUnsigned<std::uint32_t>(value));
      seen[0] = true;
    } else if (key == "machines") {
      header.machines = need(internal::ParseUnsigned<std::uint32_t>(value));
      seen[1] = true;
    } else if (key == "replication") {
      header.replication =
          need(internal::ParseUnsigned<std::uint32_t>(value));
      seen[2] = true;
    } else if (key == "seed") {
      header.seed = need(internal::ParseUnsigned<std::uint64_t>(value));
      seen[3] = true;
    } else {
      throw ParseError("unknown header field '" + std::string(key) + "'", 1);
    }
  }
  if (!(seen[0] && seen[1] && seen[2] && seen[3])) {
    throw ParseError("header must set universe, machines, replication, seed",
                     1);
  }
  return header;
}

}  // namespace

DataLayout ReadPlacement(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty placement file", 1);
  const PlacementHeader header = ParseHeader(internal::Trim(line));
  MachineMap machines(header.machines);
  std::vector<bool> seen(header.machines, false);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (internal::Trim(view).empty()) continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("expected '<machine_id>\\t<items>'", line_no);
    }
    auto id = internal::ParseUnsigned<std::uint32_t>(view.substr(0, tab));
    if (!id) throw ParseError("bad machine id", line_no);
    if (*id >= header.machines) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": machine id " + std::to_string(*id) +
                            " out of range");
    }
    if (seen[*id]) throw ParseError("duplicate machine id", line_no);
    seen[*id] = true;
    auto items = internal::ParseIdList(view.substr(tab + 1));
    if (!items) throw ParseError("bad item id", line_no);
    for (ItemId item : *items) {
      if (item >= header.universe) {
        throw ValidationError("line " + std::to_string(line_no) + ": item " +
                              std::to_string(item) + " outside universe");
      }
    }
    machines[*id] = std::move(*items);
  }
  return DataLayout(std::move(machines), header.universe, header.replication,
                    header.seed);
}

void SavePlacement(const std::string& path, const DataLayout& layout) {
  auto out = internal::OpenForWrite(path);
  WritePlacement(out, layout);
}

DataLayout LoadPlacement(const std::string& path) {
  auto in = internal::OpenForRead(path);
  return ReadPlacement(in);
}

}  // namespace incset
