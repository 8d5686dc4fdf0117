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

// Structured-text (JSON) dumps: clusterings, G-part tables and router
// snapshots. Keys are emitted in a fixed order and item maps as ascending
// [item, count] pairs so golden files stay stable.

#ifndef INCSET_SERIALIZATION_H_
#define INCSET_SERIALIZATION_H_

#include <iosfwd>
#include <memory>
#include <span>
#include <string>

#include "incset/clustering.h"
#include "incset/gcpa.h"
#include "incset/layout.h"
#include "incset/router.h"

namespace incset {

inline constexpr int kClusteringDumpVersion = 1;
inline constexpr int kGPartTableVersion = 1;
inline constexpr int kRouterSnapshotVersion = 1;

void WriteClustering(std::ostream& out, const Clustering& clustering);
Clustering ReadClustering(std::istream& in);

void WriteGPartTable(std::ostream& out, std::span<const GPart> g_parts);
std::vector<GPart> ReadGPartTable(std::istream& in);

// The snapshot records the layout's header fields and refuses to load
// against a different layout.
void WriteRouterSnapshot(std::ostream& out, const RealtimeRouter& router);
RealtimeRouter ReadRouterSnapshot(std::istream& in,
                                  std::shared_ptr<const DataLayout> layout);
void SaveRouterSnapshot(const std::string& path, const RealtimeRouter& router);
RealtimeRouter LoadRouterSnapshot(const std::string& path,
                                  std::shared_ptr<const DataLayout> layout);

}  // namespace incset

#endif  // INCSET_SERIALIZATION_H_
