// Copyright 2026 The CloudNet Authors
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

#pragma once

#include <map>
#include <string>
#include <vector>

namespace cloudnet::rdl {

/// One substrate element touched by a mapped overlay element, together with
/// the amounts allocated on it.
struct MappingSegment {
  std::string ul_id;
  std::map<std::string, double> allocations;  // kind -> amount

  auto operator<=>(const MappingSegment&) const = default;
};

/// Placement of one overlay element. Node entries have exactly one segment;
/// link entries list every substrate node element along the chosen path, in
/// path order.
struct MappingEntry {
  std::string ol_id;
  std::vector<MappingSegment> segments;

  auto operator<=>(const MappingEntry&) const = default;
};

/// Where a request graph lives on a substrate. Entries are kept sorted by
/// overlay id so mappings serialize canonically.
struct MappingLayer {
  std::string request_graph_id;
  std::vector<MappingEntry> entries;
  std::map<std::string, int> vlan_by_link;  // ol link id -> VLAN tag

  const MappingEntry* entry(const std::string& ol_id) const {
    for (const auto& e : entries)
      if (e.ol_id == ol_id) return &e;
    return nullptr;
  }

  void sort_entries();

  auto operator<=>(const MappingLayer&) const = default;
};

}  // namespace cloudnet::rdl
