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
#include <set>
#include <string>

#include "cloudnet/rdl/graph.hpp"

namespace cloudnet::rdl {

/// Sums the given resource kind across all node elements of a substrate
/// graph. This is the aggregation a PIP exposes instead of its topology.
/// Requires g.layer == UL.
double aggregate_resources(const TopologyGraph& g, const std::string& kind);

/// All resource kinds declared on node elements, with their aggregates.
std::map<std::string, double> aggregate_all(const TopologyGraph& g);

struct ExtractOptions {
  std::string new_id;
  std::optional<Layer> layer;            // default: keep source layer
  std::set<std::string> allow_dangling;  // link NE ids that may lose an endpoint
};

/// Induced subgraph over `ne_ids`. Interfaces whose peer falls outside the
/// selection become unpeered; a selected link losing an endpoint this way is
/// an error unless listed in `allow_dangling`. The source graph is untouched.
TopologyGraph extract_partial(const TopologyGraph& g,
                              const std::set<std::string>& ne_ids,
                              const ExtractOptions& options);

/// Vagueness resolution: every `unspecified` feature value is replaced from
/// `feature_defaults`; all members of a consistency group receive one common
/// value (an already-specified member wins, otherwise the default). Node
/// elements gain any missing `resource_defaults`. The result carries the same
/// id and layer OL1. Throws ConflictingGroup when a group already holds two
/// different specified values.
TopologyGraph completed_with_defaults(
    const TopologyGraph& g,
    const std::map<std::string, std::string>& feature_defaults,
    const std::map<std::string, double>& resource_defaults);

}  // namespace cloudnet::rdl
