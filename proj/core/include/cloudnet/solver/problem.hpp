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
#include <optional>
#include <string>
#include <vector>

#include "cloudnet/rdl/graph.hpp"
#include "cloudnet/rdl/mapping.hpp"

namespace cloudnet::solver {

/// A substrate path a virtual link can be embedded on: the sequence of
/// substrate node elements it touches. A single-element path places the link
/// entirely on one node (both endpoints co-located).
using Path = std::vector<std::string>;

struct ObjectiveSpec {
  enum class Mode {
    MinCongestion,   // minimize the worst allocated/capacity ratio
    Compact,         // minimize the number of substrate nodes hosting vnodes
    MigrationAware,  // minimize alpha * congestion + beta * migration cost
  };

  Mode mode = Mode::MinCongestion;
  double alpha = 1.0;  // placement weight (MigrationAware)
  double beta = 1.0;   // migration cost weight (MigrationAware)
};

std::string to_string(ObjectiveSpec::Mode mode);
ObjectiveSpec::Mode parse_objective_mode(const std::string& text);

/// Unit costs of moving things. Node moves are priced per mib of ram, link
/// re-mappings per mbit of bandwidth.
struct MigrationCosts {
  double node_move_per_mib = 1.0;
  double link_remap_per_mbit = 0.1;
};

/// Per-element residual capacities: kind -> amount still available, after all
/// allocations the caller wants counted (confirmed and preliminary alike).
using ResidualMap = std::map<std::string, std::map<std::string, double>>;

struct EmbeddingProblem {
  rdl::TopologyGraph substrate;  // UL
  rdl::TopologyGraph request;    // OL1

  /// request node id -> admissible substrate node ids (type + features).
  std::map<std::string, std::vector<std::string>> candidate_map;

  /// request link id -> (endpoint assignment pair -> admissible paths).
  /// Keyed by the assignment of the link's (first, second) endpoint, where
  /// endpoint order follows link_endpoints().
  std::map<std::string, std::map<std::pair<std::string, std::string>, std::vector<Path>>>
      candidate_paths;

  /// request link id -> its endpoints in candidate_paths key order.
  std::map<std::string, std::pair<std::string, std::string>> link_ends;

  ResidualMap capacities;
  ObjectiveSpec objective;
  std::optional<rdl::MappingLayer> prior;  // for migration analysis
  MigrationCosts costs;
  int max_path_elements = 4;

  double residual(const std::string& ul_id, const std::string& kind) const;
};

struct BuildOptions {
  std::optional<ResidualMap> residuals;  // default: full substrate capacities
  std::optional<rdl::MappingLayer> prior;
  MigrationCosts costs;
  int max_path_elements = 4;
};

/// Assembles the embedding problem: candidate nodes from assignability plus
/// feature equality (a specified request feature must match when the
/// candidate carries that key), candidate paths from simple-path enumeration
/// up to the length cap. Throws NoCandidates when some request element ends
/// up with an empty candidate set, InvalidGraph when either graph is broken.
EmbeddingProblem build_problem(const rdl::TopologyGraph& substrate,
                               const rdl::TopologyGraph& request,
                               const ObjectiveSpec& objective,
                               const BuildOptions& options = {});

/// Derives full residual capacities from a substrate's declared resources
/// (shareable resources are not capacity-tracked and are skipped).
ResidualMap full_capacities(const rdl::TopologyGraph& substrate);

/// The substrate link element connecting two adjacent substrate nodes, if
/// any. Parallel links between the same node pair are not supported; the
/// lexicographically smallest link id wins.
std::optional<std::string> connecting_link(const rdl::TopologyGraph& substrate,
                                           const std::string& a, const std::string& b);

/// Everything a mapping allocates per substrate element, including the
/// bandwidth implied on the substrate links between consecutive path
/// segments. Residual computation and conservation checks both build on it.
ResidualMap mapping_allocations(const rdl::MappingLayer& ml,
                                const rdl::TopologyGraph& substrate);

}  // namespace cloudnet::solver
