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

#include "cloudnet/rdl/graph.hpp"
#include "cloudnet/solver/solve.hpp"

namespace cloudnet::pip {

struct NeighborConfig {
  double transit_bandwidth = 0;  // mbit available towards this neighbor
  std::string attach;            // tunnel bridge node the transit lands on
};

struct PipConfig {
  std::string pip_id;
  rdl::TopologyGraph substrate;  // UL, pre-augmentation
  int vlan_lo = 100;
  int vlan_hi = 199;
  double ttl_seconds = 600;
  std::map<std::string, NeighborConfig> neighbors;  // pip id -> transit
  std::map<std::string, std::string> feature_defaults;
  bool cache_enabled = true;
  solver::ObjectiveSpec objective;  // placement objective for new requests
  solver::MigrationCosts costs;
  solver::SolveLimits limits;
  int max_path_elements = 4;
};

/// Loads a daemon config from JSON; the substrate graph comes from the
/// `.cng` file named inside, resolved relative to the config's directory.
/// Returns the config plus the log directory (if configured).
std::pair<PipConfig, std::string> load_pip_config(const std::string& path);

}  // namespace cloudnet::pip
