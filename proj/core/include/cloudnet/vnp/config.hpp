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

namespace cloudnet::vnp {

struct VnpConfig {
  std::string vnp_id = "vnp0";

  /// The VNP's own substrate: one `/node/host/pip` element per provider and
  /// `/link/transit` links between them. Aggregates get refreshed by sync.
  rdl::TopologyGraph transit;

  std::map<std::string, std::string> endpoints;  // pip NE id -> host:port

  int transit_vlan_lo = 2000;
  int transit_vlan_hi = 2099;

  std::map<std::string, std::string> feature_defaults;   // e.g. arch -> amd64
  std::map<std::string, double> resource_defaults = {{"ram", 256}, {"cpu", 1}};

  solver::ObjectiveSpec objective;
  solver::MigrationCosts costs;
  solver::SolveLimits limits;
  double call_timeout_seconds = 10.0;
};

std::pair<VnpConfig, std::string> load_vnp_config(const std::string& path);

}  // namespace cloudnet::vnp
