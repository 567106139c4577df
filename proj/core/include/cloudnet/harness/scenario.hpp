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

#include "cloudnet/rdl/graph.hpp"

namespace cloudnet::harness {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  std::map<std::string, double> metrics;  // scenario-specific numbers

  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

/// The canned end-to-end scenarios: star13, rollback, expiry, compaction20.
/// Each boots its own loopback cluster, runs the flow, checks structural
/// assertions and tears everything down. Deterministic.
std::vector<std::string> scenario_names();
ScenarioReport run_scenario(const std::string& name);

/// Fixtures of the compaction scenario, exposed so independent oracles can
/// recompute the expected plan on exactly the same instance.
rdl::TopologyGraph compaction20_substrate();
rdl::TopologyGraph compaction20_request_ol0();

}  // namespace cloudnet::harness
