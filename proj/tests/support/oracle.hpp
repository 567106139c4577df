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

#include <array>
#include <map>
#include <string>

#include "cloudnet/solver/problem.hpp"

namespace cloudnet::testing {

/// Outcome of exhaustive enumeration over all node assignments and all
/// candidate path combinations. Shares nothing with the production search:
/// plain recursion, allocations recomputed from the ground up.
struct OracleResult {
  bool feasible = false;
  std::array<double, 3> tuple{0, 0, 0};  // objective ordering, mode-dependent
  std::map<std::string, std::string> node_assign;
  std::map<std::string, solver::Path> link_assign;
  double congestion = 0;
  double migration_cost = 0;
  int used_hosts = 0;
  long solutions_seen = 0;
};

OracleResult brute_force(const solver::EmbeddingProblem& p);

}  // namespace cloudnet::testing
