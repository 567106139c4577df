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

#include <variant>

#include "cloudnet/solver/problem.hpp"

namespace cloudnet::solver {

struct EmbeddingSolution {
  std::map<std::string, std::string> node_assign;  // request node -> substrate node
  std::map<std::string, Path> link_assign;         // request link -> substrate path
  double objective_value = 0;
  double migration_cost = 0;                       // 0 when the problem has no prior
  std::map<std::string, double> freed_resources;   // vs prior, on nodes going empty
};

struct Infeasible {
  std::string blocking_ne;  // request element the search died on
  std::string reason;
};

struct SolveLimits {
  long max_nodes_expanded = 5'000'000;
  double time_budget_seconds = 30.0;
};

using SolveResult = std::variant<EmbeddingSolution, Infeasible>;

/// Exact branch-and-bound over node assignments and link path choices.
/// Returns the optimal solution under the problem's objective, with fixed
/// lexicographic tie-breaking, so equal inputs yield identical solutions.
/// Throws BudgetExceeded when the limits stop the search before optimality
/// is proven (distinct from Infeasible).
SolveResult solve(const EmbeddingProblem& p, const SolveLimits& limits = {});

struct VnodeMove {
  std::string vnode;
  std::string from;
  std::string to;
};

struct LinkRemap {
  std::string link;
  Path from;
  Path to;
};

struct MigrationPlan {
  EmbeddingSolution solution;
  std::vector<VnodeMove> moves;
  std::vector<LinkRemap> remaps;
};

/// Solves a prior-carrying problem and reports the resulting move list. The
/// plan's migration_cost prices node moves by ram and link re-mappings by
/// bandwidth; freed_resources totals what the plan releases on substrate
/// nodes that end up empty. A plan with zero moves costs zero.
std::variant<MigrationPlan, Infeasible> analyze_migration(const EmbeddingProblem& p,
                                                          const SolveLimits& limits = {});

/// Renders a solution as a mapping layer: node entries carry the vnode's full
/// requested allocations on their single segment; link entries get one
/// segment per path element, each allocated the link's bandwidth.
rdl::MappingLayer to_mapping_layer(const EmbeddingSolution& sol,
                                   const EmbeddingProblem& p);

/// Independent validity check over a solution: candidate membership,
/// assignability, path well-formedness, endpoint agreement, and capacity
/// sums, all recomputed from scratch. Used as the test oracle's gatekeeper
/// and never shares state with solve().
bool check_solution(const EmbeddingProblem& p, const EmbeddingSolution& sol);

/// The congestion a solution induces: the worst allocated/residual ratio
/// across substrate elements, recomputable from the solution alone.
double solution_congestion(const EmbeddingProblem& p, const EmbeddingSolution& sol);

}  // namespace cloudnet::solver
