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

#include "cloudnet/solver/solve.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <limits>
#include <set>
#include <stdexcept>

#include "cloudnet/common/errors.hpp"

namespace cloudnet::solver {

namespace {

// Capacity comparisons absorb accumulated floating dust from fractional
// amounts. Test instances use integral amounts, so exactness is unaffected.
constexpr double kCapacityEpsilon = 1e-9;

using Tuple = std::array<double, 3>;

struct NodeDemand {
  std::string kind;
  double amount;
};

/// Tracked/free classification of one allocation: shareable resources (on
/// either side) are hosted without consuming capacity.
struct Engine {
  const EmbeddingProblem& p;
  const SolveLimits& limits;

  std::vector<std::string> node_ids;
  std::vector<std::string> link_ids;
  std::map<std::string, std::vector<NodeDemand>> node_demand;   // tracked kinds only
  std::map<std::string, double> link_bandwidth;                 // tracked links only
  std::map<std::string, std::set<std::string>> substrate_shareable;
  std::map<std::pair<std::string, std::string>, std::string> link_between;
  std::map<std::string, std::vector<std::size_t>> links_ready_at;  // node idx -> links
  std::map<std::string, std::string> prior_host;
  std::map<std::string, Path> prior_path;

  // search state
  std::map<std::string, std::map<std::string, double>> used;
  std::map<std::string, std::string> assign;
  std::map<std::string, Path> chosen;
  std::map<std::string, int> vnodes_on;
  double congestion = 0;
  double cost = 0;
  int used_hosts = 0;

  // incumbent
  bool have_best = false;
  Tuple best_tuple{};
  std::map<std::string, std::string> best_assign;
  std::map<std::string, Path> best_chosen;
  double best_congestion = 0;
  double best_cost = 0;

  long expanded = 0;
  std::chrono::steady_clock::time_point deadline;
  std::size_t deepest_index = 0;
  std::string deepest_element;

  explicit Engine(const EmbeddingProblem& problem, const SolveLimits& lim)
      : p(problem), limits(lim) {}

  void prepare() {
    for (const auto& [id, _] : p.candidate_map) node_ids.push_back(id);
    for (const auto& [id, _] : p.candidate_paths) link_ids.push_back(id);

    for (const auto& [id, ne] : p.substrate.elements()) {
      for (const auto& r : ne.resources)
        if (r.shareable) substrate_shareable[id].insert(r.kind);
      if (!ne.is_link()) continue;
      auto ends = p.substrate.link_endpoints(ne);
      if (!ends) continue;
      auto key = std::minmax(ends->first, ends->second);
      auto [it, inserted] = link_between.emplace(std::make_pair(key.first, key.second), id);
      if (!inserted && id < it->second) it->second = id;
    }

    for (const auto& v : node_ids) {
      const rdl::NetworkElement& ne = *p.request.element(v);
      auto& demand = node_demand[v];
      for (const auto& r : ne.resources)
        if (!r.shareable) demand.push_back({r.kind, r.amount});
    }
    for (const auto& l : link_ids) {
      const rdl::NetworkElement& ne = *p.request.element(l);
      const rdl::Resource* bw = ne.resource("bandwidth");
      link_bandwidth[l] = (bw != nullptr && !bw->shareable) ? bw->amount : 0.0;
    }

    // A link becomes checkable once both endpoints are assigned; index the
    // links by the later of the two endpoint positions.
    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < node_ids.size(); ++i) node_index[node_ids[i]] = i;
    for (std::size_t j = 0; j < link_ids.size(); ++j) {
      const auto& ends = p.link_ends.at(link_ids[j]);
      const std::size_t ready =
          std::max(node_index.at(ends.first), node_index.at(ends.second));
      links_ready_at[node_ids[ready]].push_back(j);
    }

    if (p.prior) {
      for (const auto& entry : p.prior->entries) {
        if (p.candidate_map.count(entry.ol_id) && entry.segments.size() == 1) {
          prior_host[entry.ol_id] = entry.segments[0].ul_id;
        } else if (p.candidate_paths.count(entry.ol_id)) {
          Path path;
          for (const auto& seg : entry.segments) path.push_back(seg.ul_id);
          prior_path[entry.ol_id] = std::move(path);
        }
      }
    }

    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(limits.time_budget_seconds));
    deepest_element = node_ids.empty() ? "" : node_ids.front();
  }

  void charge_expansion() {
    if (++expanded > limits.max_nodes_expanded)
      throw BudgetExceeded("expanded " + std::to_string(expanded) + " search nodes");
  }

  bool tracked(const std::string& ul_id, const std::string& kind) const {
    auto it = substrate_shareable.find(ul_id);
    return it == substrate_shareable.end() || it->second.count(kind) == 0;
  }

  /// Adds `amount` of `kind` on `ul_id`; returns false (and leaves no trace)
  /// when the residual would be exceeded. Maintains the running congestion.
  bool allocate(const std::string& ul_id, const std::string& kind, double amount) {
    if (amount <= 0 || !tracked(ul_id, kind)) return true;
    const double cap = p.residual(ul_id, kind);
    double& slot = used[ul_id][kind];
    if (slot + amount > cap + kCapacityEpsilon) return false;
    slot += amount;
    congestion = std::max(congestion, slot / cap);
    return true;
  }

  void release(const std::string& ul_id, const std::string& kind, double amount) {
    if (amount <= 0 || !tracked(ul_id, kind)) return;
    used[ul_id][kind] -= amount;
  }

  Tuple current_tuple() const {
    switch (p.objective.mode) {
      case ObjectiveSpec::Mode::MinCongestion:
        return {congestion, 0, 0};
      case ObjectiveSpec::Mode::Compact:
        return p.prior ? Tuple{static_cast<double>(used_hosts), cost, congestion}
                       : Tuple{static_cast<double>(used_hosts), congestion, 0};
      case ObjectiveSpec::Mode::MigrationAware:
        return {p.objective.alpha * congestion + p.objective.beta * cost, 0, 0};
    }
    return {0, 0, 0};
  }

  bool pruned() const { return have_best && current_tuple() >= best_tuple; }

  void note_depth(std::size_t index, const std::string& element) {
    if (index >= deepest_index) {
      deepest_index = index;
      deepest_element = element;
    }
  }

  void search_nodes(std::size_t i) {
    if (i == node_ids.size()) {
      search_links(0);
      return;
    }
    const std::string& v = node_ids[i];
    note_depth(i, v);
    const auto& demand = node_demand.at(v);

    for (const auto& s : p.candidate_map.at(v)) {
      charge_expansion();
      check_deadline();

      std::size_t done = 0;
      const double saved_congestion = congestion;
      bool fits = true;
      for (; done < demand.size(); ++done)
        if (!allocate(s, demand[done].kind, demand[done].amount)) {
          fits = false;
          break;
        }
      if (!fits) {
        for (std::size_t k = 0; k < done; ++k)
          release(s, demand[k].kind, demand[k].amount);
        congestion = saved_congestion;
        continue;
      }

      const double saved_cost = cost;
      auto prior = prior_host.find(v);
      if (prior != prior_host.end() && prior->second != s)
        cost += p.request.element(v)->amount_of("ram") * p.costs.node_move_per_mib;

      assign[v] = s;
      int& count = vnodes_on[s];
      if (count++ == 0) ++used_hosts;

      bool viable = !pruned();
      if (viable) {
        auto ready = links_ready_at.find(v);
        if (ready != links_ready_at.end())
          for (std::size_t j : ready->second) {
            const std::string& l = link_ids[j];
            const auto& ends = p.link_ends.at(l);
            const auto& by_pair = p.candidate_paths.at(l);
            auto paths = by_pair.find({assign.at(ends.first), assign.at(ends.second)});
            if (paths == by_pair.end() || paths->second.empty()) {
              viable = false;
              break;
            }
          }
      }
      if (viable) search_nodes(i + 1);

      if (--count == 0) --used_hosts;
      assign.erase(v);
      cost = saved_cost;
      for (const auto& d : demand) release(s, d.kind, d.amount);
      congestion = saved_congestion;
    }
  }

  void search_links(std::size_t j) {
    if (j == link_ids.size()) {
      record();
      return;
    }
    const std::string& l = link_ids[j];
    note_depth(node_ids.size() + j, l);
    const auto& ends = p.link_ends.at(l);
    const auto& by_pair = p.candidate_paths.at(l);
    auto paths = by_pair.find({assign.at(ends.first), assign.at(ends.second)});
    if (paths == by_pair.end()) return;
    const double bw = link_bandwidth.at(l);

    for (const auto& path : paths->second) {
      charge_expansion();
      check_deadline();

      const double saved_congestion = congestion;
      std::size_t nodes_done = 0, links_done = 0;
      bool fits = true;
      for (; nodes_done < path.size(); ++nodes_done)
        if (!allocate(path[nodes_done], "bandwidth", bw)) {
          fits = false;
          break;
        }
      if (fits)
        for (; links_done + 1 < path.size(); ++links_done) {
          auto key = std::minmax(path[links_done], path[links_done + 1]);
          auto between = link_between.find(std::make_pair(key.first, key.second));
          if (between == link_between.end() ||
              !allocate(between->second, "bandwidth", bw)) {
            fits = false;
            break;
          }
        }
      if (!fits) {
        for (std::size_t k = 0; k + 1 < path.size() && k < links_done; ++k) {
          auto key = std::minmax(path[k], path[k + 1]);
          release(link_between.at(std::make_pair(key.first, key.second)), "bandwidth", bw);
        }
        for (std::size_t k = 0; k < nodes_done; ++k) release(path[k], "bandwidth", bw);
        congestion = saved_congestion;
        continue;
      }

      const double saved_cost = cost;
      auto prior = prior_path.find(l);
      if (prior != prior_path.end() && prior->second != path)
        cost += p.request.element(l)->amount_of("bandwidth") * p.costs.link_remap_per_mbit;
      chosen[l] = path;

      if (!pruned()) search_links(j + 1);

      chosen.erase(l);
      cost = saved_cost;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        auto key = std::minmax(path[k], path[k + 1]);
        release(link_between.at(std::make_pair(key.first, key.second)), "bandwidth", bw);
      }
      for (const auto& n : path) release(n, "bandwidth", bw);
      congestion = saved_congestion;
    }
  }

  void record() {
    const Tuple tuple = current_tuple();
    if (have_best && tuple >= best_tuple) return;
    have_best = true;
    best_tuple = tuple;
    best_assign = assign;
    best_chosen = chosen;
    best_congestion = congestion;
    best_cost = cost;
  }

  void check_deadline() {
    if ((expanded & 1023) != 0) return;
    if (std::chrono::steady_clock::now() > deadline)
      throw BudgetExceeded("time budget exhausted");
  }
};

std::map<std::string, double> freed_on_emptied_nodes(
    const EmbeddingProblem& p, const EmbeddingSolution& sol) {
  std::map<std::string, double> freed;
  if (!p.prior) return freed;

  const ResidualMap prior_alloc = mapping_allocations(*p.prior, p.substrate);
  const ResidualMap declared = full_capacities(p.substrate);

  std::set<std::string> touched_now;
  for (const auto& [_, s] : sol.node_assign) touched_now.insert(s);
  for (const auto& [_, path] : sol.link_assign)
    for (const auto& n : path) touched_now.insert(n);

  std::set<std::string> touched_before;
  for (const auto& entry : p.prior->entries)
    for (const auto& seg : entry.segments) touched_before.insert(seg.ul_id);

  for (const auto& s : touched_before) {
    const rdl::NetworkElement* ne = p.substrate.element(s);
    if (ne == nullptr || !ne->is_node()) continue;
    if (touched_now.count(s)) continue;

    // Only count nodes this request had to itself: with foreign allocations
    // present the node cannot be powered down anyway.
    bool foreign_free = true;
    auto caps = declared.find(s);
    if (caps != declared.end())
      for (const auto& [kind, amount] : caps->second)
        if (p.residual(s, kind) != amount) {
          foreign_free = false;
          break;
        }
    if (!foreign_free) continue;

    auto prior_here = prior_alloc.find(s);
    if (prior_here == prior_alloc.end()) continue;
    for (const auto& [kind, amount] : prior_here->second) freed[kind] += amount;
  }
  return freed;
}

}  // namespace

SolveResult solve(const EmbeddingProblem& p, const SolveLimits& limits) {
  if (p.objective.mode == ObjectiveSpec::Mode::MigrationAware && !p.prior)
    throw std::invalid_argument("MigrationAware objective requires a prior mapping");

  Engine engine(p, limits);
  engine.prepare();
  engine.search_nodes(0);

  if (!engine.have_best) {
    if (engine.deepest_element.empty())
      return Infeasible{"", "request has no elements and no placement"};
    return Infeasible{engine.deepest_element,
                      "no admissible placement at " + engine.deepest_element};
  }

  EmbeddingSolution sol;
  sol.node_assign = std::move(engine.best_assign);
  sol.link_assign = std::move(engine.best_chosen);
  sol.migration_cost = p.prior ? engine.best_cost : 0.0;
  switch (p.objective.mode) {
    case ObjectiveSpec::Mode::MinCongestion:
      sol.objective_value = engine.best_congestion;
      break;
    case ObjectiveSpec::Mode::Compact:
      sol.objective_value = engine.best_tuple[0];
      break;
    case ObjectiveSpec::Mode::MigrationAware:
      sol.objective_value = engine.best_tuple[0];
      break;
  }
  sol.freed_resources = freed_on_emptied_nodes(p, sol);
  return sol;
}

std::variant<MigrationPlan, Infeasible> analyze_migration(const EmbeddingProblem& p,
                                                          const SolveLimits& limits) {
  if (!p.prior) throw std::invalid_argument("analyze_migration requires a prior mapping");
  for (const auto& [v, _] : p.candidate_map) {
    const rdl::MappingEntry* entry = p.prior->entry(v);
    if (entry == nullptr || entry->segments.size() != 1 ||
        p.substrate.element(entry->segments[0].ul_id) == nullptr)
      throw std::invalid_argument("prior mapping does not cover request node " + v);
  }

  SolveResult result = solve(p, limits);
  if (auto* infeasible = std::get_if<Infeasible>(&result)) return *infeasible;

  MigrationPlan plan;
  plan.solution = std::get<EmbeddingSolution>(result);
  for (const auto& [v, s] : plan.solution.node_assign) {
    const rdl::MappingEntry* entry = p.prior->entry(v);
    if (entry != nullptr && entry->segments.size() == 1 && entry->segments[0].ul_id != s)
      plan.moves.push_back({v, entry->segments[0].ul_id, s});
  }
  for (const auto& [l, path] : plan.solution.link_assign) {
    const rdl::MappingEntry* entry = p.prior->entry(l);
    if (entry == nullptr) continue;
    Path before;
    for (const auto& seg : entry->segments) before.push_back(seg.ul_id);
    if (before != path) plan.remaps.push_back({l, std::move(before), path});
  }
  return plan;
}

rdl::MappingLayer to_mapping_layer(const EmbeddingSolution& sol, const EmbeddingProblem& p) {
  rdl::MappingLayer ml;
  ml.request_graph_id = p.request.id();

  for (const auto& [v, s] : sol.node_assign) {
    rdl::MappingSegment seg;
    seg.ul_id = s;
    for (const auto& r : p.request.element(v)->resources)
      if (!r.shareable) seg.allocations[r.kind] = r.amount;
    ml.entries.push_back({v, {std::move(seg)}});
  }
  for (const auto& [l, path] : sol.link_assign) {
    const rdl::Resource* bw = p.request.element(l)->resource("bandwidth");
    rdl::MappingEntry entry;
    entry.ol_id = l;
    for (const auto& n : path) {
      rdl::MappingSegment seg;
      seg.ul_id = n;
      if (bw != nullptr && !bw->shareable && bw->amount > 0)
        seg.allocations["bandwidth"] = bw->amount;
      entry.segments.push_back(std::move(seg));
    }
    ml.entries.push_back(std::move(entry));
  }
  ml.sort_entries();
  return ml;
}

double solution_congestion(const EmbeddingProblem& p, const EmbeddingSolution& sol) {
  const rdl::MappingLayer ml = to_mapping_layer(sol, p);
  const ResidualMap allocations = mapping_allocations(ml, p.substrate);
  double congestion = 0;
  for (const auto& [ul_id, kinds] : allocations)
    for (const auto& [kind, amount] : kinds) {
      if (amount <= 0) continue;
      const double cap = p.residual(ul_id, kind);
      if (cap <= 0) return std::numeric_limits<double>::infinity();
      congestion = std::max(congestion, amount / cap);
    }
  return congestion;
}

bool check_solution(const EmbeddingProblem& p, const EmbeddingSolution& sol) {
  // Every request node assigned, to a candidate, admissibly.
  for (const auto& [v, candidates] : p.candidate_map) {
    auto it = sol.node_assign.find(v);
    if (it == sol.node_assign.end()) return false;
    const std::string& s = it->second;
    if (std::find(candidates.begin(), candidates.end(), s) == candidates.end())
      return false;
    const rdl::NetworkElement* rne = p.request.element(v);
    const rdl::NetworkElement* sne = p.substrate.element(s);
    if (rne == nullptr || sne == nullptr || !sne->is_node()) return false;
    if (!rdl::is_assignable(rne->type, sne->type)) return false;
  }
  if (sol.node_assign.size() != p.candidate_map.size()) return false;

  // Every request link routed over a well-formed path matching its endpoints.
  for (const auto& [l, ends] : p.link_ends) {
    auto it = sol.link_assign.find(l);
    if (it == sol.link_assign.end()) return false;
    const Path& path = it->second;
    if (path.empty()) return false;
    if (static_cast<int>(path.size()) > p.max_path_elements) return false;
    if (path.front() != sol.node_assign.at(ends.first)) return false;
    if (path.back() != sol.node_assign.at(ends.second)) return false;
    std::set<std::string> seen;
    for (const auto& n : path) {
      const rdl::NetworkElement* ne = p.substrate.element(n);
      if (ne == nullptr || !ne->is_node()) return false;
      if (!seen.insert(n).second) return false;  // not simple
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      if (!connecting_link(p.substrate, path[i], path[i + 1])) return false;
  }
  if (sol.link_assign.size() != p.link_ends.size()) return false;

  // Capacity sums, recomputed from scratch.
  const rdl::MappingLayer ml = to_mapping_layer(sol, p);
  const ResidualMap allocations = mapping_allocations(ml, p.substrate);
  for (const auto& [ul_id, kinds] : allocations)
    for (const auto& [kind, amount] : kinds) {
      const rdl::NetworkElement* ne = p.substrate.element(ul_id);
      if (ne != nullptr) {
        const rdl::Resource* r = ne->resource(kind);
        if (r != nullptr && r->shareable) continue;
      }
      if (amount > p.residual(ul_id, kind) + kCapacityEpsilon) return false;
    }
  return true;
}

}  // namespace cloudnet::solver
