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

#include "support/oracle.hpp"

#include <set>
#include <vector>

namespace cloudnet::testing {

namespace {

constexpr double kEps = 1e-9;

struct Enumerator {
  const solver::EmbeddingProblem& p;

  std::vector<std::string> nodes;
  std::vector<std::string> links;
  std::map<std::string, std::set<std::string>> substrate_shareable;
  std::map<std::pair<std::string, std::string>, std::string> link_between;
  std::map<std::string, std::string> prior_host;
  std::map<std::string, solver::Path> prior_path;

  std::map<std::string, std::map<std::string, double>> used;
  std::map<std::string, std::string> assign;
  std::map<std::string, solver::Path> chosen;
  OracleResult best;

  explicit Enumerator(const solver::EmbeddingProblem& problem) : p(problem) {
    for (const auto& [id, _] : p.candidate_map) nodes.push_back(id);
    for (const auto& [id, _] : p.candidate_paths) links.push_back(id);
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
    if (p.prior)
      for (const auto& entry : p.prior->entries) {
        if (p.candidate_map.count(entry.ol_id) && entry.segments.size() == 1) {
          prior_host[entry.ol_id] = entry.segments[0].ul_id;
        } else if (p.candidate_paths.count(entry.ol_id)) {
          solver::Path path;
          for (const auto& seg : entry.segments) path.push_back(seg.ul_id);
          prior_path[entry.ol_id] = std::move(path);
        }
      }
  }

  bool constrained(const std::string& ul_id, const std::string& kind) const {
    auto it = substrate_shareable.find(ul_id);
    return it == substrate_shareable.end() || it->second.count(kind) == 0;
  }

  bool add(const std::string& ul_id, const std::string& kind, double amount) {
    if (amount <= 0 || !constrained(ul_id, kind)) return true;
    double& slot = used[ul_id][kind];
    if (slot + amount > p.residual(ul_id, kind) + kEps) return false;
    slot += amount;
    return true;
  }

  void remove(const std::string& ul_id, const std::string& kind, double amount) {
    if (amount <= 0 || !constrained(ul_id, kind)) return;
    used[ul_id][kind] -= amount;
  }

  double congestion_now() const {
    double worst = 0;
    for (const auto& [ul_id, kinds] : used)
      for (const auto& [kind, amount] : kinds) {
        if (amount <= 0) continue;
        worst = std::max(worst, amount / p.residual(ul_id, kind));
      }
    return worst;
  }

  double cost_now() const {
    // Same summation sequence as the production search: node terms in node
    // id order, then link terms in link id order.
    double cost = 0;
    for (const auto& v : nodes) {
      auto prior = prior_host.find(v);
      if (prior != prior_host.end() && prior->second != assign.at(v))
        cost += p.request.element(v)->amount_of("ram") * p.costs.node_move_per_mib;
    }
    for (const auto& l : links) {
      auto prior = prior_path.find(l);
      if (prior != prior_path.end() && prior->second != chosen.at(l))
        cost += p.request.element(l)->amount_of("bandwidth") * p.costs.link_remap_per_mbit;
    }
    return cost;
  }

  void leaf() {
    std::set<std::string> hosts;
    for (const auto& [_, s] : assign) hosts.insert(s);
    const double congestion = congestion_now();
    const double cost = cost_now();
    const double used_hosts = static_cast<double>(hosts.size());

    std::array<double, 3> tuple{0, 0, 0};
    switch (p.objective.mode) {
      case solver::ObjectiveSpec::Mode::MinCongestion:
        tuple = {congestion, 0, 0};
        break;
      case solver::ObjectiveSpec::Mode::Compact:
        tuple = p.prior ? std::array<double, 3>{used_hosts, cost, congestion}
                        : std::array<double, 3>{used_hosts, congestion, 0};
        break;
      case solver::ObjectiveSpec::Mode::MigrationAware:
        tuple = {p.objective.alpha * congestion + p.objective.beta * cost, 0, 0};
        break;
    }

    ++best.solutions_seen;
    if (best.feasible && tuple >= best.tuple) return;
    best.feasible = true;
    best.tuple = tuple;
    best.node_assign = assign;
    best.link_assign = chosen;
    best.congestion = congestion;
    best.migration_cost = cost;
    best.used_hosts = static_cast<int>(hosts.size());
  }

  void over_links(std::size_t j) {
    if (j == links.size()) {
      leaf();
      return;
    }
    const std::string& l = links[j];
    const auto& ends = p.link_ends.at(l);
    const auto& by_pair = p.candidate_paths.at(l);
    auto paths = by_pair.find({assign.at(ends.first), assign.at(ends.second)});
    if (paths == by_pair.end()) return;
    const rdl::Resource* bw_res = p.request.element(l)->resource("bandwidth");
    const double bw = (bw_res != nullptr && !bw_res->shareable) ? bw_res->amount : 0;

    for (const auto& path : paths->second) {
      std::size_t got_nodes = 0, got_links = 0;
      bool ok = true;
      for (; got_nodes < path.size(); ++got_nodes)
        if (!add(path[got_nodes], "bandwidth", bw)) {
          ok = false;
          break;
        }
      if (ok)
        for (; got_links + 1 < path.size(); ++got_links) {
          auto key = std::minmax(path[got_links], path[got_links + 1]);
          auto between = link_between.find(std::make_pair(key.first, key.second));
          if (between == link_between.end() || !add(between->second, "bandwidth", bw)) {
            ok = false;
            break;
          }
        }
      if (ok) {
        chosen[l] = path;
        over_links(j + 1);
        chosen.erase(l);
      }
      for (std::size_t k = 0; k < got_links; ++k) {
        auto key = std::minmax(path[k], path[k + 1]);
        remove(link_between.at(std::make_pair(key.first, key.second)), "bandwidth", bw);
      }
      for (std::size_t k = 0; k < got_nodes; ++k) remove(path[k], "bandwidth", bw);
    }
  }

  void over_nodes(std::size_t i) {
    if (i == nodes.size()) {
      over_links(0);
      return;
    }
    const std::string& v = nodes[i];
    const rdl::NetworkElement& ne = *p.request.element(v);
    for (const auto& s : p.candidate_map.at(v)) {
      std::vector<std::pair<std::string, double>> granted;
      bool ok = true;
      for (const auto& r : ne.resources) {
        if (r.shareable) continue;
        if (!add(s, r.kind, r.amount)) {
          ok = false;
          break;
        }
        granted.emplace_back(r.kind, r.amount);
      }
      if (ok) {
        assign[v] = s;
        over_nodes(i + 1);
        assign.erase(v);
      }
      for (const auto& [kind, amount] : granted) remove(s, kind, amount);
    }
  }
};

}  // namespace

OracleResult brute_force(const solver::EmbeddingProblem& p) {
  Enumerator e(p);
  e.over_nodes(0);
  return e.best;
}

}  // namespace cloudnet::testing
