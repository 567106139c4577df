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

#include "cloudnet/solver/problem.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "cloudnet/common/errors.hpp"
#include "cloudnet/rdl/validate.hpp"

namespace cloudnet::solver {

namespace {

/// A specified request feature constrains a candidate only when the candidate
/// carries the same key; substrate elements that stay silent on a key accept
/// anything (that is the vagueness contract working in the other direction).
bool features_admit(const rdl::NetworkElement& request, const rdl::NetworkElement& candidate) {
  for (const auto& f : request.features) {
    if (f.unspecified()) continue;
    const rdl::Feature* on_candidate = candidate.feature(f.key);
    if (on_candidate != nullptr && on_candidate->value != f.value) return false;
  }
  return true;
}

void enumerate_paths(
    const std::map<std::string, std::vector<std::pair<std::string, std::string>>>& adj,
    const std::string& from, const std::string& to, int max_elements,
    std::vector<std::string>& current, std::set<std::string>& visited,
    std::vector<Path>& out) {
  current.push_back(from);
  visited.insert(from);
  if (from == to) {
    out.push_back(current);
  } else if (static_cast<int>(current.size()) < max_elements) {
    auto it = adj.find(from);
    if (it != adj.end())
      for (const auto& [next, _] : it->second)
        if (!visited.count(next))
          enumerate_paths(adj, next, to, max_elements, current, visited, out);
  }
  visited.erase(from);
  current.pop_back();
}

}  // namespace

std::string to_string(ObjectiveSpec::Mode mode) {
  switch (mode) {
    case ObjectiveSpec::Mode::MinCongestion: return "min_congestion";
    case ObjectiveSpec::Mode::Compact: return "compact";
    case ObjectiveSpec::Mode::MigrationAware: return "migration_aware";
  }
  return "?";
}

ObjectiveSpec::Mode parse_objective_mode(const std::string& text) {
  if (text == "min_congestion") return ObjectiveSpec::Mode::MinCongestion;
  if (text == "compact") return ObjectiveSpec::Mode::Compact;
  if (text == "migration_aware") return ObjectiveSpec::Mode::MigrationAware;
  throw ConfigError("unknown objective mode '" + text + "'");
}

double EmbeddingProblem::residual(const std::string& ul_id, const std::string& kind) const {
  auto ne = capacities.find(ul_id);
  if (ne == capacities.end()) return 0;
  auto k = ne->second.find(kind);
  return k == ne->second.end() ? 0 : k->second;
}

ResidualMap full_capacities(const rdl::TopologyGraph& substrate) {
  ResidualMap caps;
  for (const auto& [id, ne] : substrate.elements())
    for (const auto& r : ne.resources)
      if (!r.shareable) caps[id][r.kind] = r.amount;
  return caps;
}

std::optional<std::string> connecting_link(const rdl::TopologyGraph& substrate,
                                           const std::string& a, const std::string& b) {
  std::optional<std::string> found;
  for (const auto& [id, ne] : substrate.elements()) {
    if (!ne.is_link()) continue;
    auto ends = substrate.link_endpoints(ne);
    if (!ends) continue;
    if ((ends->first == a && ends->second == b) || (ends->first == b && ends->second == a))
      if (!found || id < *found) found = id;
  }
  return found;
}

ResidualMap mapping_allocations(const rdl::MappingLayer& ml,
                                const rdl::TopologyGraph& substrate) {
  ResidualMap out;
  for (const auto& entry : ml.entries) {
    for (const auto& seg : entry.segments)
      for (const auto& [kind, amount] : seg.allocations) out[seg.ul_id][kind] += amount;
    for (std::size_t i = 0; i + 1 < entry.segments.size(); ++i) {
      auto link = connecting_link(substrate, entry.segments[i].ul_id,
                                  entry.segments[i + 1].ul_id);
      if (!link) continue;
      auto bw = entry.segments[i].allocations.find("bandwidth");
      if (bw != entry.segments[i].allocations.end() && bw->second > 0)
        out[*link]["bandwidth"] += bw->second;
    }
  }
  return out;
}

EmbeddingProblem build_problem(const rdl::TopologyGraph& substrate,
                               const rdl::TopologyGraph& request,
                               const ObjectiveSpec& objective,
                               const BuildOptions& options) {
  if (substrate.layer() != rdl::Layer::UL)
    throw InvalidGraph("substrate must be a UL graph");
  if (request.layer() != rdl::Layer::OL1)
    throw InvalidGraph("request must be an OL1 graph");
  if (const auto report = rdl::validate_graph(substrate); !report.ok())
    throw InvalidGraph("substrate: " + report.summary());
  if (const auto report = rdl::validate_graph(request); !report.ok())
    throw InvalidGraph("request: " + report.summary());
  if (objective.mode == ObjectiveSpec::Mode::MigrationAware && !options.prior)
    throw std::invalid_argument("MigrationAware objective requires a prior mapping");
  if (objective.alpha + objective.beta <= 0)
    throw std::invalid_argument("objective weights must not both be zero");

  EmbeddingProblem p;
  p.substrate = substrate;
  p.request = request;
  p.objective = objective;
  p.prior = options.prior;
  p.costs = options.costs;
  p.max_path_elements = options.max_path_elements;
  p.capacities = options.residuals ? *options.residuals : full_capacities(substrate);

  for (const auto& [id, ne] : request.elements()) {
    if (!ne.is_node()) continue;
    std::vector<std::string> candidates;
    for (const auto& [sid, sne] : substrate.elements()) {
      if (!sne.is_node()) continue;
      if (!rdl::is_assignable(ne.type, sne.type)) continue;
      if (!features_admit(ne, sne)) continue;
      candidates.push_back(sid);
    }
    if (candidates.empty())
      throw NoCandidates("request node " + id + " admits no substrate node");
    p.candidate_map[id] = std::move(candidates);
  }

  const auto adj = substrate.adjacency();
  for (const auto& [id, ne] : request.elements()) {
    if (!ne.is_link()) continue;
    auto ends = request.link_endpoints(ne);
    if (!ends) throw InvalidGraph("request link " + id + " lacks node endpoints");
    p.link_ends[id] = *ends;

    auto& by_pair = p.candidate_paths[id];
    bool any = false;
    for (const auto& cu : p.candidate_map.at(ends->first))
      for (const auto& cw : p.candidate_map.at(ends->second)) {
        std::vector<Path> paths;
        std::vector<std::string> current;
        std::set<std::string> visited;
        enumerate_paths(adj, cu, cw, p.max_path_elements, current, visited, paths);
        std::sort(paths.begin(), paths.end());
        if (!paths.empty()) any = true;
        by_pair[{cu, cw}] = std::move(paths);
      }
    if (!any)
      throw NoCandidates("request link " + id + " admits no substrate path");
  }
  return p;
}

}  // namespace cloudnet::solver
