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

#include "cloudnet/rdl/graph_ops.hpp"

#include <algorithm>
#include <stdexcept>

#include "cloudnet/common/errors.hpp"

namespace cloudnet::rdl {

double aggregate_resources(const TopologyGraph& g, const std::string& kind) {
  if (g.layer() != Layer::UL)
    throw std::invalid_argument("aggregate_resources requires a UL graph");
  double total = 0;
  for (const auto& [_, ne] : g.elements())
    if (ne.is_node()) total += ne.amount_of(kind);
  return total;
}

std::map<std::string, double> aggregate_all(const TopologyGraph& g) {
  std::map<std::string, double> totals;
  for (const auto& [_, ne] : g.elements())
    if (ne.is_node())
      for (const auto& r : ne.resources) totals[r.kind] += r.amount;
  return totals;
}

TopologyGraph extract_partial(const TopologyGraph& g,
                              const std::set<std::string>& ne_ids,
                              const ExtractOptions& options) {
  for (const auto& id : ne_ids)
    if (g.element(id) == nullptr)
      throw std::invalid_argument("extract_partial: unknown element " + id);

  TopologyGraph out(options.new_id, options.layer.value_or(g.layer()));

  // Interfaces retained = those owned by selected elements.
  std::set<std::string> kept_ni;
  for (const auto& id : ne_ids)
    for (const auto& ni_id : g.element(id)->interfaces) kept_ni.insert(ni_id);

  for (const auto& id : ne_ids) {
    const NetworkElement& ne = *g.element(id);
    if (ne.is_link()) {
      for (const auto& ni_id : ne.interfaces) {
        const NetworkInterface* ni = g.interface(ni_id);
        const bool endpoint_kept =
            ni != nullptr && ni->peer && kept_ni.count(*ni->peer) > 0;
        if (!endpoint_kept && options.allow_dangling.count(id) == 0)
          throw DanglingEndpoint("link " + id + " loses an endpoint");
      }
    }
    out.add(ne);
  }

  for (const auto& ni_id : kept_ni) {
    NetworkInterface ni = *g.interface(ni_id);
    if (ni.peer && kept_ni.count(*ni.peer) == 0) ni.peer.reset();
    out.add(std::move(ni));
  }
  return out;
}

TopologyGraph completed_with_defaults(
    const TopologyGraph& g,
    const std::map<std::string, std::string>& feature_defaults,
    const std::map<std::string, double>& resource_defaults) {
  // Pass 1: settle one value per consistency group.
  std::map<std::string, std::set<std::string>> specified_by_group;
  std::map<std::string, std::string> first_key_by_group;  // lex-smallest member key
  for (const auto& [_, ne] : g.elements())
    for (const auto& f : ne.features) {
      if (f.group.empty()) continue;
      if (!f.unspecified()) specified_by_group[f.group].insert(f.value);
      auto [it, inserted] = first_key_by_group.emplace(f.group, f.key);
      if (!inserted && f.key < it->second) it->second = f.key;
    }

  std::map<std::string, std::string> group_value;
  for (const auto& [group, values] : specified_by_group) {
    if (values.size() > 1)
      throw ConflictingGroup("group " + group + " holds " +
                             std::to_string(values.size()) + " distinct values");
    group_value[group] = *values.begin();
  }
  for (const auto& [group, key] : first_key_by_group) {
    if (group_value.count(group)) continue;
    auto def = feature_defaults.find(key);
    if (def != feature_defaults.end()) group_value[group] = def->second;
  }

  TopologyGraph out(g.id(), Layer::OL1);
  for (const auto& [_, ne] : g.elements()) {
    NetworkElement copy = ne;
    for (auto& f : copy.features) {
      if (!f.group.empty()) {
        auto it = group_value.find(f.group);
        if (it != group_value.end()) f.value = it->second;
        continue;
      }
      if (f.unspecified()) {
        auto def = feature_defaults.find(f.key);
        if (def != feature_defaults.end()) f.value = def->second;
      }
    }
    if (copy.is_node())
      for (const auto& [kind, amount] : resource_defaults)
        if (copy.resource(kind) == nullptr)
          copy.resources.push_back(make_resource(kind, amount));
    out.add(std::move(copy));
  }
  for (const auto& [_, ni] : g.interfaces()) out.add(ni);
  return out;
}

}  // namespace cloudnet::rdl
