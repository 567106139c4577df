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

#include "cloudnet/rdl/graph.hpp"

#include <algorithm>

#include "cloudnet/common/errors.hpp"

namespace cloudnet::rdl {

std::optional<std::string> registry_unit(const std::string& kind) {
  if (kind == "ram") return "mib";
  if (kind == "cpu") return "cores";
  if (kind == "bandwidth") return "mbit";
  return std::nullopt;
}

Resource make_resource(const std::string& kind, double amount, bool shareable) {
  Resource r;
  r.kind = kind;
  r.amount = amount;
  r.unit = registry_unit(kind).value_or("units");
  r.shareable = shareable;
  return r;
}

const Resource* NetworkElement::resource(const std::string& kind) const {
  for (const auto& r : resources)
    if (r.kind == kind) return &r;
  return nullptr;
}

const Feature* NetworkElement::feature(const std::string& key) const {
  for (const auto& f : features)
    if (f.key == key) return &f;
  return nullptr;
}

double NetworkElement::amount_of(const std::string& kind) const {
  const Resource* r = resource(kind);
  return r ? r->amount : 0.0;
}

std::string to_string(Layer layer) {
  switch (layer) {
    case Layer::UL: return "UL";
    case Layer::OL0: return "OL0";
    case Layer::OL1: return "OL1";
    case Layer::ML: return "ML";
  }
  return "?";
}

Layer parse_layer(const std::string& text) {
  if (text == "UL") return Layer::UL;
  if (text == "OL0") return Layer::OL0;
  if (text == "OL1") return Layer::OL1;
  if (text == "ML") return Layer::ML;
  throw MalformedDocument("unknown layer '" + text + "'");
}

void TopologyGraph::add(NetworkElement element) {
  std::sort(element.resources.begin(), element.resources.end());
  std::sort(element.features.begin(), element.features.end());
  std::sort(element.interfaces.begin(), element.interfaces.end());
  auto [_, inserted] = elements_.emplace(element.id, std::move(element));
  if (!inserted) throw InvalidGraph("duplicate element id");
}

void TopologyGraph::add(NetworkInterface interface) {
  auto [_, inserted] = interfaces_.emplace(interface.id, std::move(interface));
  if (!inserted) throw InvalidGraph("duplicate interface id");
}

const NetworkElement* TopologyGraph::element(const std::string& id) const {
  auto it = elements_.find(id);
  return it == elements_.end() ? nullptr : &it->second;
}

const NetworkInterface* TopologyGraph::interface(const std::string& id) const {
  auto it = interfaces_.find(id);
  return it == interfaces_.end() ? nullptr : &it->second;
}

std::optional<std::pair<std::string, std::string>> TopologyGraph::link_endpoints(
    const NetworkElement& link) const {
  if (!link.is_link() || link.interfaces.size() != 2) return std::nullopt;
  std::vector<std::string> owners;
  for (const auto& ni_id : link.interfaces) {
    const NetworkInterface* ni = interface(ni_id);
    if (ni == nullptr || !ni->peer) return std::nullopt;
    const NetworkInterface* peer = interface(*ni->peer);
    if (peer == nullptr) return std::nullopt;
    const NetworkElement* owner = element(peer->owner);
    if (owner == nullptr || !owner->is_node()) return std::nullopt;
    owners.push_back(owner->id);
  }
  return std::make_pair(owners[0], owners[1]);
}

std::map<std::string, std::vector<std::pair<std::string, std::string>>>
TopologyGraph::adjacency() const {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> adj;
  for (const auto& [id, ne] : elements_) {
    if (!ne.is_node()) continue;
    adj[id];  // every node present, even if isolated
  }
  for (const auto& [id, ne] : elements_) {
    if (!ne.is_link()) continue;
    auto ends = link_endpoints(ne);
    if (!ends) continue;
    adj[ends->first].emplace_back(ends->second, id);
    adj[ends->second].emplace_back(ends->first, id);
  }
  for (auto& [_, neighbors] : adj) std::sort(neighbors.begin(), neighbors.end());
  return adj;
}

}  // namespace cloudnet::rdl
