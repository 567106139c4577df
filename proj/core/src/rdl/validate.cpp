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

#include "cloudnet/rdl/validate.hpp"

#include <map>
#include <set>

namespace cloudnet::rdl {

std::string to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::BadRootSegment: return "BadRootSegment";
    case ViolationCode::LinkArity: return "LinkArity";
    case ViolationCode::DuplicateResourceKind: return "DuplicateResourceKind";
    case ViolationCode::NegativeAmount: return "NegativeAmount";
    case ViolationCode::UnitMismatch: return "UnitMismatch";
    case ViolationCode::UnknownInterfaceRef: return "UnknownInterfaceRef";
    case ViolationCode::OwnerMismatch: return "OwnerMismatch";
    case ViolationCode::UnknownPeer: return "UnknownPeer";
    case ViolationCode::AsymmetricPeering: return "AsymmetricPeering";
    case ViolationCode::LinkEndpointNotNode: return "LinkEndpointNotNode";
    case ViolationCode::PeerNotLink: return "PeerNotLink";
    case ViolationCode::UnspecifiedInCompletedGraph:
      return "UnspecifiedInCompletedGraph";
    case ViolationCode::GroupValueMismatch: return "GroupValueMismatch";
  }
  return "?";
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += to_string(v.code) + "(" + v.subject + ")";
    if (!v.detail.empty()) out += " " + v.detail;
  }
  return out;
}

ValidationReport validate_graph(const TopologyGraph& g) {
  ValidationReport report;
  auto flag = [&report](ViolationCode code, const std::string& subject,
                        const std::string& detail = "") {
    report.violations.push_back({code, subject, detail});
  };

  for (const auto& [id, ne] : g.elements()) {
    if (ne.type.empty() || (ne.type.front() != "node" && ne.type.front() != "link"))
      flag(ViolationCode::BadRootSegment, id, ne.type.to_string());

    if (ne.is_link() && ne.interfaces.size() != 2)
      flag(ViolationCode::LinkArity, id,
           "has " + std::to_string(ne.interfaces.size()) + " interfaces");

    std::set<std::string> kinds;
    for (const auto& r : ne.resources) {
      if (!kinds.insert(r.kind).second)
        flag(ViolationCode::DuplicateResourceKind, id, r.kind);
      if (r.amount < 0) flag(ViolationCode::NegativeAmount, id, r.kind);
      if (auto unit = registry_unit(r.kind); unit && *unit != r.unit)
        flag(ViolationCode::UnitMismatch, id, r.kind + " in " + r.unit);
    }

    for (const auto& ni_id : ne.interfaces) {
      const NetworkInterface* ni = g.interface(ni_id);
      if (ni == nullptr) {
        flag(ViolationCode::UnknownInterfaceRef, id, ni_id);
        continue;
      }
      if (ni->owner != id) flag(ViolationCode::OwnerMismatch, ni_id, "owner " + ni->owner);
    }

    if (g.layer() != Layer::OL0)
      for (const auto& f : ne.features)
        if (f.unspecified())
          flag(ViolationCode::UnspecifiedInCompletedGraph, id, f.key);
  }

  for (const auto& [id, ni] : g.interfaces()) {
    const NetworkElement* owner = g.element(ni.owner);
    if (owner == nullptr ||
        std::find(owner->interfaces.begin(), owner->interfaces.end(), id) ==
            owner->interfaces.end()) {
      flag(ViolationCode::OwnerMismatch, id, "owner " + ni.owner);
      continue;
    }
    if (!ni.peer) continue;
    const NetworkInterface* peer = g.interface(*ni.peer);
    if (peer == nullptr || *ni.peer == id) {
      flag(ViolationCode::UnknownPeer, id, *ni.peer);
      continue;
    }
    if (!peer->peer || *peer->peer != id)
      flag(ViolationCode::AsymmetricPeering, id, *ni.peer);

    const NetworkElement* peer_owner = g.element(peer->owner);
    if (owner->is_node() && peer_owner != nullptr && peer_owner->is_node())
      flag(ViolationCode::PeerNotLink, id, *ni.peer);
  }

  // Link interfaces must peer into node elements on both sides.
  for (const auto& [id, ne] : g.elements()) {
    if (!ne.is_link() || ne.interfaces.size() != 2) continue;
    for (const auto& ni_id : ne.interfaces) {
      const NetworkInterface* ni = g.interface(ni_id);
      if (ni == nullptr) continue;  // flagged above
      const NetworkInterface* peer = ni->peer ? g.interface(*ni->peer) : nullptr;
      const NetworkElement* peer_owner = peer ? g.element(peer->owner) : nullptr;
      if (peer_owner == nullptr || !peer_owner->is_node())
        flag(ViolationCode::LinkEndpointNotNode, id, ni_id);
    }
  }

  // Consistency groups: all specified values within one group must agree.
  std::map<std::string, std::set<std::string>> group_values;
  std::map<std::string, std::string> group_subject;
  for (const auto& [id, ne] : g.elements())
    for (const auto& f : ne.features) {
      if (f.group.empty() || f.unspecified()) continue;
      group_values[f.group].insert(f.value);
      group_subject.emplace(f.group, id);
    }
  for (const auto& [group, values] : group_values)
    if (values.size() > 1)
      flag(ViolationCode::GroupValueMismatch, group_subject[group], "group " + group);

  return report;
}

}  // namespace cloudnet::rdl
