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

#include "cloudnet/harness/checks.hpp"

#include <cmath>

#include "cloudnet/solver/problem.hpp"

namespace cloudnet::harness {

std::optional<std::string> conservation_violation(const pip::PipNode& node) {
  const auto contracts = node.contracts_snapshot();
  const auto state = node.state_snapshot();
  const auto declared = solver::full_capacities(node.substrate());

  // Sum the live contracts' allocations independently of the node's own
  // incremental bookkeeping.
  solver::ResidualMap live;
  for (const auto& [id, contract] : contracts) {
    if (contract.state != pip::ContractState::Preliminary &&
        contract.state != pip::ContractState::Confirmed)
      continue;
    const auto allocs = solver::mapping_allocations(contract.mapping, node.substrate());
    for (const auto& [ul_id, kinds] : allocs)
      for (const auto& [kind, amount] : kinds) live[ul_id][kind] += amount;
  }

  for (const auto& [ul_id, kinds] : declared)
    for (const auto& [kind, capacity] : kinds) {
      double live_sum = 0;
      if (auto ne = live.find(ul_id); ne != live.end())
        if (auto k = ne->second.find(kind); k != ne->second.end()) live_sum = k->second;
      double booked = 0;
      if (auto ne = state.allocated.find(ul_id); ne != state.allocated.end())
        if (auto k = ne->second.find(kind); k != ne->second.end()) booked = k->second;
      if (std::abs(live_sum - booked) > 1e-9)
        return "allocation mismatch on " + ul_id + "/" + kind + ": contracts say " +
               std::to_string(live_sum) + ", books say " + std::to_string(booked);
      if (booked > capacity + 1e-9)
        return "overcommit on " + ul_id + "/" + kind;
    }

  // Anything booked must be declared somewhere.
  for (const auto& [ul_id, kinds] : state.allocated)
    for (const auto& [kind, amount] : kinds) {
      auto ne = declared.find(ul_id);
      if (ne == declared.end() || ne->second.count(kind) == 0)
        return "allocation on undeclared " + ul_id + "/" + kind;
    }

  // VLAN uniqueness across live links.
  std::map<int, std::string> tag_link;
  for (const auto& [id, contract] : contracts) {
    if (contract.state != pip::ContractState::Preliminary &&
        contract.state != pip::ContractState::Confirmed)
      continue;
    for (const auto& [link, tag] : contract.mapping.vlan_by_link) {
      auto [it, inserted] = tag_link.emplace(tag, id + "/" + link);
      if (!inserted)
        return "vlan " + std::to_string(tag) + " shared by " + it->second + " and " + id +
               "/" + link;
    }
  }
  for (const auto& [tag, use] : state.vlan_in_use)
    if (tag_link.count(tag) == 0)
      return "vlan " + std::to_string(tag) + " booked without a live contract";
  for (const auto& [tag, owner] : tag_link)
    if (state.vlan_in_use.count(tag) == 0)
      return "vlan " + std::to_string(tag) + " live but not booked";

  return std::nullopt;
}

}  // namespace cloudnet::harness
