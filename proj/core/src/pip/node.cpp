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

#include "cloudnet/pip/node.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

#include "cloudnet/codec/document.hpp"
#include "cloudnet/common/errors.hpp"
#include "cloudnet/rdl/graph_ops.hpp"
#include "cloudnet/rdl/validate.hpp"

namespace cloudnet::pip {

namespace {

using nlohmann::json;

constexpr char kTransitLinkType[] = "/link/transit";
constexpr char kPipStubType[] = "/node/host/pip";

bool is_transit_link(const rdl::NetworkElement& ne) {
  return ne.type.to_string() == kTransitLinkType;
}

bool is_pip_stub(const rdl::NetworkElement& ne) {
  return ne.type.to_string() == kPipStubType;
}

int dictated_vlan(const rdl::NetworkElement& link) {
  const rdl::Feature* f = link.feature("vlan");
  if (f == nullptr || f->unspecified())
    throw MalformedDocument("transit link " + link.id + " carries no vlan tag");
  try {
    std::size_t used = 0;
    const int tag = std::stoi(f->value, &used);
    if (used != f->value.size()) throw std::invalid_argument("");
    return tag;
  } catch (const std::exception&) {
    throw MalformedDocument("transit link " + link.id + ": bad vlan '" + f->value + "'");
  }
}

json objective_to_json(const solver::ObjectiveSpec& objective) {
  return json{{"mode", solver::to_string(objective.mode)},
              {"alpha", objective.alpha},
              {"beta", objective.beta}};
}

solver::ObjectiveSpec objective_from_json(const json& j) {
  solver::ObjectiveSpec spec;
  spec.mode = solver::parse_objective_mode(j.at("mode").get<std::string>());
  if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) spec.beta = j.at("beta").get<double>();
  return spec;
}

}  // namespace

std::string to_string(ContractState state) {
  switch (state) {
    case ContractState::Preliminary: return "preliminary";
    case ContractState::Confirmed: return "confirmed";
    case ContractState::Deleted: return "deleted";
    case ContractState::Expired: return "expired";
  }
  return "?";
}

std::string gateway_id(const std::string& neighbor_pip) { return "gw:" + neighbor_pip; }

std::string gateway_link_id(const std::string& neighbor_pip) {
  return "gwl:" + neighbor_pip;
}

rdl::TopologyGraph augment_substrate(const PipConfig& config) {
  const rdl::TopologyGraph& base = config.substrate;
  if (base.layer() != rdl::Layer::UL)
    throw ConfigError("pip substrate must be a UL graph");
  if (const auto report = rdl::validate_graph(base); !report.ok())
    throw ConfigError("pip substrate invalid: " + report.summary());

  // Extra interfaces the attach nodes grow, one per neighbor.
  std::map<std::string, std::vector<std::string>> extra_ifs;
  for (const auto& [neighbor, cfg] : config.neighbors) {
    if (base.element(cfg.attach) == nullptr || !base.element(cfg.attach)->is_node())
      throw ConfigError("neighbor " + neighbor + ": attach node '" + cfg.attach +
                        "' not in substrate");
    extra_ifs[cfg.attach].push_back("ni:" + cfg.attach + ":" + gateway_link_id(neighbor));
  }

  rdl::TopologyGraph out(base.id(), rdl::Layer::UL);
  for (const auto& [id, ne] : base.elements()) {
    rdl::NetworkElement copy = ne;
    if (auto it = extra_ifs.find(id); it != extra_ifs.end())
      copy.interfaces.insert(copy.interfaces.end(), it->second.begin(), it->second.end());
    out.add(std::move(copy));
  }
  for (const auto& [_, ni] : base.interfaces()) out.add(ni);

  for (const auto& [neighbor, cfg] : config.neighbors) {
    const std::string gw = gateway_id(neighbor);
    const std::string gwl = gateway_link_id(neighbor);
    const std::string ni_attach = "ni:" + cfg.attach + ":" + gwl;
    const std::string ni_link_a = "ni:" + gwl + ":a";
    const std::string ni_link_b = "ni:" + gwl + ":b";
    const std::string ni_gw = "ni:" + gw;

    rdl::NetworkElement gateway;
    gateway.id = gw;
    gateway.type = rdl::parse_type_path(kPipStubType);
    gateway.resources = {rdl::make_resource("bandwidth", cfg.transit_bandwidth)};
    gateway.features = {{"pip", neighbor, ""}};
    gateway.interfaces = {ni_gw};
    out.add(std::move(gateway));

    rdl::NetworkElement attach_link;
    attach_link.id = gwl;
    attach_link.type = rdl::parse_type_path(kTransitLinkType);
    attach_link.resources = {rdl::make_resource("bandwidth", cfg.transit_bandwidth)};
    attach_link.interfaces = {ni_link_a, ni_link_b};
    out.add(std::move(attach_link));

    out.add(rdl::NetworkInterface{ni_attach, cfg.attach, ni_link_a});
    out.add(rdl::NetworkInterface{ni_link_a, gwl, ni_attach});
    out.add(rdl::NetworkInterface{ni_link_b, gwl, ni_gw});
    out.add(rdl::NetworkInterface{ni_gw, gw, ni_link_b});
  }

  if (const auto report = rdl::validate_graph(out); !report.ok())
    throw ConfigError("augmented substrate invalid: " + report.summary());
  return out;
}

PipNode::PipNode(PipConfig config, const std::string& log_dir, ClockFn clock)
    : config_(std::move(config)),
      ul_(augment_substrate(config_)),
      declared_(solver::full_capacities(ul_)),
      plugins_(make_sim_registry()),
      clock_(clock ? std::move(clock) : ClockFn(&now_ms)),
      log_(log_dir) {
  state_.cache.enabled = config_.cache_enabled;
  replay();
}

// ---------------------------------------------------------------------------
// Negotiation

std::string PipNode::negotiate_preliminary(const std::string& partial_cng) {
  return preliminary_impl(partial_cng, clock_(), true);
}

void PipNode::negotiate_confirm(const std::string& contract_id) {
  confirm_impl(contract_id, clock_(), true);
}

void PipNode::negotiate_delete(const std::string& contract_id) {
  delete_impl(contract_id, true);
}

ModifyReport PipNode::negotiate_modify(const ModifyRequest& request) {
  return modify_impl(request, clock_(), true);
}

std::vector<std::string> PipNode::expire_tick(TimestampMs now) {
  return expire_impl(now, true);
}

rdl::TopologyGraph PipNode::complete_partial(const std::string& partial_cng) const {
  rdl::TopologyGraph g0 = codec::deserialize_graph(partial_cng);
  if (g0.layer() != rdl::Layer::OL0)
    throw MalformedDocument("expected an OL0 partial, got " + to_string(g0.layer()));
  rdl::TopologyGraph completed;
  try {
    completed = rdl::completed_with_defaults(g0, config_.feature_defaults, {});
  } catch (const ConflictingGroup& e) {
    throw MalformedDocument(e.what());
  }
  if (const auto report = rdl::validate_graph(completed); !report.ok())
    throw MalformedDocument("partial does not complete to a valid OL1: " +
                            report.summary());
  return completed;
}

void PipNode::check_transit_stubs(const rdl::TopologyGraph& completed,
                                  const SubstrateState& state) const {
  for (const auto& [id, ne] : completed.elements()) {
    if (ne.is_node() && is_pip_stub(ne)) {
      const rdl::Feature* pip_ref = ne.feature("pip");
      if (pip_ref == nullptr)
        throw MalformedDocument("pip stub " + id + " names no neighbor");
      if (config_.neighbors.count(pip_ref->value) == 0)
        throw UnknownNeighborPip(pip_ref->value);
    } else if (ne.is_node()) {
      auto existing = state.vnodes.find(id);
      if (existing != state.vnodes.end())
        throw Rejection("vnode_conflict", "vnode id " + id + " already embedded");
    } else if (ne.is_link() && is_transit_link(ne)) {
      const int tag = dictated_vlan(ne);
      if (state.vlan_in_use.count(tag) > 0)
        throw Rejection("vlan_conflict",
                        "transit vlan " + std::to_string(tag) + " already in use");
    }
  }
}

solver::ResidualMap PipNode::residuals_of(const SubstrateState& state) const {
  solver::ResidualMap residuals = declared_;
  for (auto& [ul_id, kinds] : residuals) {
    auto allocated = state.allocated.find(ul_id);
    if (allocated == state.allocated.end()) continue;
    for (auto& [kind, amount] : kinds) {
      auto used = allocated->second.find(kind);
      if (used != allocated->second.end()) amount -= used->second;
    }
  }
  return residuals;
}

PipNode::EmbedOutcome PipNode::map_partial(
    const rdl::TopologyGraph& completed, const solver::ResidualMap& residuals,
    const solver::ObjectiveSpec& objective,
    const std::optional<rdl::MappingLayer>& prior) const {
  solver::BuildOptions options;
  options.residuals = residuals;
  options.prior = prior;
  options.costs = config_.costs;
  options.max_path_elements = config_.max_path_elements;

  solver::EmbeddingProblem problem;
  try {
    problem = solver::build_problem(ul_, completed, objective, options);
  } catch (const NoCandidates& e) {
    throw Rejection("infeasible", e.what());
  }
  solver::SolveResult result = solver::solve(problem, config_.limits);
  if (auto* infeasible = std::get_if<solver::Infeasible>(&result))
    throw Rejection("infeasible", infeasible->reason);

  EmbedOutcome outcome;
  outcome.completed = completed;
  outcome.mapping =
      solver::to_mapping_layer(std::get<solver::EmbeddingSolution>(result), problem);
  return outcome;
}

void PipNode::assign_vlans(rdl::MappingLayer& ml, const rdl::TopologyGraph& completed,
                           SubstrateState& state, const std::string&) const {
  for (const auto& [id, ne] : completed.elements()) {
    if (!ne.is_link()) continue;
    if (is_transit_link(ne)) {
      const int tag = dictated_vlan(ne);
      if (state.vlan_in_use.count(tag) > 0)
        throw Rejection("vlan_conflict", "transit vlan " + std::to_string(tag));
      state.vlan_in_use[tag] = {id, true};
      ml.vlan_by_link[id] = tag;
      continue;
    }
    int tag = -1;
    for (int candidate = config_.vlan_lo; candidate <= config_.vlan_hi; ++candidate)
      if (state.vlan_in_use.count(candidate) == 0) {
        tag = candidate;
        break;
      }
    if (tag < 0) throw VlanExhausted("pool " + std::to_string(config_.vlan_lo) + "-" +
                                     std::to_string(config_.vlan_hi) + " exhausted");
    state.vlan_in_use[tag] = {id, false};
    ml.vlan_by_link[id] = tag;
  }
}

void PipNode::apply_mapping(const std::string& contract_id,
                            const rdl::TopologyGraph& request,
                            const rdl::MappingLayer& ml, SubstrateState& state) const {
  auto tracked = [this](const std::string& ul_id, const std::string& kind) {
    auto it = declared_.find(ul_id);
    return it != declared_.end() && it->second.count(kind) > 0;
  };
  auto allocate = [&](const std::string& ul_id, const std::string& kind, double amount) {
    if (amount > 0 && tracked(ul_id, kind)) state.allocated[ul_id][kind] += amount;
  };

  auto run_entry = [&](const rdl::MappingEntry& entry, bool node_entry) {
    auto vlan = ml.vlan_by_link.find(entry.ol_id);
    for (std::size_t i = 0; i < entry.segments.size(); ++i) {
      const rdl::MappingSegment& seg = entry.segments[i];
      for (const auto& [kind, amount] : seg.allocations) allocate(seg.ul_id, kind, amount);
      if (i > 0) {
        auto between = solver::connecting_link(ul_, entry.segments[i - 1].ul_id, seg.ul_id);
        auto bw = seg.allocations.find("bandwidth");
        if (between && bw != seg.allocations.end()) allocate(*between, "bandwidth", bw->second);
      }
      SegmentCtx ctx;
      ctx.contract_id = contract_id;
      ctx.ol_id = entry.ol_id;
      ctx.node_entry = node_entry;
      ctx.ul_id = seg.ul_id;
      ctx.allocations = seg.allocations;
      if (!node_entry && vlan != ml.vlan_by_link.end()) ctx.vlan = vlan->second;
      ctx.request_ne = request.element(entry.ol_id);
      plugins_.dispatch(ul_.element(seg.ul_id)->type).apply(ctx, state);
    }
  };

  for (const auto& entry : ml.entries) {
    const rdl::NetworkElement* ne = request.element(entry.ol_id);
    if (ne != nullptr && ne->is_node()) run_entry(entry, true);
  }
  for (const auto& entry : ml.entries) {
    const rdl::NetworkElement* ne = request.element(entry.ol_id);
    if (ne != nullptr && ne->is_link()) run_entry(entry, false);
  }
}

void PipNode::revert_mapping(const std::string& contract_id,
                             const rdl::TopologyGraph& request,
                             const rdl::MappingLayer& ml, SubstrateState& state) const {
  auto tracked = [this](const std::string& ul_id, const std::string& kind) {
    auto it = declared_.find(ul_id);
    return it != declared_.end() && it->second.count(kind) > 0;
  };
  auto release = [&](const std::string& ul_id, const std::string& kind, double amount) {
    if (amount <= 0 || !tracked(ul_id, kind)) return;
    auto ne = state.allocated.find(ul_id);
    if (ne == state.allocated.end()) return;
    auto k = ne->second.find(kind);
    if (k == ne->second.end()) return;
    k->second -= amount;
    if (k->second <= 1e-12) ne->second.erase(k);  // exact zero for integral amounts
    if (ne->second.empty()) state.allocated.erase(ne);
  };

  auto run_entry = [&](const rdl::MappingEntry& entry, bool node_entry) {
    auto vlan = ml.vlan_by_link.find(entry.ol_id);
    for (std::size_t r = entry.segments.size(); r > 0; --r) {
      const std::size_t i = r - 1;
      const rdl::MappingSegment& seg = entry.segments[i];
      SegmentCtx ctx;
      ctx.contract_id = contract_id;
      ctx.ol_id = entry.ol_id;
      ctx.node_entry = node_entry;
      ctx.ul_id = seg.ul_id;
      ctx.allocations = seg.allocations;
      if (!node_entry && vlan != ml.vlan_by_link.end()) ctx.vlan = vlan->second;
      ctx.request_ne = request.element(entry.ol_id);
      plugins_.dispatch(ul_.element(seg.ul_id)->type).revert(ctx, state);

      for (const auto& [kind, amount] : seg.allocations) release(seg.ul_id, kind, amount);
      if (i > 0) {
        auto between = solver::connecting_link(ul_, entry.segments[i - 1].ul_id, seg.ul_id);
        auto bw = seg.allocations.find("bandwidth");
        if (between && bw != seg.allocations.end()) release(*between, "bandwidth", bw->second);
      }
    }
  };

  // Inverse order of apply: links first, newest-sorted-last first.
  for (auto it = ml.entries.rbegin(); it != ml.entries.rend(); ++it) {
    const rdl::NetworkElement* ne = request.element(it->ol_id);
    if (ne != nullptr && ne->is_link()) run_entry(*it, false);
  }
  for (auto it = ml.entries.rbegin(); it != ml.entries.rend(); ++it) {
    const rdl::NetworkElement* ne = request.element(it->ol_id);
    if (ne != nullptr && ne->is_node()) run_entry(*it, true);
  }
}

void PipNode::rollback_contract(Contract& contract, SubstrateState& state) const {
  revert_mapping(contract.id, contract.request, contract.mapping, state);
  for (const auto& [link, tag] : contract.mapping.vlan_by_link) state.vlan_in_use.erase(tag);
}

std::string PipNode::preliminary_impl(const std::string& partial_cng, TimestampMs now,
                                      bool log) {
  std::unique_lock lock(mutex_);

  const rdl::TopologyGraph completed = complete_partial(partial_cng);
  check_transit_stubs(completed, state_);

  EmbedOutcome outcome =
      map_partial(completed, residuals_of(state_), config_.objective, std::nullopt);

  char id_buf[16];
  std::snprintf(id_buf, sizeof(id_buf), "c%04ld", contract_counter_ + 1);
  const std::string contract_id = id_buf;

  SubstrateState next = state_;
  assign_vlans(outcome.mapping, completed, next, contract_id);
  apply_mapping(contract_id, completed, outcome.mapping, next);
  next.cache.replenish();  // the cache cron runs while embedding is inactive

  Contract contract;
  contract.id = contract_id;
  contract.state = ContractState::Preliminary;
  contract.request = outcome.completed;
  contract.mapping = outcome.mapping;
  contract.created_at = now;
  contract.expires_at = now + static_cast<TimestampMs>(config_.ttl_seconds * 1000.0);

  ++contract_counter_;
  contracts_[contract_id] = std::move(contract);
  state_ = std::move(next);

  if (log && !replaying_)
    log_.append("preliminary", json{{"op", "preliminary"}, {"cng", partial_cng},
                                    {"now", now}}.dump(),
                now);
  return contract_id;
}

void PipNode::confirm_impl(const std::string& contract_id, TimestampMs now, bool log) {
  std::unique_lock lock(mutex_);
  auto it = contracts_.find(contract_id);
  if (it == contracts_.end()) throw UnknownContract(contract_id);
  Contract& contract = it->second;
  if (contract.state != ContractState::Preliminary)
    throw NotPreliminary(contract_id + " is " + to_string(contract.state));
  if (contract.expires_at && *contract.expires_at <= now)
    throw NotPreliminary(contract_id + " ttl lapsed");  // the tick will roll it back

  contract.state = ContractState::Confirmed;
  contract.expires_at.reset();
  if (log && !replaying_)
    log_.append("confirm", json{{"op", "confirm"}, {"contract", contract_id},
                                {"now", now}}.dump(),
                now);
}

void PipNode::delete_impl(const std::string& contract_id, bool log) {
  std::unique_lock lock(mutex_);
  auto it = contracts_.find(contract_id);
  if (it == contracts_.end()) throw UnknownContract(contract_id);
  Contract& contract = it->second;
  if (contract.state != ContractState::Preliminary &&
      contract.state != ContractState::Confirmed)
    throw UnknownContract(contract_id + " is " + to_string(contract.state));

  SubstrateState next = state_;
  rollback_contract(contract, next);
  contract.state = ContractState::Deleted;
  contract.expires_at.reset();
  state_ = std::move(next);

  if (log && !replaying_)
    log_.append("delete", json{{"op", "delete"}, {"contract", contract_id}}.dump(),
                clock_());
}

std::vector<std::string> PipNode::expire_impl(TimestampMs now, bool log) {
  std::unique_lock lock(mutex_);
  std::vector<std::string> expired;
  SubstrateState next = state_;
  for (auto& [id, contract] : contracts_) {
    if (contract.state != ContractState::Preliminary) continue;
    if (!contract.expires_at || *contract.expires_at > now) continue;
    rollback_contract(contract, next);
    contract.state = ContractState::Expired;
    contract.expires_at.reset();
    expired.push_back(id);
  }
  if (!expired.empty()) {
    next.cache.replenish();
    state_ = std::move(next);
  }
  if (log && !replaying_ && !expired.empty())
    log_.append("expire", json{{"op", "expire"}, {"now", now}}.dump(), now);
  return expired;
}

ModifyReport PipNode::modify_impl(const ModifyRequest& request, TimestampMs now, bool log) {
  std::unique_lock lock(mutex_);
  auto it = contracts_.find(request.contract_id);
  if (it == contracts_.end()) throw UnknownContract(request.contract_id);
  Contract& contract = it->second;
  if (contract.state != ContractState::Confirmed)
    throw NotConfirmed(request.contract_id + " is " + to_string(contract.state));

  const rdl::TopologyGraph new_request =
      request.partial_cng ? complete_partial(*request.partial_cng) : contract.request;

  // Conflict checks must ignore what this very contract already holds.
  SubstrateState pruned = state_;
  for (const auto& [link, tag] : contract.mapping.vlan_by_link) pruned.vlan_in_use.erase(tag);
  for (const auto& entry : contract.mapping.entries) pruned.vnodes.erase(entry.ol_id);
  check_transit_stubs(new_request, pruned);

  // Residuals with this contract's own allocations handed back.
  solver::ResidualMap residuals = residuals_of(state_);
  const solver::ResidualMap own = solver::mapping_allocations(contract.mapping, ul_);
  for (const auto& [ul_id, kinds] : own)
    for (const auto& [kind, amount] : kinds) {
      auto ne = residuals.find(ul_id);
      if (ne == residuals.end()) continue;
      auto k = ne->second.find(kind);
      if (k != ne->second.end()) k->second += amount;
    }

  solver::ObjectiveSpec objective = request.objective.value_or(
      solver::ObjectiveSpec{solver::ObjectiveSpec::Mode::MigrationAware, 1.0, 1.0});

  solver::BuildOptions options;
  options.residuals = residuals;
  options.prior = contract.mapping;
  options.costs = config_.costs;
  options.max_path_elements = config_.max_path_elements;

  solver::EmbeddingProblem problem;
  try {
    problem = solver::build_problem(ul_, new_request, objective, options);
  } catch (const NoCandidates& e) {
    throw Rejection("infeasible", e.what());
  }
  auto analyzed = solver::analyze_migration(problem, config_.limits);
  if (auto* infeasible = std::get_if<solver::Infeasible>(&analyzed))
    throw Rejection("infeasible", infeasible->reason);
  solver::MigrationPlan plan = std::get<solver::MigrationPlan>(analyzed);

  ModifyReport report;
  report.moves = plan.moves;
  report.remaps = plan.remaps;
  report.migration_cost = plan.solution.migration_cost;
  report.freed_resources = plan.solution.freed_resources;

  std::set<std::string> hosts_before, hosts_after;
  for (const auto& entry : contract.mapping.entries) {
    if (entry.segments.size() != 1) continue;
    const rdl::NetworkElement* ne = contract.request.element(entry.ol_id);
    if (ne == nullptr || !ne->is_node()) continue;
    hosts_before.insert(entry.segments[0].ul_id);
    for (const auto& [kind, amount] : entry.segments[0].allocations)
      report.prior_in_use[kind] += amount;
  }
  for (const auto& [_, host] : plan.solution.node_assign) hosts_after.insert(host);
  report.used_nodes_before = static_cast<int>(hosts_before.size());
  report.used_nodes_after = static_cast<int>(hosts_after.size());

  if (request.dry_run) return report;

  rdl::MappingLayer new_ml = solver::to_mapping_layer(plan.solution, problem);

  SubstrateState next = state_;
  std::map<std::string, Power> powers;
  for (const auto& [vnode_id, runtime] : next.vnodes)
    if (runtime.contract == contract.id) powers[vnode_id] = runtime.power;

  rollback_contract(contract, next);

  // Keep the established tags for links that survive; new links draw fresh.
  for (const auto& [id, ne] : new_request.elements()) {
    if (!ne.is_link()) continue;
    if (is_transit_link(ne)) {
      const int tag = dictated_vlan(ne);
      if (next.vlan_in_use.count(tag) > 0)
        throw Rejection("vlan_conflict", "transit vlan " + std::to_string(tag));
      next.vlan_in_use[tag] = {id, true};
      new_ml.vlan_by_link[id] = tag;
      continue;
    }
    auto old_tag = contract.mapping.vlan_by_link.find(id);
    if (old_tag != contract.mapping.vlan_by_link.end() &&
        next.vlan_in_use.count(old_tag->second) == 0) {
      next.vlan_in_use[old_tag->second] = {id, false};
      new_ml.vlan_by_link[id] = old_tag->second;
      continue;
    }
    int tag = -1;
    for (int candidate = config_.vlan_lo; candidate <= config_.vlan_hi; ++candidate)
      if (next.vlan_in_use.count(candidate) == 0) {
        tag = candidate;
        break;
      }
    if (tag < 0) throw VlanExhausted("during modify of " + contract.id);
    next.vlan_in_use[tag] = {id, false};
    new_ml.vlan_by_link[id] = tag;
  }

  apply_mapping(contract.id, new_request, new_ml, next);

  // Moved vnodes keep their identity and runtime state.
  for (auto& [vnode_id, runtime] : next.vnodes) {
    if (runtime.contract != contract.id) continue;
    auto prior_power = powers.find(vnode_id);
    if (prior_power != powers.end() && runtime.power != prior_power->second) {
      runtime.power = prior_power->second;
      next.log_event(runtime.host, "vnode_restore_power " + vnode_id);
    }
  }
  next.cache.replenish();

  contract.request = new_request;
  contract.mapping = new_ml;
  state_ = std::move(next);
  report.applied = true;

  if (log && !replaying_) {
    json payload{{"op", "modify"}, {"contract", request.contract_id}, {"now", now},
                 {"dry_run", false}};
    if (request.partial_cng) payload["partial"] = *request.partial_cng;
    if (request.objective) payload["objective"] = objective_to_json(*request.objective);
    log_.append("modify", payload.dump(), now);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Provisioning

void PipNode::provision_start(const std::string& vnode_id) {
  provision_impl("start", vnode_id, true);
}

void PipNode::provision_stop(const std::string& vnode_id) {
  provision_impl("stop", vnode_id, true);
}

void PipNode::provision_powercycle(const std::string& vnode_id) {
  provision_impl("powercycle", vnode_id, true);
}

void PipNode::provision_impl(const std::string& action, const std::string& vnode_id,
                             bool log) {
  std::unique_lock lock(mutex_);
  auto it = state_.vnodes.find(vnode_id);
  if (it == state_.vnodes.end()) throw UnknownVNode(vnode_id);
  VnodeRuntime& runtime = it->second;

  if (action == "start") {
    if (runtime.power == Power::Running) {
      state_.log_event(runtime.host, "start_noop " + vnode_id);
    } else {
      runtime.power = Power::Running;
      state_.log_event(runtime.host, "start " + vnode_id);
    }
  } else if (action == "stop") {
    if (runtime.power == Power::Stopped) {
      state_.log_event(runtime.host, "stop_noop " + vnode_id);
    } else {
      runtime.power = Power::Stopped;
      state_.log_event(runtime.host, "stop " + vnode_id);
    }
  } else if (action == "powercycle") {
    state_.log_event(runtime.host, "stop " + vnode_id);
    state_.log_event(runtime.host, "start " + vnode_id);
    runtime.power = Power::Running;
  } else {
    throw ConfigError("unknown provision action " + action);
  }

  if (log && !replaying_)
    log_.append("provision",
                json{{"op", "provision"}, {"action", action}, {"vnode", vnode_id}}.dump(),
                clock_());
}

std::string PipNode::console_lookup(const std::string& vnode_id) const {
  std::shared_lock lock(mutex_);
  auto it = state_.vnodes.find(vnode_id);
  if (it == state_.vnodes.end()) throw UnknownVNode(vnode_id);
  return "console://" + config_.pip_id + "/" + it->second.host + "/" + vnode_id;
}

// ---------------------------------------------------------------------------
// Synchronization & snapshots

std::map<std::string, double> PipNode::sync_resources() const {
  std::shared_lock lock(mutex_);
  std::map<std::string, double> totals;
  for (const auto& [id, ne] : ul_.elements()) {
    if (!ne.is_node()) continue;
    for (const auto& r : ne.resources) {
      if (r.shareable) {
        totals[r.kind] += r.amount;
        continue;
      }
      double used = 0;
      auto allocated = state_.allocated.find(id);
      if (allocated != state_.allocated.end()) {
        auto k = allocated->second.find(r.kind);
        if (k != allocated->second.end()) used = k->second;
      }
      totals[r.kind] += r.amount - used;
    }
  }
  return totals;
}

SubstrateState PipNode::state_snapshot() const {
  std::shared_lock lock(mutex_);
  return state_;
}

std::map<std::string, Contract> PipNode::contracts_snapshot() const {
  std::shared_lock lock(mutex_);
  return contracts_;
}

std::optional<VnodeRuntime> PipNode::vnode(const std::string& vnode_id) const {
  std::shared_lock lock(mutex_);
  auto it = state_.vnodes.find(vnode_id);
  if (it == state_.vnodes.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Replay

void PipNode::replay() {
  if (!log_.enabled()) return;
  const auto entries = log_.read_all();
  if (entries.empty()) return;
  replaying_ = true;
  try {
    for (const auto& entry : entries) {
      const json payload = json::parse(entry.payload);
      const std::string op = payload.at("op").get<std::string>();
      if (op == "preliminary") {
        preliminary_impl(payload.at("cng").get<std::string>(),
                         payload.at("now").get<TimestampMs>(), false);
      } else if (op == "confirm") {
        confirm_impl(payload.at("contract").get<std::string>(),
                     payload.at("now").get<TimestampMs>(), false);
      } else if (op == "delete") {
        delete_impl(payload.at("contract").get<std::string>(), false);
      } else if (op == "expire") {
        expire_impl(payload.at("now").get<TimestampMs>(), false);
      } else if (op == "modify") {
        ModifyRequest request;
        request.contract_id = payload.at("contract").get<std::string>();
        if (payload.contains("partial"))
          request.partial_cng = payload.at("partial").get<std::string>();
        if (payload.contains("objective"))
          request.objective = objective_from_json(payload.at("objective"));
        modify_impl(request, payload.at("now").get<TimestampMs>(), false);
      } else if (op == "provision") {
        provision_impl(payload.at("action").get<std::string>(),
                       payload.at("vnode").get<std::string>(), false);
      } else {
        throw ConfigError("unknown log op " + op);
      }
    }
  } catch (const std::exception& e) {
    replaying_ = false;
    throw ConfigError("log replay failed: " + std::string(e.what()));
  }
  replaying_ = false;
}

}  // namespace cloudnet::pip
