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

#include <optional>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "cloudnet/common/durable_log.hpp"
#include "cloudnet/common/util.hpp"
#include "cloudnet/pip/config.hpp"
#include "cloudnet/pip/plugins.hpp"
#include "cloudnet/pip/state.hpp"
#include "cloudnet/solver/solve.hpp"

namespace cloudnet::pip {

enum class ContractState { Preliminary, Confirmed, Deleted, Expired };

std::string to_string(ContractState state);

/// A negotiated (partial) CloudNet held by this PIP. Preliminary contracts
/// are embedded for real and expire unless confirmed in time.
struct Contract {
  std::string id;
  ContractState state = ContractState::Preliminary;
  rdl::TopologyGraph request;  // completed OL1
  rdl::MappingLayer mapping;
  TimestampMs created_at = 0;
  std::optional<TimestampMs> expires_at;  // Preliminary only
};

struct ModifyRequest {
  std::string contract_id;
  std::optional<std::string> partial_cng;  // absent: re-embed the stored request
  std::optional<solver::ObjectiveSpec> objective;
  bool dry_run = false;
};

struct ModifyReport {
  std::vector<solver::VnodeMove> moves;
  std::vector<solver::LinkRemap> remaps;
  double migration_cost = 0;
  std::map<std::string, double> freed_resources;
  std::map<std::string, double> prior_in_use;  // this contract's node allocations
  int used_nodes_before = 0;
  int used_nodes_after = 0;
  bool applied = false;
};

/// The Physical Infrastructure Provider: owns the (simulated) substrate,
/// serves resource synchronization, runs the two-stage negotiation and
/// provisions vnodes/vlinks through type-dispatched plugins.
///
/// Mutating operations are serialized; read-only operations take shared
/// snapshots and may run concurrently with each other.
class PipNode {
 public:
  PipNode(PipConfig config, const std::string& log_dir = "", ClockFn clock = nullptr);

  const std::string& id() const { return config_.pip_id; }

  // -- Negotiation interface --------------------------------------------
  /// Embeds a serialized partial graph preliminarily: completes it to OL1,
  /// solves the embedding against residual capacities, allocates internal
  /// VLANs, applies every plugin, and stores a Preliminary contract. Failure
  /// of any step leaves the substrate byte-identical to before the call.
  std::string negotiate_preliminary(const std::string& partial_cng);

  void negotiate_confirm(const std::string& contract_id);
  void negotiate_delete(const std::string& contract_id);
  ModifyReport negotiate_modify(const ModifyRequest& request);

  /// Rolls back every Preliminary contract whose ttl has lapsed.
  std::vector<std::string> expire_tick(TimestampMs now);

  // -- Provisioning interface -------------------------------------------
  void provision_start(const std::string& vnode_id);
  void provision_stop(const std::string& vnode_id);
  void provision_powercycle(const std::string& vnode_id);
  std::string console_lookup(const std::string& vnode_id) const;

  // -- Synchronization ----------------------------------------------------
  /// Aggregate residual resources per kind. Deliberately coarse: the VNP
  /// never sees individual substrate nodes through this.
  std::map<std::string, double> sync_resources() const;

  // -- Introspection (in-process only; not part of the wire surface) ------
  const rdl::TopologyGraph& substrate() const { return ul_; }
  SubstrateState state_snapshot() const;
  std::map<std::string, Contract> contracts_snapshot() const;
  std::optional<VnodeRuntime> vnode(const std::string& vnode_id) const;
  const PipConfig& config() const { return config_; }

 private:
  struct EmbedOutcome {
    rdl::TopologyGraph completed;
    rdl::MappingLayer mapping;
  };

  std::string preliminary_impl(const std::string& partial_cng, TimestampMs now, bool log);
  void confirm_impl(const std::string& contract_id, TimestampMs now, bool log);
  void delete_impl(const std::string& contract_id, bool log);
  ModifyReport modify_impl(const ModifyRequest& request, TimestampMs now, bool log);
  std::vector<std::string> expire_impl(TimestampMs now, bool log);
  void provision_impl(const std::string& action, const std::string& vnode_id, bool log);

  EmbedOutcome map_partial(const rdl::TopologyGraph& completed,
                           const solver::ResidualMap& residuals,
                           const solver::ObjectiveSpec& objective,
                           const std::optional<rdl::MappingLayer>& prior) const;
  rdl::TopologyGraph complete_partial(const std::string& partial_cng) const;
  void check_transit_stubs(const rdl::TopologyGraph& completed,
                           const SubstrateState& state) const;
  solver::ResidualMap residuals_of(const SubstrateState& state) const;
  void assign_vlans(rdl::MappingLayer& ml, const rdl::TopologyGraph& completed,
                    SubstrateState& state, const std::string& contract_id) const;
  void apply_mapping(const std::string& contract_id, const rdl::TopologyGraph& request,
                     const rdl::MappingLayer& ml, SubstrateState& state) const;
  void revert_mapping(const std::string& contract_id, const rdl::TopologyGraph& request,
                      const rdl::MappingLayer& ml, SubstrateState& state) const;
  void rollback_contract(Contract& contract, SubstrateState& state) const;
  void replay();

  PipConfig config_;
  rdl::TopologyGraph ul_;  // augmented with transit gateways
  solver::ResidualMap declared_;
  PluginRegistry plugins_;
  ClockFn clock_;
  DurableLog log_;
  bool replaying_ = false;

  mutable std::shared_mutex mutex_;
  SubstrateState state_;
  std::map<std::string, Contract> contracts_;
  long contract_counter_ = 0;
};

/// Gateway/attach-link element ids the augmentation introduces for a
/// neighbor. Exposed so tests and the VNP-side tooling can reason about them.
std::string gateway_id(const std::string& neighbor_pip);
std::string gateway_link_id(const std::string& neighbor_pip);

/// The substrate actually embedded onto: the configured UL plus one
/// `/node/host/pip` gateway (behind the configured tunnel bridge) per
/// neighbor, carrying the transit bandwidth.
rdl::TopologyGraph augment_substrate(const PipConfig& config);

}  // namespace cloudnet::pip
