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
#include <set>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "cloudnet/common/durable_log.hpp"
#include "cloudnet/common/util.hpp"
#include "cloudnet/rdl/mapping.hpp"
#include "cloudnet/vnp/config.hpp"

namespace cloudnet::vnp {

enum class CloudNetState { Mapping, Negotiating, Confirmed, Failed, Deleted };

std::string to_string(CloudNetState state);

struct StageFailure {
  std::string stage;  // sync | complete | map | partials | embed | finalize
  std::string code;
  std::string detail;
  std::string pip;  // set when a specific provider caused it
};

struct CloudNetRecord {
  std::string id;
  CloudNetState state = CloudNetState::Mapping;
  rdl::TopologyGraph ol0;
  rdl::TopologyGraph ol1;
  rdl::MappingLayer vnp_mapping;                       // NEs -> PIPs/transit
  std::map<std::string, std::string> partials;         // pip -> partial cng
  std::map<std::string, std::string> contracts;        // pip -> contract id
  std::map<std::string, int> transit_tags;             // cross link -> VLAN
  std::map<std::string, std::string> placement;        // vnode -> pip
  std::map<std::string, std::string> tokens;           // vnode -> console token
  std::vector<std::string> retained_contracts;         // rollback leftovers
  std::optional<StageFailure> failure;

  bool live() const {
    return state == CloudNetState::Negotiating || state == CloudNetState::Confirmed;
  }
};

struct SubmitResult {
  std::string id;
  bool ok = false;
  std::map<std::string, std::string> tokens;
  std::map<std::string, std::string> placement;
  std::optional<StageFailure> failure;
};

struct PartialSet {
  std::map<std::string, rdl::TopologyGraph> by_pip;
  std::map<std::string, int> transit_tags;
};

struct SubstrateView {
  rdl::TopologyGraph graph;
  std::set<std::string> stale;
};

struct WireCallRecord {
  std::string pip;
  std::string method;
  std::string body;
};

/// The Virtual Network Provider: brokers CloudNet requests over a substrate
/// of PIP aggregates and transit links. One mutating pipeline runs at a time;
/// status reads take shared snapshots.
class VnpNode {
 public:
  VnpNode(VnpConfig config, const std::string& log_dir = "", ClockFn clock = nullptr);

  const std::string& id() const { return config_.vnp_id; }

  /// Refreshes every PIP's aggregate resources via sync_resources.
  /// Unreachable PIPs keep their stale values and are flagged.
  SubstrateView synchronize_substrate();

  /// Resolves request vagueness with the VNP default tables. Consistency
  /// groups receive one common value (the VNP's choice when fully vague).
  rdl::TopologyGraph complete_graph(const rdl::TopologyGraph& ol0) const;

  /// Maps a completed request onto the PIP/transit substrate. Treats PIPs as
  /// capacity pools; only direct transit links carry cross-PIP virtual links.
  rdl::MappingLayer map_cloudnet(const rdl::TopologyGraph& ol1) const;

  /// Splits the mapped request into per-PIP partials. Cross-PIP links become
  /// `/link/transit` stubs (same id, same VNP-picked VLAN tag on both sides)
  /// peered to `/node/host/pip` stubs naming the remote provider.
  PartialSet generate_partials(const rdl::TopologyGraph& ol1,
                               const rdl::MappingLayer& mapping) const;

  /// Full life of a request: sync, complete, map, partials, serial embed with
  /// rollback, confirm, boot, hand off console tokens.
  SubmitResult submit_cloudnet(const std::string& ol0_cng);

  void delete_cloudnet(const std::string& id);

  /// JSON status report for one CloudNet.
  std::string cloudnet_status(const std::string& id) const;

  /// Per-PIP migration cost-benefit analysis (dry-run negotiate_modify), or
  /// application of the re-embedding when `apply` is set.
  std::string migrate_analyze(const std::string& id, const std::string& objective_mode,
                              bool apply);

  // -- Introspection -------------------------------------------------------
  SubstrateView substrate_view() const;
  std::optional<CloudNetRecord> record(const std::string& id) const;
  std::vector<WireCallRecord> wire_journal() const;

 private:
  std::string call_pip(const std::string& pip, const std::string& method,
                       const std::string& body);
  void sync_substrate_locked();
  std::map<std::string, double> live_transit_usage() const;
  std::set<int> live_transit_tags() const;
  void rollback_embedded(CloudNetRecord& rec, const std::string& stage,
                         const std::string& code, const std::string& detail,
                         const std::string& pip);
  void persist_record(const CloudNetRecord& rec);
  void replay();

  VnpConfig config_;
  ClockFn clock_;
  DurableLog log_;

  mutable std::shared_mutex mutex_;
  rdl::TopologyGraph substrate_;  // transit graph with refreshed aggregates
  std::set<std::string> stale_;
  std::map<std::string, CloudNetRecord> records_;
  std::vector<WireCallRecord> journal_;
  long record_counter_ = 0;
};

/// Stub element naming for partial graphs.
std::string pip_stub_id(const std::string& remote_pip);

}  // namespace cloudnet::vnp
