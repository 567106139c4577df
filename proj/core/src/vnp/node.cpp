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

#include "cloudnet/vnp/node.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

#include "cloudnet/codec/document.hpp"
#include "cloudnet/common/errors.hpp"
#include "cloudnet/rdl/graph_ops.hpp"
#include "cloudnet/rdl/validate.hpp"
#include "cloudnet/solver/solve.hpp"
#include "cloudnet/wire/client.hpp"

namespace cloudnet::vnp {

namespace {

using nlohmann::json;

constexpr char kTransitLinkType[] = "/link/transit";
constexpr char kPipStubType[] = "/node/host/pip";

std::string state_name(CloudNetState state) {
  switch (state) {
    case CloudNetState::Mapping: return "mapping";
    case CloudNetState::Negotiating: return "negotiating";
    case CloudNetState::Confirmed: return "confirmed";
    case CloudNetState::Failed: return "failed";
    case CloudNetState::Deleted: return "deleted";
  }
  return "?";
}

CloudNetState state_from_name(const std::string& name) {
  if (name == "mapping") return CloudNetState::Mapping;
  if (name == "negotiating") return CloudNetState::Negotiating;
  if (name == "confirmed") return CloudNetState::Confirmed;
  if (name == "failed") return CloudNetState::Failed;
  if (name == "deleted") return CloudNetState::Deleted;
  throw ConfigError("unknown record state " + name);
}

}  // namespace

std::string to_string(CloudNetState state) { return state_name(state); }

std::string pip_stub_id(const std::string& remote_pip) { return "pip:" + remote_pip; }

VnpNode::VnpNode(VnpConfig config, const std::string& log_dir, ClockFn clock)
    : config_(std::move(config)),
      clock_(clock ? std::move(clock) : ClockFn(&now_ms)),
      log_(log_dir),
      substrate_(config_.transit) {
  if (substrate_.layer() != rdl::Layer::UL)
    throw ConfigError("transit topology must be a UL graph");
  if (const auto report = rdl::validate_graph(substrate_); !report.ok())
    throw ConfigError("transit topology invalid: " + report.summary());
  for (const auto& [id, ne] : substrate_.elements()) {
    if (!ne.is_node()) continue;
    if (ne.type.to_string() != kPipStubType)
      throw ConfigError("transit node " + id + " is not a " + kPipStubType + " element");
    if (config_.endpoints.count(id) == 0)
      throw ConfigError("pip " + id + " has no wire endpoint configured");
  }
  replay();
}

// ---------------------------------------------------------------------------
// Wire plumbing

std::string VnpNode::call_pip(const std::string& pip, const std::string& method,
                              const std::string& body) {
  auto endpoint = config_.endpoints.find(pip);
  if (endpoint == config_.endpoints.end()) throw ConfigError("no endpoint for " + pip);
  wire::CallOptions options;
  options.timeout_seconds = config_.call_timeout_seconds;
  journal_.push_back({pip, method, body});
  const wire::Message response = wire::call(endpoint->second, method, body, options);
  return response.body;
}

// ---------------------------------------------------------------------------
// Substrate synchronization

SubstrateView VnpNode::synchronize_substrate() {
  std::unique_lock lock(mutex_);
  sync_substrate_locked();
  return {substrate_, stale_};
}

void VnpNode::sync_substrate_locked() {
  std::map<std::string, std::map<std::string, double>> fresh;
  for (const auto& [id, ne] : substrate_.elements()) {
    if (!ne.is_node()) continue;
    try {
      const std::string body = call_pip(id, "sync_resources", "{}");
      std::map<std::string, double> aggregates = json::parse(body);
      fresh[id] = std::move(aggregates);
      stale_.erase(id);
    } catch (const std::exception&) {
      stale_.insert(id);  // keep the stale aggregate values
    }
  }

  rdl::TopologyGraph updated(substrate_.id(), rdl::Layer::UL);
  for (const auto& [id, ne] : substrate_.elements()) {
    rdl::NetworkElement copy = ne;
    auto it = fresh.find(id);
    if (it != fresh.end()) {
      copy.resources.clear();
      for (const auto& [kind, amount] : it->second)
        copy.resources.push_back(rdl::make_resource(kind, amount));
    }
    updated.add(std::move(copy));
  }
  for (const auto& [_, ni] : substrate_.interfaces()) updated.add(ni);
  substrate_ = std::move(updated);
}

SubstrateView VnpNode::substrate_view() const {
  std::shared_lock lock(mutex_);
  return {substrate_, stale_};
}

// ---------------------------------------------------------------------------
// Pure mapping stages

rdl::TopologyGraph VnpNode::complete_graph(const rdl::TopologyGraph& ol0) const {
  if (ol0.layer() != rdl::Layer::OL0)
    throw MalformedDocument("expected an OL0 request, got " + to_string(ol0.layer()));

  // Completion first: a consistency-group conflict is its own error, more
  // precise than the generic validation verdict on the same graph.
  rdl::TopologyGraph ol1 = rdl::completed_with_defaults(ol0, config_.feature_defaults,
                                                        config_.resource_defaults);
  if (const auto report = rdl::validate_graph(ol0); !report.ok())
    throw MalformedDocument("request invalid: " + report.summary());
  if (const auto report = rdl::validate_graph(ol1); !report.ok())
    throw InvalidGraph("request does not complete to a valid OL1: " + report.summary());
  return ol1;
}

std::map<std::string, double> VnpNode::live_transit_usage() const {
  std::map<std::string, double> usage;
  for (const auto& [_, rec] : records_) {
    if (!rec.live()) continue;
    const auto allocations = solver::mapping_allocations(rec.vnp_mapping, substrate_);
    for (const auto& [ul_id, kinds] : allocations) {
      const rdl::NetworkElement* ne = substrate_.element(ul_id);
      if (ne == nullptr || !ne->is_link()) continue;
      auto bw = kinds.find("bandwidth");
      if (bw != kinds.end()) usage[ul_id] += bw->second;
    }
  }
  return usage;
}

std::set<int> VnpNode::live_transit_tags() const {
  std::set<int> used;
  for (const auto& [_, rec] : records_)
    if (rec.live())
      for (const auto& [link, tag] : rec.transit_tags) used.insert(tag);
  return used;
}

rdl::MappingLayer VnpNode::map_cloudnet(const rdl::TopologyGraph& ol1) const {
  solver::ResidualMap residuals = solver::full_capacities(substrate_);
  for (const auto& [link, used] : live_transit_usage()) {
    auto it = residuals.find(link);
    if (it == residuals.end()) continue;
    auto bw = it->second.find("bandwidth");
    if (bw != it->second.end()) bw->second = std::max(0.0, bw->second - used);
  }

  solver::BuildOptions options;
  options.residuals = residuals;
  options.costs = config_.costs;
  // Cross-PIP links are stitched over exactly one transit link; longer relay
  // chains through intermediate providers are not part of this protocol.
  options.max_path_elements = 2;

  solver::EmbeddingProblem problem;
  try {
    problem = solver::build_problem(substrate_, ol1, config_.objective, options);
  } catch (const NoCandidates& e) {
    throw Rejection("infeasible", e.what());
  }
  solver::SolveResult result = solver::solve(problem, config_.limits);
  if (auto* infeasible = std::get_if<solver::Infeasible>(&result))
    throw Rejection("infeasible", infeasible->reason);
  return solver::to_mapping_layer(std::get<solver::EmbeddingSolution>(result), problem);
}

PartialSet VnpNode::generate_partials(const rdl::TopologyGraph& ol1,
                                      const rdl::MappingLayer& mapping) const {
  PartialSet out;

  std::map<std::string, std::string> node_pip;
  std::map<std::string, std::vector<std::string>> intra_links;   // pip -> links
  std::map<std::string, std::pair<std::string, std::string>> cross_links;  // link -> (pipA, pipB)
  for (const auto& entry : mapping.entries) {
    const rdl::NetworkElement* ne = ol1.element(entry.ol_id);
    if (ne == nullptr) continue;
    if (ne->is_node()) {
      node_pip[entry.ol_id] = entry.segments.at(0).ul_id;
    } else if (entry.segments.size() == 1) {
      intra_links[entry.segments[0].ul_id].push_back(entry.ol_id);
    } else {
      cross_links[entry.ol_id] = {entry.segments.front().ul_id,
                                  entry.segments.back().ul_id};
    }
  }

  std::map<std::string, std::vector<std::string>> nodes_of;  // pip -> nodes
  for (const auto& [node, pip] : node_pip) nodes_of[pip].push_back(node);

  // Assign transit tags, lowest free first, in link id order.
  std::set<int> used = live_transit_tags();
  for (const auto& [link, _] : cross_links) {
    int tag = -1;
    for (int candidate = config_.transit_vlan_lo; candidate <= config_.transit_vlan_hi;
         ++candidate)
      if (used.count(candidate) == 0) {
        tag = candidate;
        break;
      }
    if (tag < 0) throw TransitVlanExhausted("pool " + std::to_string(config_.transit_vlan_lo) +
                                            "-" + std::to_string(config_.transit_vlan_hi));
    used.insert(tag);
    out.transit_tags[link] = tag;
  }

  std::set<std::string> pips;
  for (const auto& [pip, _] : nodes_of) pips.insert(pip);

  for (const auto& pip : pips) {
    rdl::TopologyGraph partial(ol1.id() + ":" + pip, rdl::Layer::OL0);

    std::set<std::string> included_nis;
    auto include_element = [&](const std::string& ne_id) {
      const rdl::NetworkElement& ne = *ol1.element(ne_id);
      partial.add(ne);
      for (const auto& ni : ne.interfaces) included_nis.insert(ni);
    };

    for (const auto& node : nodes_of[pip]) include_element(node);
    auto intra = intra_links.find(pip);
    if (intra != intra_links.end())
      for (const auto& link : intra->second) include_element(link);

    // Transit stubs for cross links touching this pip.
    std::map<std::string, std::vector<std::string>> stub_ifs;  // stub node -> NIs
    std::vector<rdl::NetworkInterface> stub_nis;
    for (const auto& [link, sides] : cross_links) {
      if (sides.first != pip && sides.second != pip) continue;
      const std::string remote = sides.first == pip ? sides.second : sides.first;
      const rdl::NetworkElement& orig = *ol1.element(link);
      auto ends = ol1.link_endpoints(orig);

      // The interface towards the local vnode keeps its peering; the far one
      // is re-peered into the stub node.
      std::string ni_local, ni_remote;
      for (const auto& ni_id : orig.interfaces) {
        const rdl::NetworkInterface& ni = *ol1.interface(ni_id);
        const std::string& peer_owner = ol1.interface(*ni.peer)->owner;
        if (node_pip.at(peer_owner) == pip)
          ni_local = ni_id;
        else
          ni_remote = ni_id;
      }

      rdl::NetworkElement transit;
      transit.id = link;
      transit.type = rdl::parse_type_path(kTransitLinkType);
      transit.resources = orig.resources;
      for (const auto& f : orig.features)
        if (f.key != "vlan") transit.features.push_back(f);
      transit.features.push_back({"vlan", std::to_string(out.transit_tags.at(link)), ""});
      transit.interfaces = {ni_local, ni_remote};
      partial.add(std::move(transit));

      const std::string stub = pip_stub_id(remote);
      const std::string stub_ni = "ni:" + stub + ":" + link;
      stub_ifs[stub].push_back(stub_ni);
      stub_nis.push_back({stub_ni, stub, ni_remote});

      partial.add(rdl::NetworkInterface{ni_local, link, ol1.interface(ni_local)->peer});
      partial.add(rdl::NetworkInterface{ni_remote, link, stub_ni});
      included_nis.insert(ni_local);
      included_nis.insert(ni_remote);
    }

    for (const auto& [stub, ifs] : stub_ifs) {
      rdl::NetworkElement ne;
      ne.id = stub;
      ne.type = rdl::parse_type_path(kPipStubType);
      ne.features = {{"pip", stub.substr(4), ""}};
      ne.interfaces = ifs;
      partial.add(std::move(ne));
    }
    for (const auto& ni : stub_nis) partial.add(ni);

    // Interfaces of included elements, with peers that left the partial
    // cleared (the stub machinery above re-peered the cross-link ones).
    for (const auto& ni_id : included_nis) {
      if (partial.interface(ni_id) != nullptr) continue;  // already added
      rdl::NetworkInterface ni = *ol1.interface(ni_id);
      if (ni.peer && included_nis.count(*ni.peer) == 0) ni.peer.reset();
      partial.add(std::move(ni));
    }

    out.by_pip.emplace(pip, std::move(partial));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The pipeline

SubmitResult VnpNode::submit_cloudnet(const std::string& ol0_cng) {
  std::unique_lock lock(mutex_);

  char id_buf[16];
  std::snprintf(id_buf, sizeof(id_buf), "cn%04ld", ++record_counter_);
  CloudNetRecord rec;
  rec.id = id_buf;

  SubmitResult result;
  result.id = rec.id;

  auto fail = [&](const std::string& stage, const std::string& code,
                  const std::string& detail, const std::string& pip = "") {
    rec.state = CloudNetState::Failed;
    rec.failure = StageFailure{stage, code, detail, pip};
    result.failure = rec.failure;
    records_[rec.id] = rec;
    persist_record(rec);
    return result;
  };

  // -- sync: partial failures become stale flags, never a stage failure.
  sync_substrate_locked();

  // -- complete
  try {
    rec.ol0 = codec::deserialize_graph(ol0_cng);
    rec.ol1 = complete_graph(rec.ol0);
  } catch (const Error& e) {
    return fail("complete", e.code(), e.what());
  }

  // -- map
  try {
    rec.vnp_mapping = map_cloudnet(rec.ol1);
  } catch (const Error& e) {
    return fail("map", e.code(), e.what());
  }

  // -- partials
  try {
    PartialSet partials = generate_partials(rec.ol1, rec.vnp_mapping);
    rec.transit_tags = partials.transit_tags;
    for (const auto& [pip, graph] : partials.by_pip)
      rec.partials[pip] = codec::serialize(graph);
    for (const auto& entry : rec.vnp_mapping.entries) {
      const rdl::NetworkElement* ne = rec.ol1.element(entry.ol_id);
      if (ne != nullptr && ne->is_node()) rec.placement[entry.ol_id] = entry.segments[0].ul_id;
    }
  } catch (const Error& e) {
    return fail("partials", e.code(), e.what());
  }

  // -- embed: strictly serial, ascending pip id, rollback on first failure.
  for (const auto& [pip, partial_cng] : rec.partials) {
    try {
      const json reply = json::parse(call_pip(pip, "negotiate_preliminary", partial_cng));
      rec.contracts[pip] = reply.at("contract").get<std::string>();
    } catch (const Error& e) {
      rollback_embedded(rec, "embed", e.code(), e.what(), pip);
      result.failure = rec.failure;
      records_[rec.id] = rec;
      persist_record(rec);
      return result;
    }
  }
  rec.state = CloudNetState::Negotiating;

  // -- finalize: confirm everything, boot every vnode, collect consoles.
  for (const auto& [pip, contract] : rec.contracts) {
    try {
      call_pip(pip, "negotiate_confirm", json{{"contract", contract}}.dump());
    } catch (const Error& e) {
      rollback_embedded(rec, "finalize", "confirm_failed",
                        std::string("confirm at ") + pip + ": " + e.what(), pip);
      result.failure = rec.failure;
      records_[rec.id] = rec;
      persist_record(rec);
      return result;
    }
  }
  try {
    for (const auto& [vnode, pip] : rec.placement) {
      call_pip(pip, "provision_start", json{{"vnode", vnode}}.dump());
      const json reply = json::parse(call_pip(pip, "console_lookup",
                                              json{{"vnode", vnode}}.dump()));
      rec.tokens[vnode] = reply.at("console").get<std::string>();
    }
  } catch (const Error& e) {
    rollback_embedded(rec, "finalize", e.code(), e.what(), "");
    result.failure = rec.failure;
    records_[rec.id] = rec;
    persist_record(rec);
    return result;
  }

  rec.state = CloudNetState::Confirmed;
  records_[rec.id] = rec;
  persist_record(rec);

  result.ok = true;
  result.tokens = rec.tokens;
  result.placement = rec.placement;
  return result;
}

void VnpNode::rollback_embedded(CloudNetRecord& rec, const std::string& stage,
                                const std::string& code, const std::string& detail,
                                const std::string& pip) {
  for (const auto& [contracted_pip, contract] : rec.contracts) {
    try {
      call_pip(contracted_pip, "negotiate_delete", json{{"contract", contract}}.dump());
    } catch (const std::exception&) {
      rec.retained_contracts.push_back(contracted_pip + "/" + contract);
    }
  }
  rec.state = CloudNetState::Failed;
  std::string full_detail = detail;
  if (!rec.retained_contracts.empty()) {
    full_detail += " (rollback incomplete:";
    for (const auto& retained : rec.retained_contracts) full_detail += " " + retained;
    full_detail += ")";
  }
  rec.failure = StageFailure{stage, code, full_detail, pip};
}

void VnpNode::delete_cloudnet(const std::string& id) {
  std::unique_lock lock(mutex_);
  auto it = records_.find(id);
  if (it == records_.end() || it->second.state != CloudNetState::Confirmed)
    throw UnknownCloudNet(id);
  CloudNetRecord& rec = it->second;

  std::vector<std::string> retained;
  for (const auto& [pip, contract] : rec.contracts) {
    try {
      call_pip(pip, "negotiate_delete", json{{"contract", contract}}.dump());
    } catch (const std::exception&) {
      retained.push_back(pip + "/" + contract);
    }
  }
  if (!retained.empty()) {
    rec.retained_contracts = retained;
    rec.state = CloudNetState::Failed;
    persist_record(rec);
    std::string detail;
    for (const auto& r : retained) detail += (detail.empty() ? "" : " ") + r;
    throw RollbackIncomplete(detail);
  }
  rec.state = CloudNetState::Deleted;
  persist_record(rec);
}

std::string VnpNode::cloudnet_status(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(id);
  if (it == records_.end()) throw UnknownCloudNet(id);
  const CloudNetRecord& rec = it->second;

  json j{{"id", rec.id},
         {"state", state_name(rec.state)},
         {"placement", rec.placement},
         {"tokens", rec.tokens},
         {"contracts", rec.contracts},
         {"transit_tags", rec.transit_tags}};
  if (!rec.vnp_mapping.entries.empty()) j["mapping"] = codec::serialize(rec.vnp_mapping);
  if (rec.failure)
    j["failure"] = {{"stage", rec.failure->stage},
                    {"code", rec.failure->code},
                    {"detail", rec.failure->detail},
                    {"pip", rec.failure->pip}};
  if (!rec.retained_contracts.empty()) j["retained_contracts"] = rec.retained_contracts;
  return j.dump();
}

std::string VnpNode::migrate_analyze(const std::string& id,
                                     const std::string& objective_mode, bool apply) {
  std::unique_lock lock(mutex_);
  auto it = records_.find(id);
  if (it == records_.end() || it->second.state != CloudNetState::Confirmed)
    throw UnknownCloudNet(id);
  CloudNetRecord& rec = it->second;

  const solver::ObjectiveSpec::Mode mode = solver::parse_objective_mode(objective_mode);
  if (mode == solver::ObjectiveSpec::Mode::MinCongestion)
    throw ConfigError("migration analysis runs under compact or migration_aware");

  json per_pip = json::object();
  double total_cost = 0;
  int total_moves = 0;
  std::map<std::string, double> total_freed;
  for (const auto& [pip, contract] : rec.contracts) {
    const json body{{"contract", contract},
                    {"objective", {{"mode", objective_mode}, {"alpha", 1.0}, {"beta", 1.0}}},
                    {"dry_run", !apply}};
    const json plan = json::parse(call_pip(pip, "negotiate_modify", body.dump()));
    total_cost += plan.at("migration_cost").get<double>();
    total_moves += static_cast<int>(plan.at("moves").size());
    for (const auto& [kind, amount] : plan.at("freed_resources").items())
      total_freed[kind] += amount.get<double>();
    per_pip[pip] = plan;
  }

  if (apply) {
    for (const auto& [vnode, pip] : rec.placement) {
      const json reply =
          json::parse(call_pip(pip, "console_lookup", json{{"vnode", vnode}}.dump()));
      rec.tokens[vnode] = reply.at("console").get<std::string>();
    }
    persist_record(rec);
  }

  return json{{"cloudnet", id},
              {"objective", objective_mode},
              {"applied", apply},
              {"per_pip", per_pip},
              {"total_migration_cost", total_cost},
              {"total_moves", total_moves},
              {"total_freed", total_freed}}
      .dump();
}

// ---------------------------------------------------------------------------
// Snapshots, persistence

std::optional<CloudNetRecord> VnpNode::record(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::vector<WireCallRecord> VnpNode::wire_journal() const {
  std::shared_lock lock(mutex_);
  return journal_;
}

void VnpNode::persist_record(const CloudNetRecord& rec) {
  if (!log_.enabled()) return;
  json j{{"op", "record"},
         {"id", rec.id},
         {"state", state_name(rec.state)},
         {"partials", rec.partials},
         {"contracts", rec.contracts},
         {"transit_tags", rec.transit_tags},
         {"placement", rec.placement},
         {"tokens", rec.tokens},
         {"retained", rec.retained_contracts}};
  try {
    if (!rec.ol0.id().empty()) j["ol0"] = codec::serialize(rec.ol0);
    if (!rec.ol1.id().empty()) j["ol1"] = codec::serialize(rec.ol1);
    if (!rec.vnp_mapping.request_graph_id.empty())
      j["mapping"] = codec::serialize(rec.vnp_mapping);
  } catch (const Error&) {
    // A record that failed validation mid-pipeline persists without graphs.
  }
  if (rec.failure)
    j["failure"] = {{"stage", rec.failure->stage},
                    {"code", rec.failure->code},
                    {"detail", rec.failure->detail},
                    {"pip", rec.failure->pip}};
  log_.append("record", j.dump(), clock_());
}

void VnpNode::replay() {
  if (!log_.enabled()) return;
  for (const auto& entry : log_.read_all()) {
    const json j = json::parse(entry.payload);
    if (j.at("op").get<std::string>() != "record") continue;
    CloudNetRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.state = state_from_name(j.at("state").get<std::string>());
    rec.partials = j.at("partials").get<std::map<std::string, std::string>>();
    rec.contracts = j.at("contracts").get<std::map<std::string, std::string>>();
    rec.transit_tags = j.at("transit_tags").get<std::map<std::string, int>>();
    rec.placement = j.at("placement").get<std::map<std::string, std::string>>();
    rec.tokens = j.at("tokens").get<std::map<std::string, std::string>>();
    rec.retained_contracts = j.at("retained").get<std::vector<std::string>>();
    if (j.contains("ol0")) rec.ol0 = codec::deserialize_graph(j.at("ol0").get<std::string>());
    if (j.contains("ol1")) rec.ol1 = codec::deserialize_graph(j.at("ol1").get<std::string>());
    if (j.contains("mapping"))
      rec.vnp_mapping = codec::deserialize_mapping(j.at("mapping").get<std::string>());
    if (j.contains("failure"))
      rec.failure = StageFailure{j.at("failure").at("stage").get<std::string>(),
                                 j.at("failure").at("code").get<std::string>(),
                                 j.at("failure").at("detail").get<std::string>(),
                                 j.at("failure").at("pip").get<std::string>()};
    const long number = std::atol(rec.id.c_str() + 2);
    record_counter_ = std::max(record_counter_, number);
    records_[rec.id] = std::move(rec);
  }
}

}  // namespace cloudnet::vnp
