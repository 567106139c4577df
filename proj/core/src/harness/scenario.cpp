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

#include "cloudnet/harness/scenario.hpp"

#include <json.hpp>

#include <cstdio>

#include "cloudnet/codec/document.hpp"
#include "cloudnet/common/errors.hpp"
#include "cloudnet/harness/builder.hpp"
#include "cloudnet/harness/checks.hpp"
#include "cloudnet/harness/cluster.hpp"

namespace cloudnet::harness {

namespace {

using nlohmann::json;

class Checker {
 public:
  explicit Checker(std::string scenario) { report_.scenario = std::move(scenario); }

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    report_.checks.push_back({name, ok, detail});
  }

  template <typename T, typename U>
  void check_eq(const std::string& name, const T& got, const U& want) {
    const bool ok = got == static_cast<T>(want);
    std::string detail;
    if (!ok) {
      if constexpr (std::is_arithmetic_v<T>)
        detail = "got " + std::to_string(got) + ", want " + std::to_string(want);
      else
        detail = "mismatch";
    }
    report_.checks.push_back({name, ok, detail});
  }

  void metric(const std::string& key, double value) { report_.metrics[key] = value; }

  ScenarioReport take() { return std::move(report_); }

 private:
  ScenarioReport report_;
};

std::string leaf_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "leaf%02d", i);
  return buf;
}

std::string link_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "l%02d", i);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared fixtures

pip::PipConfig star13_pip1() {
  pip::PipConfig config;
  config.pip_id = "pip1";
  config.substrate =
      GraphBuilder("pip1-ul", rdl::Layer::UL)
          .node("h1", "/node/host/sim", {ram(2048), cpu(8), bandwidth(1000)})
          .node("h2", "/node/host/sim", {ram(2048), cpu(8), bandwidth(1000)})
          .node("h3", "/node/host/sim", {ram(2048), cpu(8), bandwidth(1000)})
          .node("sw1", "/node/switch/sim", {bandwidth(10000)})
          .node("tbr1", "/node/bridge/tunnel-sim", {bandwidth(1000)})
          .link("el1", "/link/ethernet-sim", "h1", "sw1", {bandwidth(1000)})
          .link("el2", "/link/ethernet-sim", "h2", "sw1", {bandwidth(1000)})
          .link("el3", "/link/ethernet-sim", "h3", "sw1", {bandwidth(1000)})
          .link("el4", "/link/ethernet-sim", "tbr1", "sw1", {bandwidth(1000)})
          .graph();
  config.vlan_lo = 100;
  config.vlan_hi = 199;
  config.neighbors["pip2"] = {100, "tbr1"};
  return config;
}

pip::PipConfig star13_pip2() {
  pip::PipConfig config;
  config.pip_id = "pip2";
  config.substrate = GraphBuilder("pip2-ul", rdl::Layer::UL)
                         .node("k1", "/node/host/sim", {ram(512), cpu(2), bandwidth(1000)})
                         .node("tbr2", "/node/bridge/tunnel-sim", {bandwidth(1000)})
                         .link("ek1", "/link/ethernet-sim", "k1", "tbr2", {bandwidth(1000)})
                         .graph();
  config.vlan_lo = 200;
  config.vlan_hi = 299;
  config.neighbors["pip1"] = {100, "tbr2"};
  return config;
}

vnp::VnpConfig two_pip_vnp(double transit_bw) {
  vnp::VnpConfig config;
  config.transit = GraphBuilder("transit", rdl::Layer::UL)
                       .node("pip1", "/node/host/pip")
                       .node("pip2", "/node/host/pip")
                       .link("t12", "/link/transit", "pip1", "pip2", {bandwidth(transit_bw)})
                       .graph();
  config.feature_defaults = {{"virtualization", "sim-paravirt"}, {"arch", "amd64"}};
  return config;
}

rdl::TopologyGraph star13_request() {
  GraphBuilder b("star13", rdl::Layer::OL0);
  b.node("hub", "/node/host/generic", {ram(512), cpu(1)});
  for (int i = 1; i <= 12; ++i)
    b.node(leaf_name(i), "/node/host/generic", {ram(512), cpu(1)});
  for (int i = 1; i <= 12; ++i)
    b.link(link_name(i), "/link/vlan", "hub", leaf_name(i), {bandwidth(10)});
  return b.graph();
}

// ---------------------------------------------------------------------------
// star13

ScenarioReport run_star13() {
  Checker out("star13");
  Cluster cluster;
  cluster.add_pip(star13_pip1());
  cluster.add_pip(star13_pip2());
  vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp(100));

  const vnp::SubmitResult result =
      vnp.submit_cloudnet(codec::serialize(star13_request()));
  out.check("submit succeeds", result.ok,
            result.failure ? result.failure->stage + ": " + result.failure->detail : "");
  if (!result.ok) return out.take();

  out.check_eq("13 console tokens", result.tokens.size(), std::size_t{13});

  int on_pip1 = 0, on_pip2 = 0;
  for (const auto& [vnode, pip] : result.placement) {
    if (pip == "pip1") ++on_pip1;
    if (pip == "pip2") ++on_pip2;
  }
  out.check_eq("12 vnodes on pip1", on_pip1, 12);
  out.check_eq("1 vnode on pip2", on_pip2, 1);
  out.metric("pip1_vnodes", on_pip1);
  out.metric("pip2_vnodes", on_pip2);

  const auto rec = vnp.record(result.id);
  out.check("record confirmed", rec && rec->state == vnp::CloudNetState::Confirmed);
  out.check_eq("exactly one cross-PIP link", rec->transit_tags.size(), std::size_t{1});
  out.metric("cross_links", static_cast<double>(rec->transit_tags.size()));

  // The cross link rides the transit link with the same VNP-picked tag in
  // both partials.
  bool tags_match = false;
  bool over_transit = false;
  if (rec->transit_tags.size() == 1) {
    const auto& [cross_link, tag] = *rec->transit_tags.begin();
    const rdl::MappingEntry* entry = rec->vnp_mapping.entry(cross_link);
    over_transit = entry != nullptr && entry->segments.size() == 2;

    int seen = 0;
    tags_match = true;
    for (const auto& [pip, partial_cng] : rec->partials) {
      const rdl::TopologyGraph partial = codec::deserialize_graph(partial_cng);
      const rdl::NetworkElement* stub = partial.element(cross_link);
      if (stub == nullptr) continue;
      ++seen;
      if (stub->type.to_string() != "/link/transit") tags_match = false;
      const rdl::Feature* vlan = stub->feature("vlan");
      if (vlan == nullptr || vlan->value != std::to_string(tag)) tags_match = false;
    }
    if (seen != 2) tags_match = false;
    out.metric("transit_tag", tag);
  }
  out.check("cross link mapped over the transit link", over_transit);
  out.check("matching VLAN tag in both partials", tags_match);

  // PIP-side bookkeeping: the dictated tag trunks on bridge and gateway; the
  // eleven intra-PIP links hold eleven distinct pool tags on pip1.
  const auto pip1_state = cluster.pip("pip1").state_snapshot();
  const auto pip2_state = cluster.pip("pip2").state_snapshot();
  int pip1_internal = 0, pip1_dictated = 0;
  for (const auto& [tag, use] : pip1_state.vlan_in_use)
    use.dictated ? ++pip1_dictated : ++pip1_internal;
  out.check_eq("pip1 internal VLANs", pip1_internal, 11);
  out.check_eq("pip1 dictated transit VLANs", pip1_dictated, 1);
  out.check_eq("pip2 VLANs (dictated only)", pip2_state.vlan_in_use.size(), std::size_t{1});

  int running = 0;
  for (const auto& [_, runtime] : pip1_state.vnodes)
    if (runtime.power == pip::Power::Running) ++running;
  for (const auto& [_, runtime] : pip2_state.vnodes)
    if (runtime.power == pip::Power::Running) ++running;
  out.check_eq("all 13 vnodes running", running, 13);

  auto violation = conservation_violation(cluster.pip("pip1"));
  out.check("pip1 conservation", !violation, violation.value_or(""));
  violation = conservation_violation(cluster.pip("pip2"));
  out.check("pip2 conservation", !violation, violation.value_or(""));

  return out.take();
}

// ---------------------------------------------------------------------------
// rollback

ScenarioReport run_rollback() {
  Checker out("rollback");
  Cluster cluster;

  pip::PipConfig pip1;
  pip1.pip_id = "pip1";
  pip1.substrate = GraphBuilder("pip1-ul", rdl::Layer::UL)
                       .node("h1", "/node/host/sim", {ram(512), cpu(4), bandwidth(100)})
                       .node("tbr1", "/node/bridge/tunnel-sim", {bandwidth(100)})
                       .link("e1", "/link/ethernet-sim", "h1", "tbr1", {bandwidth(100)})
                       .graph();
  pip1.neighbors["pip2"] = {50, "tbr1"};

  // pip2's aggregate (2 x 256) admits a 512-mib vnode, but no single host
  // does: the classic aggregation false positive the rollback path absorbs.
  pip::PipConfig pip2;
  pip2.pip_id = "pip2";
  pip2.substrate = GraphBuilder("pip2-ul", rdl::Layer::UL)
                       .node("k1", "/node/host/sim", {ram(256), cpu(4), bandwidth(100)})
                       .node("k2", "/node/host/sim", {ram(256), cpu(4), bandwidth(100)})
                       .node("tbr2", "/node/bridge/tunnel-sim", {bandwidth(100)})
                       .link("e2", "/link/ethernet-sim", "k1", "tbr2", {bandwidth(100)})
                       .link("e3", "/link/ethernet-sim", "k2", "tbr2", {bandwidth(100)})
                       .graph();
  pip2.vlan_lo = 200;
  pip2.vlan_hi = 299;
  pip2.neighbors["pip1"] = {50, "tbr2"};

  cluster.add_pip(pip1);
  cluster.add_pip(pip2);
  vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp(50));

  const std::string pip1_before = cluster.call_pip("pip1", "sync_resources", "{}");
  const std::string pip2_before = cluster.call_pip("pip2", "sync_resources", "{}");

  const rdl::TopologyGraph request =
      GraphBuilder("pair", rdl::Layer::OL0)
          .node("v1", "/node/host/generic", {ram(512), cpu(1)})
          .node("v2", "/node/host/generic", {ram(512), cpu(1)})
          .link("l1", "/link/vlan", "v1", "v2", {bandwidth(10)})
          .graph();
  const vnp::SubmitResult result = vnp.submit_cloudnet(codec::serialize(request));

  out.check("submit fails", !result.ok);
  out.check("failure at stage embed", result.failure && result.failure->stage == "embed",
            result.failure ? result.failure->stage : "no failure recorded");
  out.check("pip2 is the culprit", result.failure && result.failure->pip == "pip2");
  out.check("cause is infeasibility", result.failure && result.failure->code == "infeasible",
            result.failure ? result.failure->code : "");

  // The already-embedded pip1 partial was deleted: aggregates byte-identical.
  const std::string pip1_after = cluster.call_pip("pip1", "sync_resources", "{}");
  const std::string pip2_after = cluster.call_pip("pip2", "sync_resources", "{}");
  out.check("pip1 aggregates byte-identical", pip1_after == pip1_before,
            pip1_before + " -> " + pip1_after);
  out.check("pip2 aggregates byte-identical", pip2_after == pip2_before);

  int live = 0;
  for (const auto& [_, contract] : cluster.pip("pip1").contracts_snapshot())
    if (contract.state == pip::ContractState::Preliminary ||
        contract.state == pip::ContractState::Confirmed)
      ++live;
  for (const auto& [_, contract] : cluster.pip("pip2").contracts_snapshot())
    if (contract.state == pip::ContractState::Preliminary ||
        contract.state == pip::ContractState::Confirmed)
      ++live;
  out.check_eq("zero live contracts", live, 0);
  out.metric("live_contracts", live);

  out.check("pip1 vlan pool restored",
            cluster.pip("pip1").state_snapshot().vlan_in_use.empty());
  out.check("no vnode runtime left", cluster.pip("pip1").state_snapshot().vnodes.empty() &&
                                         cluster.pip("pip2").state_snapshot().vnodes.empty());

  // Serial order: preliminary to pip1 first, then pip2; one delete to pip1.
  std::vector<std::string> preliminaries;
  int deletes_to_pip1 = 0, deletes_total = 0;
  for (const auto& call : vnp.wire_journal()) {
    if (call.method == "negotiate_preliminary") preliminaries.push_back(call.pip);
    if (call.method == "negotiate_delete") {
      ++deletes_total;
      if (call.pip == "pip1") ++deletes_to_pip1;
    }
  }
  out.check("serial order pip1 then pip2",
            preliminaries == std::vector<std::string>{"pip1", "pip2"});
  out.check_eq("exactly one rollback delete", deletes_total, 1);
  out.check_eq("rollback delete went to pip1", deletes_to_pip1, 1);

  return out.take();
}

// ---------------------------------------------------------------------------
// expiry

ScenarioReport run_expiry() {
  Checker out("expiry");
  Cluster cluster;

  pip::PipConfig config;
  config.pip_id = "pip1";
  config.ttl_seconds = 3600;  // expiry is driven by synthetic ticks, not sleep
  config.substrate = GraphBuilder("pip1-ul", rdl::Layer::UL)
                         .node("h1", "/node/host/sim", {ram(1024), cpu(4)})
                         .graph();
  pip::PipNode& node = cluster.add_pip(config);

  auto partial = [](const std::string& id, const std::string& vnode) {
    return codec::serialize(GraphBuilder(id, rdl::Layer::OL0)
                                .node(vnode, "/node/host/generic", {ram(128), cpu(1)})
                                .graph());
  };
  const std::string fresh = cluster.call_pip("pip1", "sync_resources", "{}");
  const TimestampMs far_future = now_ms() + 3600 * 1000 + 1000;

  // Unconfirmed preliminary: gone after the ttl, confirm then refuses.
  const json c1 =
      json::parse(cluster.call_pip("pip1", "negotiate_preliminary", partial("exp1", "v1")));
  const std::string c1_id = c1.at("contract").get<std::string>();
  out.check("tick before ttl expires nothing", node.expire_tick(now_ms()).empty());
  const auto expired = node.expire_tick(far_future);
  out.check("tick after ttl expires the contract",
            expired == std::vector<std::string>{c1_id});
  out.check_eq("contract marked expired",
               to_string(node.contracts_snapshot().at(c1_id).state), std::string("expired"));
  try {
    cluster.call_pip("pip1", "negotiate_confirm", json{{"contract", c1_id}}.dump());
    out.check("confirm after expiry rejected", false, "confirm unexpectedly succeeded");
  } catch (const RemoteError& e) {
    out.check("confirm after expiry rejected", e.code() == "not_preliminary", e.code());
  }
  out.check("resources restored after expiry",
            cluster.call_pip("pip1", "sync_resources", "{}") == fresh);

  // Confirmed before the ttl: the tick must leave it alone.
  const json c2 =
      json::parse(cluster.call_pip("pip1", "negotiate_preliminary", partial("exp2", "v2")));
  const std::string c2_id = c2.at("contract").get<std::string>();
  cluster.call_pip("pip1", "negotiate_confirm", json{{"contract", c2_id}}.dump());
  out.check("tick ignores confirmed contracts", node.expire_tick(far_future).empty());
  out.check_eq("confirmed contract persists",
               to_string(node.contracts_snapshot().at(c2_id).state),
               std::string("confirmed"));
  out.check("confirmed allocation still held",
            cluster.call_pip("pip1", "sync_resources", "{}") != fresh);

  auto violation = conservation_violation(node);
  out.check("conservation", !violation, violation.value_or(""));
  return out.take();
}

// ---------------------------------------------------------------------------
// compaction20

rdl::TopologyGraph compaction20_substrate_impl() {
  GraphBuilder b("pip1-ul", rdl::Layer::UL);
  for (int i = 1; i <= 5; ++i)
    b.node("h" + std::to_string(i), "/node/host/sim", {ram(1000), cpu(3)});
  return b.graph();
}

rdl::TopologyGraph compaction20_request_impl() {
  GraphBuilder b("tenants", rdl::Layer::OL0);
  for (int i = 1; i <= 10; ++i) {
    char name[8];
    std::snprintf(name, sizeof(name), "w%02d", i);
    b.node(name, "/node/host/generic", {ram(250), cpu(1)});
  }
  return b.graph();
}

ScenarioReport run_compaction20() {
  Checker out("compaction20");
  Cluster cluster;

  pip::PipConfig config;
  config.pip_id = "pip1";
  config.substrate = compaction20_substrate_impl();
  cluster.add_pip(config);

  vnp::VnpConfig vnp_config;
  vnp_config.transit =
      GraphBuilder("transit", rdl::Layer::UL).node("pip1", "/node/host/pip").graph();
  vnp::VnpNode& vnp = cluster.add_vnp(vnp_config);

  const vnp::SubmitResult result =
      vnp.submit_cloudnet(codec::serialize(compaction20_request_impl()));
  out.check("submit succeeds", result.ok,
            result.failure ? result.failure->detail : "");
  if (!result.ok) return out.take();

  // The congestion-minimizing initial placement spreads two vnodes per host.
  std::map<std::string, int> spread;
  for (const auto& [_, runtime] : cluster.pip("pip1").state_snapshot().vnodes)
    ++spread[runtime.host];
  bool two_each = spread.size() == 5;
  for (const auto& [_, count] : spread) two_each = two_each && count == 2;
  out.check("initial placement uses all 5 hosts, 2 vnodes each", two_each);

  const json analysis =
      json::parse(vnp.migrate_analyze(result.id, "compact", /*apply=*/false));
  const json plan = analysis.at("per_pip").at("pip1");

  const double cost = plan.at("migration_cost").get<double>();
  const double freed_ram = plan.at("freed_resources").value("ram", 0.0);
  const double in_use_ram = plan.at("prior_in_use").value("ram", 0.0);
  const int used_after = plan.at("used_nodes_after").get<int>();
  const int used_before = plan.at("used_nodes_before").get<int>();
  const int moves = static_cast<int>(plan.at("moves").size());

  out.check_eq("compaction empties exactly one host", used_before - used_after, 1);
  out.check_eq("four hosts in use afterwards", used_after, 4);
  out.check_eq("two vnodes move", moves, 2);
  out.check("plan frees >= 20% of in-use node resources",
            in_use_ram > 0 && freed_ram / in_use_ram >= 0.2,
            "freed " + std::to_string(freed_ram) + " of " + std::to_string(in_use_ram));
  out.check("migration cost is positive", cost > 0);
  out.check_eq("cost equals moved ram x unit cost", cost, 500.0);

  out.metric("migration_cost", cost);
  out.metric("freed_ram", freed_ram);
  out.metric("in_use_ram", in_use_ram);
  out.metric("moves", moves);
  out.metric("used_nodes_after", used_after);

  // Analysis alone must not move anything.
  std::map<std::string, int> untouched;
  for (const auto& [_, runtime] : cluster.pip("pip1").state_snapshot().vnodes)
    ++untouched[runtime.host];
  out.check("analysis applies nothing", untouched == spread);

  // Applying the plan compacts for real; a second analysis finds nothing left.
  const json applied = json::parse(vnp.migrate_analyze(result.id, "compact", /*apply=*/true));
  std::map<std::string, int> compacted;
  for (const auto& [_, runtime] : cluster.pip("pip1").state_snapshot().vnodes)
    ++compacted[runtime.host];
  out.check_eq("apply leaves four hosts in use", compacted.size(), std::size_t{4});

  const json again = json::parse(vnp.migrate_analyze(result.id, "compact", /*apply=*/false));
  out.check_eq("re-analysis after apply finds zero moves",
               again.at("per_pip").at("pip1").at("moves").size(), std::size_t{0});
  out.check_eq("re-analysis cost is zero",
               again.at("per_pip").at("pip1").at("migration_cost").get<double>(), 0.0);

  auto violation = conservation_violation(cluster.pip("pip1"));
  out.check("conservation after apply", !violation, violation.value_or(""));

  return out.take();
}

}  // namespace

rdl::TopologyGraph compaction20_substrate() { return compaction20_substrate_impl(); }
rdl::TopologyGraph compaction20_request_ol0() { return compaction20_request_impl(); }

std::vector<std::string> scenario_names() {
  return {"star13", "rollback", "expiry", "compaction20"};
}

ScenarioReport run_scenario(const std::string& name) {
  if (name == "star13") return run_star13();
  if (name == "rollback") return run_rollback();
  if (name == "expiry") return run_expiry();
  if (name == "compaction20") return run_compaction20();
  throw ConfigError("unknown scenario '" + name + "'; available: star13, rollback, "
                    "expiry, compaction20");
}

}  // namespace cloudnet::harness
