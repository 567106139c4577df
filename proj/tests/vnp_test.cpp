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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "cloudnet/codec/document.hpp"
#include "cloudnet/common/errors.hpp"
#include "cloudnet/harness/builder.hpp"
#include "cloudnet/rdl/validate.hpp"
#include "cloudnet/harness/checks.hpp"
#include "cloudnet/harness/cluster.hpp"

using namespace cloudnet;
using harness::Cluster;
using harness::GraphBuilder;
using nlohmann::json;

namespace {

pip::PipConfig small_pip(const std::string& id, double host_ram, int hosts,
                         const std::string& neighbor, int vlan_base) {
  pip::PipConfig config;
  config.pip_id = id;
  GraphBuilder b(id + "-ul", rdl::Layer::UL);
  for (int i = 1; i <= hosts; ++i)
    b.node(id + "-h" + std::to_string(i), "/node/host/sim",
           {harness::ram(host_ram), harness::cpu(8), harness::bandwidth(1000)});
  b.node(id + "-tbr", "/node/bridge/tunnel-sim", {harness::bandwidth(1000)});
  for (int i = 1; i <= hosts; ++i)
    b.link(id + "-e" + std::to_string(i), "/link/ethernet-sim",
           id + "-h" + std::to_string(i), id + "-tbr", {harness::bandwidth(1000)});
  config.substrate = b.graph();
  config.vlan_lo = vlan_base;
  config.vlan_hi = vlan_base + 99;
  config.neighbors[neighbor] = {100, id + "-tbr"};
  config.feature_defaults = {{"virtualization", "sim-paravirt"}};
  return config;
}

vnp::VnpConfig one_pip_vnp() {
  vnp::VnpConfig config;
  config.transit =
      GraphBuilder("transit", rdl::Layer::UL).node("pip1", "/node/host/pip").graph();
  config.feature_defaults = {{"arch", "amd64"}, {"virtualization", "sim-paravirt"}};
  config.call_timeout_seconds = 5.0;
  return config;
}

vnp::VnpConfig two_pip_vnp() {
  vnp::VnpConfig config;
  config.transit = GraphBuilder("transit", rdl::Layer::UL)
                       .node("pip1", "/node/host/pip")
                       .node("pip2", "/node/host/pip")
                       .link("t12", "/link/transit", "pip1", "pip2",
                             {harness::bandwidth(100)})
                       .graph();
  config.feature_defaults = {{"arch", "amd64"}, {"virtualization", "sim-paravirt"}};
  config.call_timeout_seconds = 5.0;
  return config;
}

/// A VNP whose substrate already carries aggregates: the pure mapping stages
/// (complete, map, partials) never touch the wire.
vnp::VnpNode static_vnp() {
  vnp::VnpConfig config;
  config.transit =
      GraphBuilder("transit", rdl::Layer::UL)
          .node("pip1", "/node/host/pip",
                {harness::ram(12288), harness::cpu(24), harness::bandwidth(4100)},
                {{"region", "eu", ""}})
          .node("pip2", "/node/host/pip",
                {harness::ram(8192), harness::cpu(16), harness::bandwidth(2100)},
                {{"region", "us", ""}})
          .link("t12", "/link/transit", "pip1", "pip2", {harness::bandwidth(100)})
          .graph();
  config.endpoints = {{"pip1", "127.0.0.1:9"}, {"pip2", "127.0.0.1:9"}};
  config.feature_defaults = {{"arch", "amd64"}};
  return vnp::VnpNode(std::move(config));
}

rdl::TopologyGraph pair_request(double ram_each = 512) {
  return GraphBuilder("pair", rdl::Layer::OL0)
      .node("v1", "/node/host/generic", {harness::ram(ram_each), harness::cpu(1)})
      .node("v2", "/node/host/generic", {harness::ram(ram_each), harness::cpu(1)})
      .link("l1", "/link/vlan", "v1", "v2", {harness::bandwidth(10)})
      .graph();
}

int live_contracts(pip::PipNode& node) {
  int live = 0;
  for (const auto& [_, contract] : node.contracts_snapshot())
    if (contract.state == pip::ContractState::Preliminary ||
        contract.state == pip::ContractState::Confirmed)
      ++live;
  return live;
}

}  // namespace

TEST_CASE("substrate synchronization pulls aggregates and flags the unreachable") {
  Cluster cluster;
  cluster.add_pip(small_pip("pip1", 4096, 3, "pip2", 100));
  cluster.add_pip(small_pip("pip2", 2048, 1, "pip1", 200));
  vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp());

  const auto view = vnp.synchronize_substrate();
  CHECK(view.stale.empty());
  CHECK(view.graph.element("pip1")->amount_of("ram") == 12288.0);
  CHECK(view.graph.element("pip2")->amount_of("ram") == 2048.0);
}

TEST_CASE("a dead PIP keeps stale aggregates and is flagged") {
  Cluster cluster;
  cluster.add_pip(small_pip("pip1", 4096, 3, "pip2", 100));
  vnp::VnpConfig config = two_pip_vnp();
  config.call_timeout_seconds = 0.3;
  config.endpoints["pip2"] = "127.0.0.1:1";  // nobody home
  vnp::VnpNode& vnp = cluster.add_vnp(std::move(config));

  const auto view = vnp.synchronize_substrate();
  CHECK(view.stale == std::set<std::string>{"pip2"});
  CHECK(view.graph.element("pip1")->amount_of("ram") == 12288.0);
  CHECK(view.graph.element("pip2")->amount_of("ram") == 0.0);  // stale configured value
}

TEST_CASE("an empty provider list yields an empty substrate") {
  vnp::VnpConfig config;
  config.transit = rdl::TopologyGraph("transit", rdl::Layer::UL);
  vnp::VnpNode vnp(std::move(config));
  const auto view = vnp.synchronize_substrate();
  CHECK(view.graph.elements().empty());
  CHECK(view.stale.empty());
}

TEST_CASE("graph completion resolves vagueness the VNP's way") {
  vnp::VnpConfig config = two_pip_vnp();
  config.transit = rdl::TopologyGraph("transit", rdl::Layer::UL);
  vnp::VnpNode vnp(std::move(config));

  SUBCASE("grouped unspecified features agree on one default") {
    const auto ol0 = GraphBuilder("r", rdl::Layer::OL0)
                         .node("a", "/node/host/generic", {},
                               {{"arch", rdl::kUnspecified, "compat"}})
                         .node("b", "/node/host/generic", {},
                               {{"arch", rdl::kUnspecified, "compat"}})
                         .graph();
    const auto ol1 = vnp.complete_graph(ol0);
    CHECK(ol1.layer() == rdl::Layer::OL1);
    CHECK(ol1.element("a")->feature("arch")->value == "amd64");
    CHECK(ol1.element("b")->feature("arch")->value == "amd64");
    CHECK(ol1.element("a")->amount_of("ram") == 256.0);  // resource defaults
    CHECK(ol1.element("a")->amount_of("cpu") == 1.0);
  }

  SUBCASE("fully specified requests pass through, modulo the layer tag") {
    const auto ol0 = pair_request();
    const auto ol1 = vnp.complete_graph(ol0);
    CHECK(ol1.element("v1")->resources == ol0.element("v1")->resources);
    CHECK(ol1.elements().size() == ol0.elements().size());
  }

  SUBCASE("conflicting group values are rejected") {
    const auto ol0 = GraphBuilder("r", rdl::Layer::OL0)
                         .node("a", "/node/host/generic", {}, {{"arch", "amd64", "compat"}})
                         .node("b", "/node/host/generic", {}, {{"arch", "i386", "compat"}})
                         .graph();
    CHECK_THROWS_AS(vnp.complete_graph(ol0), ConflictingGroup);
  }
}

TEST_CASE("mapping treats PIPs as pools and transit links as the only bridges") {
  vnp::VnpNode vnp = static_vnp();

  SUBCASE("a request that fits one PIP stays local") {
    const auto ml = vnp.map_cloudnet(vnp.complete_graph(pair_request(512)));
    CHECK(ml.entry("v1")->segments[0].ul_id == "pip1");
    CHECK(ml.entry("v2")->segments[0].ul_id == "pip1");
    CHECK(ml.entry("l1")->segments.size() == 1);  // no transit use
  }

  SUBCASE("an oversized request is split across the transit link") {
    // Co-location would load pip1 to 10240/12288; the split peaks at
    // 5120/8192 on pip2, so the link crosses.
    const auto ml = vnp.map_cloudnet(vnp.complete_graph(pair_request(5120)));
    CHECK(ml.entry("v1")->segments[0].ul_id == "pip1");
    CHECK(ml.entry("v2")->segments[0].ul_id == "pip2");
    CHECK(ml.entry("l1")->segments.size() == 2);
  }

  SUBCASE("infeasible demand propagates as a rejection") {
    CHECK_THROWS_AS(vnp.map_cloudnet(vnp.complete_graph(pair_request(16384))), Rejection);
  }

  SUBCASE("region features pin vnodes to matching providers") {
    const auto request = GraphBuilder("pinned", rdl::Layer::OL0)
                             .node("v1", "/node/host/generic",
                                   {harness::ram(100), harness::cpu(1)},
                                   {{"region", "us", ""}})
                             .graph();
    const auto ml = vnp.map_cloudnet(vnp.complete_graph(request));
    CHECK(ml.entry("v1")->segments[0].ul_id == "pip2");
  }
}

TEST_CASE("partial generation splits, stubs, and tags deterministically") {
  vnp::VnpNode vnp = static_vnp();

  SUBCASE("single-PIP mappings produce one stubless partial") {
    const auto ol1 = vnp.complete_graph(pair_request(512));
    const auto partials = vnp.generate_partials(ol1, vnp.map_cloudnet(ol1));
    REQUIRE(partials.by_pip.size() == 1);
    CHECK(partials.transit_tags.empty());
    for (const auto& [id, ne] : partials.by_pip.begin()->second.elements())
      CHECK(ne.type.to_string() != "/node/host/pip");
  }

  SUBCASE("cross-PIP links become same-tag transit stubs on both sides") {
    const auto ol1 = vnp.complete_graph(pair_request(5120));
    const auto ml = vnp.map_cloudnet(ol1);
    const auto partials = vnp.generate_partials(ol1, ml);
    REQUIRE(partials.by_pip.size() == 2);
    REQUIRE(partials.transit_tags.size() == 1);
    const int tag = partials.transit_tags.at("l1");
    CHECK(tag == 2000);  // lowest pool tag first

    for (const auto& [pip, partial] : partials.by_pip) {
      CHECK(rdl::validate_graph(partial).ok());
      CHECK(partial.layer() == rdl::Layer::OL0);
      const rdl::NetworkElement* stub_link = partial.element("l1");
      REQUIRE(stub_link != nullptr);
      CHECK(stub_link->type.to_string() == "/link/transit");
      CHECK(stub_link->feature("vlan")->value == std::to_string(tag));
      CHECK(stub_link->amount_of("bandwidth") == 10.0);

      const std::string remote = pip == "pip1" ? "pip2" : "pip1";
      const rdl::NetworkElement* stub_node = partial.element(vnp::pip_stub_id(remote));
      REQUIRE(stub_node != nullptr);
      CHECK(stub_node->type.to_string() == "/node/host/pip");
      CHECK(stub_node->feature("pip")->value == remote);
    }
  }

  SUBCASE("two cross links draw two distinct tags") {
    // Regions pin v1/v3 to pip1 and v2 to pip2: both links must cross.
    const auto request =
        GraphBuilder("two", rdl::Layer::OL0)
            .node("v1", "/node/host/generic", {harness::ram(100), harness::cpu(1)},
                  {{"region", "eu", ""}})
            .node("v2", "/node/host/generic", {harness::ram(100), harness::cpu(1)},
                  {{"region", "us", ""}})
            .node("v3", "/node/host/generic", {harness::ram(100), harness::cpu(1)},
                  {{"region", "eu", ""}})
            .link("la", "/link/vlan", "v1", "v2", {harness::bandwidth(10)})
            .link("lb", "/link/vlan", "v3", "v2", {harness::bandwidth(10)})
            .graph();
    const auto ol1 = vnp.complete_graph(request);
    const auto partials = vnp.generate_partials(ol1, vnp.map_cloudnet(ol1));
    REQUIRE(partials.transit_tags.size() == 2);
    CHECK(partials.transit_tags.at("la") == 2000);
    CHECK(partials.transit_tags.at("lb") == 2001);

    // One shared stub node per remote provider, one interface per link.
    const auto& pip1_partial = partials.by_pip.at("pip1");
    const rdl::NetworkElement* stub = pip1_partial.element(vnp::pip_stub_id("pip2"));
    REQUIRE(stub != nullptr);
    CHECK(stub->interfaces.size() == 2);
  }

  SUBCASE("partials minus stubs reconstruct the request exactly") {
    const auto ol1 = vnp.complete_graph(pair_request(5120));
    const auto partials = vnp.generate_partials(ol1, vnp.map_cloudnet(ol1));

    std::set<std::string> nodes_seen, links_seen;
    std::map<std::string, std::set<std::string>> link_peers;
    for (const auto& [pip, partial] : partials.by_pip)
      for (const auto& [id, ne] : partial.elements()) {
        if (ne.type.to_string() == "/node/host/pip") continue;  // stub
        if (ne.is_node()) {
          CHECK(nodes_seen.insert(id).second);  // a partition, not a cover
          CHECK(*ol1.element(id) == ne);
        } else {
          links_seen.insert(id);
          if (auto ends = partial.link_endpoints(*partial.element(id))) {
            if (ol1.element(ends->first) != nullptr) link_peers[id].insert(ends->first);
            if (ol1.element(ends->second) != nullptr) link_peers[id].insert(ends->second);
          }
        }
      }

    std::set<std::string> nodes_expected, links_expected;
    for (const auto& [id, ne] : ol1.elements())
      (ne.is_node() ? nodes_expected : links_expected).insert(id);
    CHECK(nodes_seen == nodes_expected);
    CHECK(links_seen == links_expected);

    // Re-fusing the two transit halves recovers the original endpoints.
    for (const auto& [id, ne] : ol1.elements()) {
      if (!ne.is_link()) continue;
      auto ends = ol1.link_endpoints(ne);
      REQUIRE(ends.has_value());
      CHECK(link_peers[id] == std::set<std::string>{ends->first, ends->second});
    }
  }
}

TEST_CASE("the full pipeline confirms, boots, and hands off consoles") {
  Cluster cluster;
  pip::PipNode& pip1 = cluster.add_pip(small_pip("pip1", 4096, 3, "pip2", 100));
  pip::PipNode& pip2 = cluster.add_pip(small_pip("pip2", 4096, 2, "pip1", 200));
  vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp());

  // 3000 + 3000 splits: spreading beats loading pip1 to 6000/12288.
  const auto result = vnp.submit_cloudnet(codec::serialize(pair_request(3000)));
  REQUIRE_MESSAGE(result.ok, (result.failure ? result.failure->detail : std::string()));
  CHECK(result.tokens.size() == 2);
  CHECK(result.placement.at("v1") == "pip1");
  CHECK(result.placement.at("v2") == "pip2");
  for (const auto& [vnode, token] : result.tokens)
    CHECK(token.rfind("console://" + result.placement.at(vnode) + "/", 0) == 0);

  CHECK(live_contracts(pip1) == 1);
  CHECK(live_contracts(pip2) == 1);
  for (auto* node : {&pip1, &pip2})
    for (const auto& [_, runtime] : node->state_snapshot().vnodes)
      CHECK(runtime.power == pip::Power::Running);

  const json status = json::parse(vnp.cloudnet_status(result.id));
  CHECK(status.at("state") == "confirmed");
  CHECK(status.at("tokens").size() == 2);

  SUBCASE("deletion restores both providers and refuses to run twice") {
    vnp.delete_cloudnet(result.id);
    CHECK(live_contracts(pip1) == 0);
    CHECK(live_contracts(pip2) == 0);
    CHECK(pip1.sync_resources().at("ram") == 12288.0);
    CHECK(pip2.sync_resources().at("ram") == 8192.0);
    CHECK_THROWS_AS(vnp.delete_cloudnet(result.id), UnknownCloudNet);
  }

  SUBCASE("wire discipline: serial order and aggregate abstraction") {
    std::vector<std::string> order;
    for (const auto& call : vnp.wire_journal())
      if (call.method == "negotiate_preliminary") order.push_back(call.pip);
    CHECK(order == std::vector<std::string>{"pip1", "pip2"});

    // The VNP must never name a PIP-internal substrate node in a request.
    for (const auto& call : vnp.wire_journal())
      for (const auto* internal :
           {"pip1-h1", "pip1-h2", "pip1-h3", "pip1-tbr", "pip2-h1", "pip2-h2", "pip2-tbr"})
        CHECK(call.body.find(internal) == std::string::npos);
  }
}

TEST_CASE("a zero-vnode request confirms trivially") {
  Cluster cluster;
  cluster.add_pip(small_pip("pip1", 4096, 1, "pip2", 100));
  vnp::VnpNode& vnp = cluster.add_vnp(one_pip_vnp());

  const auto result =
      vnp.submit_cloudnet(codec::serialize(rdl::TopologyGraph("nothing", rdl::Layer::OL0)));
  CHECK(result.ok);
  CHECK(result.tokens.empty());
  CHECK(vnp.record(result.id)->state == vnp::CloudNetState::Confirmed);
}

TEST_CASE("stage failures are reported with zero leftovers") {
  SUBCASE("malformed documents fail at complete") {
    Cluster cluster;
    cluster.add_pip(small_pip("pip1", 4096, 1, "pip2", 100));
    vnp::VnpNode& vnp = cluster.add_vnp(one_pip_vnp());
    const auto result = vnp.submit_cloudnet("gibberish");
    REQUIRE_FALSE(result.ok);
    CHECK(result.failure->stage == "complete");
  }

  SUBCASE("VNP-level infeasibility fails at map with zero negotiation calls") {
    Cluster cluster;
    pip::PipNode& pip1 = cluster.add_pip(small_pip("pip1", 1024, 1, "pip2", 100));
    cluster.add_pip(small_pip("pip2", 1024, 1, "pip1", 200));
    vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp());

    const auto result = vnp.submit_cloudnet(codec::serialize(pair_request(8192)));
    REQUIRE_FALSE(result.ok);
    CHECK(result.failure->stage == "map");
    CHECK(result.failure->code == "infeasible");
    for (const auto& call : vnp.wire_journal())
      CHECK(call.method != "negotiate_preliminary");
    CHECK(live_contracts(pip1) == 0);
  }

  SUBCASE("first-PIP rejection rolls back without any deletes") {
    Cluster cluster;
    // pip1's aggregate admits 600 mib but no single 512 host does.
    cluster.add_pip(small_pip("pip1", 512, 2, "pip2", 100));
    cluster.add_pip(small_pip("pip2", 512, 1, "pip1", 200));
    vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp());

    const auto request =
        GraphBuilder("asym", rdl::Layer::OL0)
            .node("v1", "/node/host/generic", {harness::ram(600), harness::cpu(1)})
            .node("v2", "/node/host/generic", {harness::ram(400), harness::cpu(1)})
            .link("l1", "/link/vlan", "v1", "v2", {harness::bandwidth(10)})
            .graph();
    const auto result = vnp.submit_cloudnet(codec::serialize(request));
    REQUIRE_FALSE(result.ok);
    CHECK(result.failure->stage == "embed");
    CHECK(result.failure->pip == "pip1");
    CHECK(result.failure->code == "infeasible");
    int deletes = 0;
    for (const auto& call : vnp.wire_journal())
      if (call.method == "negotiate_delete") ++deletes;
    CHECK(deletes == 0);
  }

  SUBCASE("confirm failure triggers a full rollback") {
    Cluster cluster;
    pip::PipNode& pip1 = cluster.add_pip(small_pip("pip1", 4096, 1, "pip2", 100));
    pip::PipConfig lapsing = small_pip("pip2", 4096, 1, "pip1", 200);
    lapsing.ttl_seconds = -1;  // contracts are born expired: confirm must fail
    pip::PipNode& pip2 = cluster.add_pip(lapsing);
    vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp());

    const std::string pip1_before = json(pip1.sync_resources()).dump();
    const auto result = vnp.submit_cloudnet(codec::serialize(pair_request(4096)));
    REQUIRE_FALSE(result.ok);
    CHECK(result.failure->stage == "finalize");
    CHECK(result.failure->code == "confirm_failed");
    CHECK(live_contracts(pip1) == 0);
    CHECK(live_contracts(pip2) == 0);
    CHECK(json(pip1.sync_resources()).dump() == pip1_before);
  }

  SUBCASE("a delete the provider cannot honor reports an incomplete rollback") {
    Cluster cluster;
    cluster.add_pip(small_pip("pip1", 4096, 3, "pip2", 100));
    cluster.add_pip(small_pip("pip2", 4096, 2, "pip1", 200));
    vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp());

    const auto result = vnp.submit_cloudnet(codec::serialize(pair_request(3000)));
    REQUIRE(result.ok);

    // The contract disappears behind the VNP's back; its delete then fails.
    const auto rec = vnp.record(result.id);
    cluster.pip("pip2").negotiate_delete(rec->contracts.at("pip2"));

    CHECK_THROWS_AS(vnp.delete_cloudnet(result.id), RollbackIncomplete);
    const auto after = vnp.record(result.id);
    CHECK_FALSE(after->retained_contracts.empty());
  }
}

TEST_CASE("vnode ids are leased: duplicates collide, deletion frees them") {
  Cluster cluster;
  cluster.add_pip(small_pip("pip1", 4096, 2, "pip2", 100));
  vnp::VnpNode& vnp = cluster.add_vnp(one_pip_vnp());

  const auto first = vnp.submit_cloudnet(codec::serialize(pair_request(512)));
  REQUIRE(first.ok);

  // The same request again: the provider still holds v1/v2.
  const auto dup = vnp.submit_cloudnet(codec::serialize(pair_request(512)));
  REQUIRE_FALSE(dup.ok);
  CHECK(dup.failure->stage == "embed");
  CHECK(dup.failure->code == "vnode_conflict");
  CHECK(live_contracts(cluster.pip("pip1")) == 1);  // the first one is untouched

  vnp.delete_cloudnet(first.id);
  const auto again = vnp.submit_cloudnet(codec::serialize(pair_request(512)));
  CHECK(again.ok);
}

TEST_CASE("migration analysis proxies to the providers without applying") {
  Cluster cluster;
  pip::PipNode& pip1 = cluster.add_pip(small_pip("pip1", 1000, 5, "pip2", 100));
  cluster.add_pip(small_pip("pip2", 1000, 1, "pip1", 200));
  vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp());

  GraphBuilder b("spread", rdl::Layer::OL0);
  for (int i = 1; i <= 4; ++i)
    b.node("w" + std::to_string(i), "/node/host/generic",
           {harness::ram(400), harness::cpu(1)});
  const auto result = vnp.submit_cloudnet(codec::serialize(b.graph()));
  REQUIRE_MESSAGE(result.ok, (result.failure ? result.failure->detail : std::string()));

  const json analysis = json::parse(vnp.migrate_analyze(result.id, "compact", false));
  CHECK(analysis.at("per_pip").contains("pip1"));
  CHECK(analysis.at("applied") == false);
  const int used_before = analysis.at("per_pip").at("pip1").at("used_nodes_before");
  const int used_after = analysis.at("per_pip").at("pip1").at("used_nodes_after");
  CHECK(used_after < used_before);

  CHECK_THROWS_AS(vnp.migrate_analyze("cn9999", "compact", false), UnknownCloudNet);
  CHECK_THROWS_AS(vnp.migrate_analyze(result.id, "min_congestion", false), ConfigError);

  // Applying refreshes tokens to the new hosting nodes.
  const json applied = json::parse(vnp.migrate_analyze(result.id, "compact", true));
  CHECK(applied.at("applied") == true);
  for (const auto& [vnode, token] :
       json::parse(vnp.cloudnet_status(result.id)).at("tokens").items()) {
    const auto runtime = pip1.vnode(vnode);
    REQUIRE(runtime.has_value());
    CHECK(token.get<std::string>() == "console://pip1/" + runtime->host + "/" + vnode);
  }
}

TEST_CASE("the VNP journal survives a restart through its durable log") {
  Cluster cluster;
  cluster.add_pip(small_pip("pip1", 4096, 2, "pip2", 100));
  cluster.add_pip(small_pip("pip2", 4096, 1, "pip1", 200));
  vnp::VnpNode& vnp = cluster.add_vnp(two_pip_vnp(), /*durable_log=*/true);

  const auto result = vnp.submit_cloudnet(codec::serialize(pair_request(512)));
  REQUIRE(result.ok);
  const auto before = vnp.record(result.id);

  vnp::VnpConfig config = two_pip_vnp();
  config.endpoints["pip1"] = cluster.pip_endpoint("pip1");
  config.endpoints["pip2"] = cluster.pip_endpoint("pip2");
  vnp::VnpNode reborn(std::move(config), cluster.dir() + "/vnp-log");
  const auto after = reborn.record(result.id);
  REQUIRE(after.has_value());
  CHECK(after->state == before->state);
  CHECK(after->contracts == before->contracts);
  CHECK(after->transit_tags == before->transit_tags);
  CHECK(after->tokens == before->tokens);
  CHECK(after->ol1 == before->ol1);
}
