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

#include "cloudnet/common/errors.hpp"
#include "cloudnet/harness/builder.hpp"
#include "cloudnet/rdl/graph_ops.hpp"
#include "cloudnet/rdl/type_path.hpp"
#include "cloudnet/rdl/validate.hpp"

using namespace cloudnet;
using harness::GraphBuilder;

namespace {

rdl::TopologyGraph two_hosts_one_link(rdl::Layer layer = rdl::Layer::UL) {
  return GraphBuilder("g1", layer)
      .node("a", "/node/host/sim", {harness::ram(1024)})
      .node("b", "/node/host/sim", {harness::ram(2048)})
      .link("ab", "/link/ethernet-sim", "a", "b", {harness::bandwidth(100)})
      .graph();
}

bool has_violation(const rdl::ValidationReport& report, rdl::ViolationCode code) {
  for (const auto& v : report.violations)
    if (v.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("type path parses and prints canonically") {
  const rdl::TypePath p = rdl::parse_type_path("/node/host/generic");
  CHECK(p.segments() == std::vector<std::string>{"node", "host", "generic"});
  CHECK(p.to_string() == "/node/host/generic");

  CHECK(rdl::parse_type_path("/node").segments() == std::vector<std::string>{"node"});

  CHECK_THROWS_AS(rdl::parse_type_path("/node//host"), MalformedPath);
  CHECK_THROWS_AS(rdl::parse_type_path("node/host"), MalformedPath);
  CHECK_THROWS_AS(rdl::parse_type_path(""), MalformedPath);
  CHECK_THROWS_AS(rdl::parse_type_path("/node/Host"), MalformedPath);
  CHECK_THROWS_AS(rdl::parse_type_path("/"), MalformedPath);
}

TEST_CASE("assignability follows the trailing-generic wildcard rule") {
  auto assignable = [](const char* request, const char* substrate) {
    return rdl::is_assignable(rdl::parse_type_path(request), rdl::parse_type_path(substrate));
  };

  CHECK(assignable("/node/host/generic", "/node/host/server"));
  CHECK(assignable("/node/host/generic", "/node/host/mainframe"));
  CHECK_FALSE(assignable("/node/host/generic", "/node/switch/vlan"));
  CHECK(assignable("/node/host/server", "/node/host/server"));

  // The wildcard only matches as the final request segment.
  CHECK_FALSE(assignable("/node/generic/server", "/node/host/server"));
  CHECK(assignable("/node/generic", "/node/host/server"));
  CHECK_FALSE(assignable("/node/host/server", "/node/host/generic"));
  // Substrate may be deeper but not shorter than the wildcard prefix.
  CHECK(assignable("/node/host/generic", "/node/host/server/big"));
  CHECK(assignable("/node/host/generic", "/node/host"));
  CHECK_FALSE(assignable("/node/host/generic", "/node"));
}

TEST_CASE("assignability is reflexive and monotone in substrate depth") {
  const char* paths[] = {"/node", "/node/host", "/node/host/generic",
                         "/node/host/server", "/link/transit", "/node/switch/vlan"};
  for (const char* text : paths) {
    const rdl::TypePath p = rdl::parse_type_path(text);
    CHECK(rdl::is_assignable(p, p));
  }
  // Deepening an already-matching substrate never breaks a wildcard match.
  for (const char* request : {"/node/generic", "/node/host/generic"}) {
    const rdl::TypePath r = rdl::parse_type_path(request);
    rdl::TypePath s = rdl::parse_type_path("/node/host");
    REQUIRE(rdl::is_assignable(r, s));
    std::vector<std::string> segs = s.segments();
    for (const char* extra : {"server", "big", "x86"}) {
      segs.push_back(extra);
      s = rdl::TypePath(segs);
      CHECK(rdl::is_assignable(r, s));
    }
  }
}

TEST_CASE("validate accepts a well-formed graph") {
  CHECK(rdl::validate_graph(two_hosts_one_link()).ok());
}

TEST_CASE("validate flags unspecified features outside OL0") {
  auto make = [](rdl::Layer layer) {
    return GraphBuilder("g", layer)
        .node("a", "/node/host/sim", {}, {{"arch", rdl::kUnspecified, ""}})
        .graph();
  };
  CHECK(rdl::validate_graph(make(rdl::Layer::OL0)).ok());
  CHECK(has_violation(rdl::validate_graph(make(rdl::Layer::OL1)),
                      rdl::ViolationCode::UnspecifiedInCompletedGraph));
  CHECK(has_violation(rdl::validate_graph(make(rdl::Layer::UL)),
                      rdl::ViolationCode::UnspecifiedInCompletedGraph));
}

TEST_CASE("validate flags link arity violations") {
  // A link with three interfaces, built by hand.
  rdl::TopologyGraph g("g", rdl::Layer::UL);
  rdl::NetworkElement link;
  link.id = "l";
  link.type = rdl::parse_type_path("/link/ethernet-sim");
  link.interfaces = {"i1", "i2", "i3"};
  g.add(link);
  for (const char* ni : {"i1", "i2", "i3"}) g.add(rdl::NetworkInterface{ni, "l", {}});
  CHECK(has_violation(rdl::validate_graph(g), rdl::ViolationCode::LinkArity));
}

TEST_CASE("validate flags structural breakage") {
  rdl::TopologyGraph g("g", rdl::Layer::UL);
  rdl::NetworkElement node;
  node.id = "a";
  node.type = rdl::parse_type_path("/node/host/sim");
  node.interfaces = {"missing"};
  node.resources = {{"ram", -5, "mib", false}, {"ram", 3, "mib", false},
                    {"cpu", 1, "mhz", false}};
  g.add(node);
  rdl::NetworkElement weird;
  weird.id = "w";
  weird.type = rdl::parse_type_path("/widget/thing");
  g.add(weird);

  const auto report = rdl::validate_graph(g);
  CHECK(has_violation(report, rdl::ViolationCode::UnknownInterfaceRef));
  CHECK(has_violation(report, rdl::ViolationCode::NegativeAmount));
  CHECK(has_violation(report, rdl::ViolationCode::DuplicateResourceKind));
  CHECK(has_violation(report, rdl::ViolationCode::UnitMismatch));
  CHECK(has_violation(report, rdl::ViolationCode::BadRootSegment));
}

TEST_CASE("validate flags asymmetric peering and group conflicts") {
  rdl::TopologyGraph g("g", rdl::Layer::OL1);
  rdl::NetworkElement a;
  a.id = "a";
  a.type = rdl::parse_type_path("/node/host/sim");
  a.interfaces = {"ia"};
  a.features = {{"arch", "amd64", "compat"}};
  g.add(a);
  rdl::NetworkElement b;
  b.id = "b";
  b.type = rdl::parse_type_path("/node/host/sim");
  b.interfaces = {"ib"};
  b.features = {{"arch", "i386", "compat"}};
  g.add(b);
  g.add(rdl::NetworkInterface{"ia", "a", "ib"});
  g.add(rdl::NetworkInterface{"ib", "b", std::nullopt});

  const auto report = rdl::validate_graph(g);
  CHECK(has_violation(report, rdl::ViolationCode::AsymmetricPeering));
  CHECK(has_violation(report, rdl::ViolationCode::GroupValueMismatch));
}

TEST_CASE("aggregation sums node resources of one kind") {
  const auto g = GraphBuilder("pip", rdl::Layer::UL)
                     .node("h1", "/node/host/sim", {harness::ram(4096)})
                     .node("h2", "/node/host/sim", {harness::ram(4096)})
                     .node("h3", "/node/host/sim", {harness::ram(4096)})
                     .graph();
  CHECK(rdl::aggregate_resources(g, "ram") == 12288.0);
  CHECK(rdl::aggregate_resources(g, "cpu") == 0.0);

  CHECK(rdl::aggregate_resources(rdl::TopologyGraph("empty", rdl::Layer::UL), "ram") == 0.0);

  const auto mixed = GraphBuilder("pip2", rdl::Layer::UL)
                         .node("h1", "/node/host/sim", {harness::ram(4096)})
                         .node("h2", "/node/host/sim", {harness::ram(2048)})
                         .node("sw", "/node/switch/sim", {harness::bandwidth(1000)})
                         .graph();
  CHECK(rdl::aggregate_resources(mixed, "ram") == 6144.0);

  CHECK_THROWS_AS(rdl::aggregate_resources(two_hosts_one_link(rdl::Layer::OL1), "ram"),
                  std::invalid_argument);
}

TEST_CASE("aggregation is additive under disjoint union") {
  GraphBuilder b("u", rdl::Layer::UL);
  double expected = 0;
  for (int i = 1; i <= 7; ++i) {
    b.node("h" + std::to_string(i), "/node/host/sim", {harness::ram(i * 512)});
    expected += i * 512;
  }
  CHECK(rdl::aggregate_resources(b.graph(), "ram") == expected);
}

TEST_CASE("extract_partial induces a subgraph") {
  GraphBuilder b("star", rdl::Layer::OL1);
  b.node("c", "/node/host/generic", {harness::ram(256)});
  for (int i = 1; i <= 4; ++i)
    b.node("n" + std::to_string(i), "/node/host/generic", {harness::ram(256)});
  for (int i = 1; i <= 4; ++i)
    b.link("e" + std::to_string(i), "/link/vlan", "c", "n" + std::to_string(i),
           {harness::bandwidth(10)});
  const rdl::TopologyGraph star = b.graph();

  SUBCASE("center plus one leaf and the connecting link") {
    const auto part =
        rdl::extract_partial(star, {"c", "n1", "e1"}, {"part", rdl::Layer::OL0, {}});
    CHECK(part.id() == "part");
    CHECK(part.layer() == rdl::Layer::OL0);
    int nodes = 0, links = 0;
    for (const auto& [_, ne] : part.elements()) ne.is_node() ? ++nodes : ++links;
    CHECK(nodes == 2);
    CHECK(links == 1);
    CHECK(rdl::validate_graph(part).ok());
    // The center keeps its other interfaces, now unpeered.
    CHECK(part.element("c")->interfaces.size() == 4);
  }

  SUBCASE("selecting everything reproduces the graph up to the id") {
    std::set<std::string> all;
    for (const auto& [id, _] : star.elements()) all.insert(id);
    const auto copy = rdl::extract_partial(star, all, {"copy", {}, {}});
    CHECK(copy.elements() == star.elements());
    CHECK(copy.interfaces() == star.interfaces());
    CHECK(copy.layer() == star.layer());
  }

  SUBCASE("a link losing an endpoint is an error unless flagged") {
    CHECK_THROWS_AS(rdl::extract_partial(star, {"c", "e1"}, {"bad", {}, {}}),
                    DanglingEndpoint);
    const auto dangling =
        rdl::extract_partial(star, {"c", "e1"}, {"ok", {}, {"e1"}});
    CHECK(dangling.element("e1") != nullptr);
  }

  SUBCASE("unknown ids violate the precondition") {
    CHECK_THROWS_AS(rdl::extract_partial(star, {"nope"}, {"x", {}, {}}),
                    std::invalid_argument);
  }
}

TEST_CASE("completion fills vague features and missing resources") {
  const std::map<std::string, std::string> defaults = {{"arch", "amd64"},
                                                       {"virtualization", "sim-paravirt"}};
  const std::map<std::string, double> resource_defaults = {{"ram", 256}, {"cpu", 1}};

  SUBCASE("grouped vague features agree on the default") {
    const auto ol0 = GraphBuilder("r", rdl::Layer::OL0)
                         .node("a", "/node/host/generic", {},
                               {{"arch", rdl::kUnspecified, "compat"}})
                         .node("b", "/node/host/generic", {},
                               {{"arch", rdl::kUnspecified, "compat"}})
                         .graph();
    const auto ol1 = rdl::completed_with_defaults(ol0, defaults, resource_defaults);
    CHECK(ol1.layer() == rdl::Layer::OL1);
    CHECK(ol1.element("a")->feature("arch")->value == "amd64");
    CHECK(ol1.element("b")->feature("arch")->value == "amd64");
    CHECK(ol1.element("a")->amount_of("ram") == 256.0);
    CHECK(ol1.element("a")->amount_of("cpu") == 1.0);
    CHECK(rdl::validate_graph(ol1).ok());
  }

  SUBCASE("one specified member decides for the whole group") {
    const auto ol0 = GraphBuilder("r", rdl::Layer::OL0)
                         .node("a", "/node/host/generic", {}, {{"arch", "i386", "compat"}})
                         .node("b", "/node/host/generic", {},
                               {{"arch", rdl::kUnspecified, "compat"}})
                         .graph();
    const auto ol1 = rdl::completed_with_defaults(ol0, defaults, resource_defaults);
    CHECK(ol1.element("b")->feature("arch")->value == "i386");
  }

  SUBCASE("conflicting specified values are rejected") {
    const auto ol0 = GraphBuilder("r", rdl::Layer::OL0)
                         .node("a", "/node/host/generic", {}, {{"arch", "i386", "compat"}})
                         .node("b", "/node/host/generic", {}, {{"arch", "amd64", "compat"}})
                         .graph();
    CHECK_THROWS_AS(rdl::completed_with_defaults(ol0, defaults, resource_defaults),
                    ConflictingGroup);
  }

  SUBCASE("fully specified graphs pass through unchanged apart from the layer") {
    const auto ol0 = GraphBuilder("r", rdl::Layer::OL0)
                         .node("a", "/node/host/generic",
                               {harness::ram(512), harness::cpu(2)}, {{"arch", "amd64", ""}})
                         .graph();
    const auto ol1 = rdl::completed_with_defaults(ol0, defaults, resource_defaults);
    CHECK(ol1.element("a")->resources == ol0.element("a")->resources);
    CHECK(ol1.element("a")->features == ol0.element("a")->features);
  }
}
