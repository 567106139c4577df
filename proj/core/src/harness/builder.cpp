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

#include "cloudnet/harness/builder.hpp"

#include "cloudnet/common/errors.hpp"

namespace cloudnet::harness {

rdl::Resource ram(double mib) { return rdl::make_resource("ram", mib); }
rdl::Resource cpu(double cores) { return rdl::make_resource("cpu", cores); }
rdl::Resource bandwidth(double mbit) { return rdl::make_resource("bandwidth", mbit); }

GraphBuilder& GraphBuilder::node(const std::string& id, const std::string& type,
                                 std::vector<rdl::Resource> resources,
                                 std::vector<rdl::Feature> features) {
  nodes_.push_back({id, type, std::move(resources), std::move(features), {}});
  return *this;
}

GraphBuilder& GraphBuilder::link(const std::string& id, const std::string& type,
                                 const std::string& a, const std::string& b,
                                 std::vector<rdl::Resource> resources,
                                 std::vector<rdl::Feature> features) {
  auto attach = [this](const std::string& node_id, const std::string& ni_id) {
    for (auto& n : nodes_)
      if (n.id == node_id) {
        n.interfaces.push_back(ni_id);
        return;
      }
    throw ConfigError("link endpoint '" + node_id + "' not declared");
  };

  const std::string ni_a = "ni:" + a + ":" + id;
  const std::string ni_b = "ni:" + b + ":" + id;
  const std::string ni_la = "ni:" + id + ":a";
  const std::string ni_lb = "ni:" + id + ":b";

  attach(a, ni_a);
  attach(b, ni_b);
  interfaces_.push_back({ni_a, a, ni_la});
  interfaces_.push_back({ni_la, id, ni_a});
  interfaces_.push_back({ni_b, b, ni_lb});
  interfaces_.push_back({ni_lb, id, ni_b});

  links_.push_back({id, type, std::move(resources), std::move(features), {ni_la, ni_lb}});
  return *this;
}

rdl::TopologyGraph GraphBuilder::graph() const {
  rdl::TopologyGraph g(id_, layer_);
  auto add_element = [&g](const Element& e) {
    rdl::NetworkElement ne;
    ne.id = e.id;
    ne.type = rdl::parse_type_path(e.type);
    ne.resources = e.resources;
    ne.features = e.features;
    ne.interfaces = e.interfaces;
    g.add(std::move(ne));
  };
  for (const auto& n : nodes_) add_element(n);
  for (const auto& l : links_) add_element(l);
  for (const auto& ni : interfaces_) g.add(ni);
  return g;
}

}  // namespace cloudnet::harness
