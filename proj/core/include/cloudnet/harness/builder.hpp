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

#include <string>
#include <vector>

#include "cloudnet/rdl/graph.hpp"

namespace cloudnet::harness {

/// Convenience assembler for topology graphs: nodes first, then links by
/// endpoint name; interface records and peering are generated.
class GraphBuilder {
 public:
  GraphBuilder(std::string id, rdl::Layer layer) : id_(std::move(id)), layer_(layer) {}

  GraphBuilder& node(const std::string& id, const std::string& type,
                     std::vector<rdl::Resource> resources = {},
                     std::vector<rdl::Feature> features = {});

  GraphBuilder& link(const std::string& id, const std::string& type, const std::string& a,
                     const std::string& b, std::vector<rdl::Resource> resources = {},
                     std::vector<rdl::Feature> features = {});

  rdl::TopologyGraph graph() const;

 private:
  struct Element {
    std::string id;
    std::string type;
    std::vector<rdl::Resource> resources;
    std::vector<rdl::Feature> features;
    std::vector<std::string> interfaces;
  };

  std::string id_;
  rdl::Layer layer_;
  std::vector<Element> nodes_;
  std::vector<Element> links_;
  std::vector<rdl::NetworkInterface> interfaces_;
};

/// `/node/host/sim` element with the standard resource triple.
rdl::Resource ram(double mib);
rdl::Resource cpu(double cores);
rdl::Resource bandwidth(double mbit);

}  // namespace cloudnet::harness
