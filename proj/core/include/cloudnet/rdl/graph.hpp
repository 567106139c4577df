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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cloudnet/rdl/type_path.hpp"

namespace cloudnet::rdl {

/// Distinguished feature value for attributes intentionally left vague by
/// the requester. Only legal in raw (OL0) request graphs.
inline constexpr char kUnspecified[] = "unspecified";

/// A quantified attribute of a network element (ram, cpu, bandwidth, ...).
/// Units are fixed per kind by the registry below so that amounts are
/// directly comparable across elements.
struct Resource {
  std::string kind;
  double amount = 0;
  std::string unit;
  bool shareable = false;

  auto operator<=>(const Resource&) const = default;
};

/// A non-quantified attribute (CPU architecture, virtualization flavor, ...).
/// Features sharing the same non-empty `group` within one graph must agree on
/// their value once specified; groups model binary-compatibility constraints.
struct Feature {
  std::string key;
  std::string value;
  std::string group;  // empty = no consistency group

  bool unspecified() const { return value == kUnspecified; }

  auto operator<=>(const Feature&) const = default;
};

/// Returns the registry unit for a known resource kind (ram -> mib,
/// cpu -> cores, bandwidth -> mbit), or nullopt for unregistered kinds.
std::optional<std::string> registry_unit(const std::string& kind);

/// Convenience constructor using the registry unit.
Resource make_resource(const std::string& kind, double amount, bool shareable = false);

/// Attachment point of a network element. Peering between two interfaces is
/// symmetric and is the only way elements connect.
struct NetworkInterface {
  std::string id;
  std::string owner;                 // owning NE id
  std::optional<std::string> peer;   // peered NI id, if any

  auto operator<=>(const NetworkInterface&) const = default;
};

/// The generic graph atom. Both nodes and links are NetworkElements; the
/// leading type segment (`node` / `link`) tells them apart.
struct NetworkElement {
  std::string id;
  TypePath type;
  std::vector<Resource> resources;   // kept sorted by kind; one per kind
  std::vector<Feature> features;     // kept sorted
  std::vector<std::string> interfaces;  // owned NI ids, kept sorted

  bool is_node() const { return !type.empty() && type.front() == "node"; }
  bool is_link() const { return !type.empty() && type.front() == "link"; }

  const Resource* resource(const std::string& kind) const;
  const Feature* feature(const std::string& key) const;
  double amount_of(const std::string& kind) const;

  auto operator<=>(const NetworkElement&) const = default;
};

enum class Layer { UL, OL0, OL1, ML };

std::string to_string(Layer layer);
Layer parse_layer(const std::string& text);

/// A typed set of network elements and interfaces. Storage is keyed by id so
/// iteration order, equality, and serialization are all canonical.
class TopologyGraph {
 public:
  TopologyGraph() = default;
  TopologyGraph(std::string id, Layer layer) : id_(std::move(id)), layer_(layer) {}

  const std::string& id() const { return id_; }
  Layer layer() const { return layer_; }
  void set_id(std::string id) { id_ = std::move(id); }
  void set_layer(Layer layer) { layer_ = layer; }

  /// Inserts an element; its attribute vectors are sorted on the way in so
  /// equal graphs compare equal regardless of construction order.
  /// Throws InvalidGraph on a duplicate id.
  void add(NetworkElement element);
  void add(NetworkInterface interface);

  const NetworkElement* element(const std::string& id) const;
  const NetworkInterface* interface(const std::string& id) const;
  const std::map<std::string, NetworkElement>& elements() const { return elements_; }
  const std::map<std::string, NetworkInterface>& interfaces() const { return interfaces_; }

  /// The two node NE ids a link element connects, resolved through peering.
  /// Returns nullopt unless both interfaces peer into existing elements.
  std::optional<std::pair<std::string, std::string>> link_endpoints(
      const NetworkElement& link) const;

  /// node id -> list of (neighbor node id, connecting link id), sorted.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> adjacency() const;

  bool operator==(const TopologyGraph&) const = default;

 private:
  std::string id_;
  Layer layer_ = Layer::OL0;
  std::map<std::string, NetworkElement> elements_;
  std::map<std::string, NetworkInterface> interfaces_;
};

}  // namespace cloudnet::rdl
