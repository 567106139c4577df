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

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cloudnet/rdl/graph.hpp"

namespace cloudnet::pip {

enum class Power { Stopped, Running };

struct VnodeRuntime {
  Power power = Power::Stopped;
  std::string host;      // hosting substrate node
  std::string contract;  // owning contract id
  std::string image;     // template the image was provisioned from

  auto operator<=>(const VnodeRuntime&) const = default;
};

struct ProvisionOutcome {
  bool cache_hit = false;
  int copy_ops = 0;
};

/// The clipd-style template cache. A hit moves the cached image into place
/// (consuming the stocked copy and queueing a replenishment); a miss copies
/// from the template store. Replenishment runs between embeddings.
struct ImageCache {
  bool enabled = true;
  std::set<std::string> stocked;
  std::deque<std::string> replenish_queue;
  long hits = 0;
  long misses = 0;
  long copy_ops = 0;

  ProvisionOutcome provision(const std::string& image);
  void replenish();

  auto operator<=>(const ImageCache&) const = default;
};

struct VlanUse {
  std::string link;     // overlay link the tag isolates
  bool dictated = false;  // transit tags are dictated by the VNP, not pooled

  auto operator<=>(const VlanUse&) const = default;
};

/// Everything observable about the simulated substrate. Copyable by design:
/// mutating operations work on a copy and swap it in, which is what makes
/// failed negotiations perfectly atomic.
struct SubstrateState {
  std::map<std::string, std::map<std::string, double>> allocated;  // ne -> kind -> amt
  std::map<int, VlanUse> vlan_in_use;
  std::map<std::string, VnodeRuntime> vnodes;
  std::map<std::string, std::set<int>> port_vlans;  // host/switch -> tags on ports
  std::map<std::string, std::set<int>> trunked;     // bridge/gateway -> trunked tags
  std::map<std::string, std::vector<std::string>> host_events;
  ImageCache cache;

  void log_event(const std::string& host, const std::string& event) {
    host_events[host].push_back(event);
  }

  /// The part of the state the plugin apply/revert contract is judged on
  /// (event logs and cache counters are history, not state).
  struct PluginView {
    std::map<std::string, VnodeRuntime> vnodes;
    std::map<std::string, std::set<int>> port_vlans;
    std::map<std::string, std::set<int>> trunked;

    auto operator<=>(const PluginView&) const = default;
  };

  PluginView plugin_view() const { return {vnodes, port_vlans, trunked}; }
};

}  // namespace cloudnet::pip
