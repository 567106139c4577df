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

#include <memory>
#include <optional>
#include <vector>

#include "cloudnet/pip/state.hpp"
#include "cloudnet/rdl/mapping.hpp"
#include "cloudnet/rdl/type_path.hpp"

namespace cloudnet::pip {

/// One mapping segment as handed to a plugin: which overlay element, where it
/// landed, and what travels on it.
struct SegmentCtx {
  std::string contract_id;
  std::string ol_id;
  bool node_entry = false;
  std::string ul_id;
  std::map<std::string, double> allocations;
  std::optional<int> vlan;                       // set for link segments
  const rdl::NetworkElement* request_ne = nullptr;
};

/// Type-dispatched substrate driver. `revert(apply(state))` must restore the
/// plugin-visible state for the segment (SubstrateState::plugin_view).
class EmbeddingPlugin {
 public:
  virtual ~EmbeddingPlugin() = default;
  virtual const rdl::TypePath& type_prefix() const = 0;
  virtual void apply(const SegmentCtx& ctx, SubstrateState& state) const = 0;
  virtual void revert(const SegmentCtx& ctx, SubstrateState& state) const = 0;
};

/// Registry with longest-matching-prefix dispatch over substrate types.
class PluginRegistry {
 public:
  void register_plugin(std::unique_ptr<EmbeddingPlugin> plugin);

  /// Throws ConfigError when no plugin prefix matches: dispatch must be total
  /// over the substrate's types.
  const EmbeddingPlugin& dispatch(const rdl::TypePath& substrate_type) const;

 private:
  std::vector<std::unique_ptr<EmbeddingPlugin>> plugins_;
};

/// The simulated substrate drivers: hosts (vnode lifecycle + image cache),
/// switches (port VLAN sets), tunnel bridges and transit gateways (trunking).
PluginRegistry make_sim_registry();

}  // namespace cloudnet::pip
