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

#include "cloudnet/pip/plugins.hpp"

#include "cloudnet/common/errors.hpp"

namespace cloudnet::pip {

namespace {

/// Removes `tag` and drops the per-element entry when it empties, so a full
/// revert leaves the maps exactly as found.
void erase_tag(std::map<std::string, std::set<int>>& sets, const std::string& ul_id,
               int tag) {
  auto it = sets.find(ul_id);
  if (it == sets.end()) return;
  it->second.erase(tag);
  if (it->second.empty()) sets.erase(it);
}

}  // namespace

ProvisionOutcome ImageCache::provision(const std::string& image) {
  ProvisionOutcome outcome;
  if (enabled && stocked.count(image) > 0) {
    stocked.erase(image);  // the cached copy is moved into place
    replenish_queue.push_back(image);
    outcome.cache_hit = true;
    outcome.copy_ops = 0;
    ++hits;
  } else {
    outcome.cache_hit = false;
    outcome.copy_ops = 1;
    ++misses;
    ++copy_ops;
    if (enabled) replenish_queue.push_back(image);
  }
  return outcome;
}

void ImageCache::replenish() {
  while (!replenish_queue.empty()) {
    stocked.insert(replenish_queue.front());
    replenish_queue.pop_front();
  }
}

void PluginRegistry::register_plugin(std::unique_ptr<EmbeddingPlugin> plugin) {
  plugins_.push_back(std::move(plugin));
}

const EmbeddingPlugin& PluginRegistry::dispatch(const rdl::TypePath& substrate_type) const {
  const EmbeddingPlugin* best = nullptr;
  for (const auto& plugin : plugins_) {
    if (!plugin->type_prefix().is_prefix_of(substrate_type)) continue;
    if (best == nullptr || plugin->type_prefix().size() > best->type_prefix().size())
      best = plugin.get();
  }
  if (best == nullptr)
    throw ConfigError("no embedding plugin for substrate type " +
                      substrate_type.to_string());
  return *best;
}

namespace {

class HostPlugin : public EmbeddingPlugin {
 public:
  HostPlugin() : prefix_(rdl::parse_type_path("/node/host/sim")) {}
  const rdl::TypePath& type_prefix() const override { return prefix_; }

  void apply(const SegmentCtx& ctx, SubstrateState& state) const override {
    if (ctx.node_entry) {
      std::string image = "base-image";
      if (ctx.request_ne != nullptr)
        if (const rdl::Feature* f = ctx.request_ne->feature("image"); f != nullptr)
          image = f->value;
      const ProvisionOutcome outcome = state.cache.provision(image);
      state.vnodes[ctx.ol_id] = {Power::Stopped, ctx.ul_id, ctx.contract_id, image};
      state.log_event(ctx.ul_id, "vnode_create " + ctx.ol_id + " image=" + image +
                                     (outcome.cache_hit ? " cache=hit" : " cache=miss"));
      return;
    }
    if (ctx.vlan) {
      state.port_vlans[ctx.ul_id].insert(*ctx.vlan);
      state.log_event(ctx.ul_id, "vlan_set " + std::to_string(*ctx.vlan));
    }
  }

  void revert(const SegmentCtx& ctx, SubstrateState& state) const override {
    if (ctx.node_entry) {
      state.vnodes.erase(ctx.ol_id);
      state.log_event(ctx.ul_id, "vnode_destroy " + ctx.ol_id);
      return;
    }
    if (ctx.vlan) {
      erase_tag(state.port_vlans, ctx.ul_id, *ctx.vlan);
      state.log_event(ctx.ul_id, "vlan_clear " + std::to_string(*ctx.vlan));
    }
  }

 private:
  rdl::TypePath prefix_;
};

class SwitchPlugin : public EmbeddingPlugin {
 public:
  SwitchPlugin() : prefix_(rdl::parse_type_path("/node/switch/sim")) {}
  const rdl::TypePath& type_prefix() const override { return prefix_; }

  void apply(const SegmentCtx& ctx, SubstrateState& state) const override {
    if (ctx.vlan) state.port_vlans[ctx.ul_id].insert(*ctx.vlan);
  }
  void revert(const SegmentCtx& ctx, SubstrateState& state) const override {
    if (ctx.vlan) erase_tag(state.port_vlans, ctx.ul_id, *ctx.vlan);
  }

 private:
  rdl::TypePath prefix_;
};

class TunnelBridgePlugin : public EmbeddingPlugin {
 public:
  TunnelBridgePlugin() : prefix_(rdl::parse_type_path("/node/bridge/tunnel-sim")) {}
  const rdl::TypePath& type_prefix() const override { return prefix_; }

  void apply(const SegmentCtx& ctx, SubstrateState& state) const override {
    if (ctx.vlan) state.trunked[ctx.ul_id].insert(*ctx.vlan);
  }
  void revert(const SegmentCtx& ctx, SubstrateState& state) const override {
    if (ctx.vlan) erase_tag(state.trunked, ctx.ul_id, *ctx.vlan);
  }

 private:
  rdl::TypePath prefix_;
};

/// Transit gateways represent the neighbor PIP behind a transit link. Link
/// segments landing here trunk the dictated tag towards the neighbor; the
/// stub node entry itself needs no substrate work.
class TransitGatewayPlugin : public EmbeddingPlugin {
 public:
  TransitGatewayPlugin() : prefix_(rdl::parse_type_path("/node/host/pip")) {}
  const rdl::TypePath& type_prefix() const override { return prefix_; }

  void apply(const SegmentCtx& ctx, SubstrateState& state) const override {
    if (!ctx.node_entry && ctx.vlan) state.trunked[ctx.ul_id].insert(*ctx.vlan);
  }
  void revert(const SegmentCtx& ctx, SubstrateState& state) const override {
    if (!ctx.node_entry && ctx.vlan) erase_tag(state.trunked, ctx.ul_id, *ctx.vlan);
  }

 private:
  rdl::TypePath prefix_;
};

}  // namespace

PluginRegistry make_sim_registry() {
  PluginRegistry registry;
  registry.register_plugin(std::make_unique<HostPlugin>());
  registry.register_plugin(std::make_unique<SwitchPlugin>());
  registry.register_plugin(std::make_unique<TunnelBridgePlugin>());
  registry.register_plugin(std::make_unique<TransitGatewayPlugin>());
  return registry;
}

}  // namespace cloudnet::pip
