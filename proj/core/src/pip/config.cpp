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

#include "cloudnet/pip/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloudnet/codec/document.hpp"
#include "cloudnet/common/errors.hpp"

namespace cloudnet::pip {

namespace fs = std::filesystem;
using nlohmann::json;

std::pair<PipConfig, std::string> load_pip_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("bad config " + path + ": " + e.what());
  }

  PipConfig config;
  std::string log_dir;
  try {
    config.pip_id = j.at("pip_id").get<std::string>();
    const fs::path base = fs::path(path).parent_path();
    const std::string substrate_file = j.at("substrate").get<std::string>();
    std::ifstream graph_in(base / substrate_file);
    if (!graph_in) throw ConfigError("cannot open substrate " + substrate_file);
    std::ostringstream buf;
    buf << graph_in.rdbuf();
    config.substrate = codec::deserialize_graph(buf.str());

    if (j.contains("vlan_pool")) {
      config.vlan_lo = j.at("vlan_pool").at(0).get<int>();
      config.vlan_hi = j.at("vlan_pool").at(1).get<int>();
    }
    if (j.contains("ttl_seconds")) config.ttl_seconds = j.at("ttl_seconds").get<double>();
    if (j.contains("neighbors"))
      for (const auto& [pip_id, n] : j.at("neighbors").items())
        config.neighbors[pip_id] = {n.at("transit_bandwidth").get<double>(),
                                    n.at("attach").get<std::string>()};
    if (j.contains("defaults"))
      for (const auto& [key, value] : j.at("defaults").items())
        config.feature_defaults[key] = value.get<std::string>();
    if (j.contains("image_cache")) config.cache_enabled = j.at("image_cache").get<bool>();
    if (j.contains("objective"))
      config.objective.mode = solver::parse_objective_mode(j.at("objective").get<std::string>());
    if (j.contains("node_move_unit_cost"))
      config.costs.node_move_per_mib = j.at("node_move_unit_cost").get<double>();
    if (j.contains("link_remap_unit_cost"))
      config.costs.link_remap_per_mbit = j.at("link_remap_unit_cost").get<double>();
    if (j.contains("max_path_elements"))
      config.max_path_elements = j.at("max_path_elements").get<int>();
    if (j.contains("log_dir")) log_dir = (base / j.at("log_dir").get<std::string>()).string();
  } catch (const json::exception& e) {
    throw ConfigError("bad config " + path + ": " + e.what());
  }
  return {std::move(config), log_dir};
}

}  // namespace cloudnet::pip
