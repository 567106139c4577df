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

#include "cloudnet/vnp/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloudnet/codec/document.hpp"
#include "cloudnet/common/errors.hpp"

namespace cloudnet::vnp {

namespace fs = std::filesystem;
using nlohmann::json;

std::pair<VnpConfig, std::string> load_vnp_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("bad config " + path + ": " + e.what());
  }

  VnpConfig config;
  std::string log_dir;
  try {
    if (j.contains("vnp_id")) config.vnp_id = j.at("vnp_id").get<std::string>();
    const fs::path base = fs::path(path).parent_path();
    const std::string transit_file = j.at("transit_topology").get<std::string>();
    std::ifstream graph_in(base / transit_file);
    if (!graph_in) throw ConfigError("cannot open transit topology " + transit_file);
    std::ostringstream buf;
    buf << graph_in.rdbuf();
    config.transit = codec::deserialize_graph(buf.str());

    for (const auto& [pip, endpoint] : j.at("pips").items())
      config.endpoints[pip] = endpoint.get<std::string>();

    if (j.contains("transit_vlan_pool")) {
      config.transit_vlan_lo = j.at("transit_vlan_pool").at(0).get<int>();
      config.transit_vlan_hi = j.at("transit_vlan_pool").at(1).get<int>();
    }
    if (j.contains("defaults"))
      for (const auto& [key, value] : j.at("defaults").items())
        config.feature_defaults[key] = value.get<std::string>();
    if (j.contains("resource_defaults")) {
      config.resource_defaults.clear();
      for (const auto& [kind, amount] : j.at("resource_defaults").items())
        config.resource_defaults[kind] = amount.get<double>();
    }
    if (j.contains("objective"))
      config.objective.mode =
          solver::parse_objective_mode(j.at("objective").get<std::string>());
    if (j.contains("call_timeout_seconds"))
      config.call_timeout_seconds = j.at("call_timeout_seconds").get<double>();
    if (j.contains("log_dir")) log_dir = (base / j.at("log_dir").get<std::string>()).string();
  } catch (const json::exception& e) {
    throw ConfigError("bad config " + path + ": " + e.what());
  }
  return {std::move(config), log_dir};
}

}  // namespace cloudnet::vnp
