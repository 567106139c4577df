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

#include "cloudnet/pip/service.hpp"

#include <json.hpp>

#include "cloudnet/common/errors.hpp"

namespace cloudnet::pip {

namespace {

using nlohmann::json;

json report_to_json(const ModifyReport& report) {
  json moves = json::array();
  for (const auto& m : report.moves)
    moves.push_back({{"vnode", m.vnode}, {"from", m.from}, {"to", m.to}});
  json remaps = json::array();
  for (const auto& r : report.remaps)
    remaps.push_back({{"link", r.link}, {"from", r.from}, {"to", r.to}});
  return json{{"moves", moves},
              {"remaps", remaps},
              {"migration_cost", report.migration_cost},
              {"freed_resources", report.freed_resources},
              {"prior_in_use", report.prior_in_use},
              {"used_nodes_before", report.used_nodes_before},
              {"used_nodes_after", report.used_nodes_after},
              {"applied", report.applied}};
}

}  // namespace

wire::Handler make_pip_handler(PipNode& node) {
  return [&node](const std::string& method,
                 const std::string& body) -> std::pair<std::string, std::string> {
    try {
      if (method == "sync_resources") {
        return {"ok", json(node.sync_resources()).dump()};
      }
      if (method == "negotiate_preliminary") {
        const std::string contract = node.negotiate_preliminary(body);
        return {"ok", json{{"contract", contract}}.dump()};
      }
      if (method == "negotiate_confirm") {
        node.negotiate_confirm(json::parse(body).at("contract").get<std::string>());
        return {"ok", "{}"};
      }
      if (method == "negotiate_delete") {
        node.negotiate_delete(json::parse(body).at("contract").get<std::string>());
        return {"ok", "{}"};
      }
      if (method == "negotiate_modify") {
        const json j = json::parse(body);
        ModifyRequest request;
        request.contract_id = j.at("contract").get<std::string>();
        if (j.contains("partial")) request.partial_cng = j.at("partial").get<std::string>();
        if (j.contains("objective")) {
          solver::ObjectiveSpec objective;
          objective.mode =
              solver::parse_objective_mode(j.at("objective").at("mode").get<std::string>());
          if (j.at("objective").contains("alpha"))
            objective.alpha = j.at("objective").at("alpha").get<double>();
          if (j.at("objective").contains("beta"))
            objective.beta = j.at("objective").at("beta").get<double>();
          request.objective = objective;
        }
        if (j.contains("dry_run")) request.dry_run = j.at("dry_run").get<bool>();
        return {"ok", report_to_json(node.negotiate_modify(request)).dump()};
      }
      if (method == "provision_start" || method == "provision_stop" ||
          method == "provision_powercycle") {
        const std::string vnode = json::parse(body).at("vnode").get<std::string>();
        if (method == "provision_start") node.provision_start(vnode);
        if (method == "provision_stop") node.provision_stop(vnode);
        if (method == "provision_powercycle") node.provision_powercycle(vnode);
        return {"ok", "{}"};
      }
      if (method == "console_lookup") {
        const std::string vnode = json::parse(body).at("vnode").get<std::string>();
        return {"ok", json{{"console", node.console_lookup(vnode)}}.dump()};
      }
      return {"unknown_method", method};
    } catch (const Error& e) {
      return {e.code(), e.detail()};
    } catch (const json::exception& e) {
      return {"malformed_document", e.what()};
    } catch (const std::exception& e) {
      return {"internal", e.what()};
    }
  };
}

}  // namespace cloudnet::pip
