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

#include "cloudnet/vnp/service.hpp"

#include <json.hpp>

#include "cloudnet/common/errors.hpp"

namespace cloudnet::vnp {

namespace {
using nlohmann::json;
}

wire::Handler make_vnp_handler(VnpNode& node) {
  return [&node](const std::string& method,
                 const std::string& body) -> std::pair<std::string, std::string> {
    try {
      if (method == "submit_cloudnet") {
        const SubmitResult result = node.submit_cloudnet(body);
        if (!result.ok) {
          const json detail{{"id", result.id},
                            {"stage", result.failure->stage},
                            {"code", result.failure->code},
                            {"detail", result.failure->detail},
                            {"pip", result.failure->pip}};
          return {"pipeline_failed", detail.dump()};
        }
        return {"ok", json{{"id", result.id},
                           {"tokens", result.tokens},
                           {"placement", result.placement}}
                          .dump()};
      }
      if (method == "cloudnet_status") {
        const std::string id = json::parse(body).at("id").get<std::string>();
        return {"ok", node.cloudnet_status(id)};
      }
      if (method == "cloudnet_delete") {
        node.delete_cloudnet(json::parse(body).at("id").get<std::string>());
        return {"ok", "{}"};
      }
      if (method == "migrate_analyze") {
        const json j = json::parse(body);
        const bool apply = j.contains("apply") && j.at("apply").get<bool>();
        return {"ok", node.migrate_analyze(j.at("id").get<std::string>(),
                                           j.at("objective").get<std::string>(), apply)};
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

}  // namespace cloudnet::vnp
