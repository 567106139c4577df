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
#include <memory>
#include <string>

#include "cloudnet/pip/node.hpp"
#include "cloudnet/vnp/node.hpp"
#include "cloudnet/wire/server.hpp"

namespace cloudnet::harness {

/// Boots role daemons in-process on loopback with ephemeral ports and a
/// throwaway working directory. Everything is torn down (and the directory
/// removed) on destruction, so scenario runs leave no residue.
class Cluster {
 public:
  Cluster();
  ~Cluster();
  Cluster(const Cluster&) = delete;
  Cluster& operator=(const Cluster&) = delete;

  pip::PipNode& add_pip(const pip::PipConfig& config, bool durable_log = false);
  vnp::VnpNode& add_vnp(vnp::VnpConfig config, bool durable_log = false);

  pip::PipNode& pip(const std::string& id) { return *pips_.at(id).node; }
  vnp::VnpNode& vnp() { return *vnp_; }
  std::string pip_endpoint(const std::string& id) const;
  std::string vnp_endpoint() const;
  const std::string& dir() const { return dir_; }

  /// Convenience wire round trip to the VNP daemon.
  std::string call_vnp(const std::string& method, const std::string& body);
  std::string call_pip(const std::string& id, const std::string& method,
                       const std::string& body);

 private:
  struct PipHandle {
    std::unique_ptr<pip::PipNode> node;
    std::unique_ptr<wire::Server> server;
  };

  std::string dir_;
  std::map<std::string, PipHandle> pips_;
  std::unique_ptr<vnp::VnpNode> vnp_;
  std::unique_ptr<wire::Server> vnp_server_;
};

}  // namespace cloudnet::harness
