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

#include "cloudnet/harness/cluster.hpp"

#include <unistd.h>

#include <atomic>
#include <filesystem>

#include "cloudnet/common/errors.hpp"
#include "cloudnet/pip/service.hpp"
#include "cloudnet/vnp/service.hpp"
#include "cloudnet/wire/client.hpp"

namespace cloudnet::harness {

namespace fs = std::filesystem;

namespace {
std::atomic<long> g_cluster_seq{0};
}

Cluster::Cluster() {
  const auto dir = fs::temp_directory_path() /
                   ("cloudnet-" + std::to_string(::getpid()) + "-" +
                    std::to_string(g_cluster_seq.fetch_add(1)));
  fs::create_directories(dir);
  dir_ = dir.string();
}

Cluster::~Cluster() {
  if (vnp_server_) vnp_server_->stop();
  for (auto& [_, handle] : pips_) handle.server->stop();
  std::error_code ec;
  fs::remove_all(dir_, ec);
}

pip::PipNode& Cluster::add_pip(const pip::PipConfig& config, bool durable_log) {
  const std::string log_dir =
      durable_log ? (fs::path(dir_) / (config.pip_id + "-log")).string() : "";
  PipHandle handle;
  handle.node = std::make_unique<pip::PipNode>(config, log_dir);
  handle.server = std::make_unique<wire::Server>();
  handle.server->start("127.0.0.1", 0, pip::make_pip_handler(*handle.node));
  auto [it, inserted] = pips_.emplace(config.pip_id, std::move(handle));
  if (!inserted) throw ConfigError("duplicate pip " + config.pip_id);
  return *it->second.node;
}

vnp::VnpNode& Cluster::add_vnp(vnp::VnpConfig config, bool durable_log) {
  for (const auto& [id, handle] : pips_)
    config.endpoints.emplace(id, handle.server->endpoint());
  const std::string log_dir = durable_log ? (fs::path(dir_) / "vnp-log").string() : "";
  vnp_ = std::make_unique<vnp::VnpNode>(std::move(config), log_dir);
  vnp_server_ = std::make_unique<wire::Server>();
  vnp_server_->start("127.0.0.1", 0, vnp::make_vnp_handler(*vnp_));
  return *vnp_;
}

std::string Cluster::pip_endpoint(const std::string& id) const {
  return pips_.at(id).server->endpoint();
}

std::string Cluster::vnp_endpoint() const { return vnp_server_->endpoint(); }

std::string Cluster::call_vnp(const std::string& method, const std::string& body) {
  return wire::call(vnp_endpoint(), method, body).body;
}

std::string Cluster::call_pip(const std::string& id, const std::string& method,
                              const std::string& body) {
  return wire::call(pip_endpoint(id), method, body).body;
}

}  // namespace cloudnet::harness
