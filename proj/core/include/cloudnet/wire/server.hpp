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

#include <atomic>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cloudnet::wire {

/// Application hook: given (method, body), produce (status, body). Connection
/// handling is concurrent; serialization of mutating work is the handler
/// owner's business.
using Handler = std::function<std::pair<std::string, std::string>(
    const std::string& method, const std::string& body)>;

/// Minimal concurrent TCP server speaking the framed protocol. Unknown
/// methods never reach the handler; they are answered with `unknown_method`.
class Server {
 public:
  Server() = default;
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts serving. `port` 0 picks an ephemeral port; the bound
  /// port is available from port() afterwards.
  void start(const std::string& host, int port, Handler handler);
  void stop();

  int port() const { return port_; }
  std::string endpoint() const { return host_ + ":" + std::to_string(port_); }
  bool running() const { return running_.load(); }

 private:
  void accept_loop();
  void serve_connection(int fd);

  std::string host_;
  int port_ = 0;
  int listen_fd_ = -1;
  Handler handler_;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::vector<std::thread> connections_;
  std::mutex connections_mutex_;
};

}  // namespace cloudnet::wire
