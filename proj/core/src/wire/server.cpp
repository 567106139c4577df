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

#include "cloudnet/wire/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "cloudnet/common/errors.hpp"
#include "cloudnet/wire/frame.hpp"

namespace cloudnet::wire {

namespace {

void send_all(int fd, const std::string& bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return;  // peer went away; nothing sensible left to do
    sent += static_cast<std::size_t>(n);
  }
}

}  // namespace

Server::~Server() { stop(); }

void Server::start(const std::string& host, int port, Handler handler) {
  handler_ = std::move(handler);
  host_ = host;

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw ConnectionRefused("socket: " + std::string(strerror(errno)));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw ConnectionRefused("bad listen address '" + host + "'");
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    throw ConnectionRefused("bind " + host + ":" + std::to_string(port) + ": " +
                            strerror(errno));
  if (::listen(listen_fd_, 64) != 0)
    throw ConnectionRefused("listen: " + std::string(strerror(errno)));

  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);

  running_.store(true);
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> to_join;
  {
    std::lock_guard lock(connections_mutex_);
    to_join.swap(connections_);
  }
  for (auto& t : to_join)
    if (t.joinable()) t.join();
}

void Server::accept_loop() {
  while (running_.load()) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (!running_.load()) return;
      continue;
    }
    timeval tv{};
    tv.tv_sec = 0;
    tv.tv_usec = 200 * 1000;  // poll interval for the stop flag
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    std::lock_guard lock(connections_mutex_);
    connections_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void Server::serve_connection(int fd) {
  std::string buffer;
  char chunk[4096];
  while (running_.load()) {
    std::string payload;
    while (running_.load() && !take_frame(buffer, payload)) {
      const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
      if (n == 0) {
        ::close(fd);
        return;
      }
      if (n < 0) {
        if (errno == EAGAIN || errno == EWOULDBLOCK) continue;
        ::close(fd);
        return;
      }
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
    if (!running_.load()) break;

    Message response;
    response.kind = Message::Kind::Response;
    try {
      const Message request = decode_payload(payload);
      response.correlation_id = request.correlation_id;
      if (request.kind != Message::Kind::Request) {
        response.status = "frame_error";
        response.body = "expected a request frame";
      } else if (!known_method(request.method)) {
        response.status = "unknown_method";
        response.body = request.method;
      } else {
        auto [status, body] = handler_(request.method, request.body);
        response.status = status;
        response.body = std::move(body);
      }
    } catch (const FrameError&) {
      // Unparseable frame: no correlation id to echo, drop the connection.
      ::close(fd);
      return;
    } catch (const Error& e) {
      response.status = e.code();
      response.body = e.what();
    } catch (const std::exception& e) {
      response.status = "internal";
      response.body = e.what();
    }
    send_all(fd, encode_frame(response));
  }
  ::close(fd);
}

}  // namespace cloudnet::wire
