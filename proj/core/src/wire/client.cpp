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

#include "cloudnet/wire/client.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>

#include "cloudnet/common/errors.hpp"

namespace cloudnet::wire {

namespace {

std::atomic<std::uint64_t> g_next_correlation_id{1};

struct Fd {
  int fd = -1;
  ~Fd() {
    if (fd >= 0) ::close(fd);
  }
};

std::pair<std::string, int> split_endpoint(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos)
    throw ConnectionRefused("bad endpoint '" + endpoint + "'");
  const std::string host = endpoint.substr(0, colon);
  const int port = std::atoi(endpoint.c_str() + colon + 1);
  if (port <= 0 || port > 65535)
    throw ConnectionRefused("bad port in '" + endpoint + "'");
  return {host, port};
}

void set_socket_timeout(int fd, double seconds) {
  timeval tv{};
  tv.tv_sec = static_cast<long>(seconds);
  tv.tv_usec = static_cast<long>((seconds - static_cast<double>(tv.tv_sec)) * 1e6);
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

}  // namespace

Message call(const std::string& endpoint, const std::string& method,
             const std::string& body, const CallOptions& options,
             const CallObserver& observer) {
  const auto [host, port] = split_endpoint(endpoint);

  Fd sock;
  sock.fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (sock.fd < 0) throw ConnectionRefused("socket: " + std::string(strerror(errno)));
  set_socket_timeout(sock.fd, options.timeout_seconds);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw ConnectionRefused("bad address '" + host + "'");
  if (::connect(sock.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    if (errno == EINPROGRESS || errno == EWOULDBLOCK || errno == EAGAIN)
      throw Timeout("connect to " + endpoint);
    throw ConnectionRefused(endpoint + ": " + strerror(errno));
  }

  Message request;
  request.kind = Message::Kind::Request;
  request.correlation_id = g_next_correlation_id.fetch_add(1);
  request.method = method;
  request.body = body;
  const std::string frame = encode_frame(request);

  if (observer) observer(endpoint, method, body);

  std::size_t sent = 0;
  while (sent < frame.size()) {
    const ssize_t n = ::send(sock.fd, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK) throw Timeout("send to " + endpoint);
      throw ConnectionRefused("send: " + std::string(strerror(errno)));
    }
    sent += static_cast<std::size_t>(n);
  }

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(options.timeout_seconds);
  std::string buffer;
  std::string payload;
  char chunk[4096];
  while (!take_frame(buffer, payload)) {
    if (std::chrono::steady_clock::now() > deadline)
      throw Timeout("awaiting response from " + endpoint);
    const ssize_t n = ::recv(sock.fd, chunk, sizeof(chunk), 0);
    if (n == 0) throw FrameError("connection closed mid-response");
    if (n < 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK)
        throw Timeout("awaiting response from " + endpoint);
      throw FrameError("recv: " + std::string(strerror(errno)));
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
  }

  Message response = decode_payload(payload);
  if (response.kind != Message::Kind::Response)
    throw FrameError("peer sent a request instead of a response");
  if (response.correlation_id != request.correlation_id)
    throw FrameError("correlation id mismatch");
  if (!response.ok()) throw RemoteError(response.status, response.body);
  return response;
}

}  // namespace cloudnet::wire
