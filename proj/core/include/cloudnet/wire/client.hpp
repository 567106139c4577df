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

#include <functional>
#include <string>

#include "cloudnet/wire/frame.hpp"

namespace cloudnet::wire {

struct CallOptions {
  double timeout_seconds = 10.0;
};

/// Observer invoked for every outgoing call (method, body). Used for
/// protocol-level assertions in tests.
using CallObserver = std::function<void(const std::string& endpoint,
                                        const std::string& method,
                                        const std::string& body)>;

/// Sends one request to `endpoint` ("host:port") and waits for the matching
/// response. Exactly one request goes out per call; there are no retries.
/// Throws ConnectionRefused / Timeout / FrameError on transport trouble and
/// RemoteError when the peer answers with a non-ok status.
Message call(const std::string& endpoint, const std::string& method,
             const std::string& body, const CallOptions& options = {},
             const CallObserver& observer = nullptr);

}  // namespace cloudnet::wire
