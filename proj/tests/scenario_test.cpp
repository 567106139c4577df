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

#include "cloudnet/common/errors.hpp"
#include "cloudnet/harness/scenario.hpp"

using namespace cloudnet;

TEST_CASE("every canned scenario passes") {
  for (const auto& name : harness::scenario_names()) {
    CAPTURE(name);
    const harness::ScenarioReport report = harness::run_scenario(name);
    for (const auto& check : report.checks) {
      CAPTURE(check.name);
      CHECK_MESSAGE(check.ok, check.detail);
    }
  }
}

TEST_CASE("scenario metrics carry the headline numbers") {
  const auto star = harness::run_scenario("star13");
  CHECK(star.metrics.at("pip1_vnodes") == 12.0);
  CHECK(star.metrics.at("pip2_vnodes") == 1.0);
  CHECK(star.metrics.at("cross_links") == 1.0);

  const auto compaction = harness::run_scenario("compaction20");
  CHECK(compaction.metrics.at("migration_cost") == 500.0);
  CHECK(compaction.metrics.at("freed_ram") == 500.0);
  CHECK(compaction.metrics.at("moves") == 2.0);
}

TEST_CASE("unknown scenarios are refused") {
  CHECK_THROWS_AS(harness::run_scenario("nope"), ConfigError);
}
