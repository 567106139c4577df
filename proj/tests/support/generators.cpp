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

#include "support/generators.hpp"

#include <array>
#include <cstdio>

#include "cloudnet/harness/builder.hpp"

namespace cloudnet::testing {

namespace {

using harness::GraphBuilder;

int pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::string num_name(const char* prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%s%02d", prefix, i);
  return buf;
}

}  // namespace

Instance random_instance(unsigned seed) {
  std::mt19937 rng(seed);
  Instance inst;

  const int hosts = pick(rng, 2, 6);
  GraphBuilder substrate("ul" + std::to_string(seed), rdl::Layer::UL);
  for (int i = 1; i <= hosts; ++i)
    substrate.node(num_name("s", i), "/node/host/sim",
                   {harness::ram(pick(rng, 4, 16) * 256),
                    harness::cpu(pick(rng, 1, 8)),
                    harness::bandwidth(pick(rng, 1, 10) * 50)});
  // Random tree plus (sometimes) one chord.
  int link_count = 0;
  for (int i = 2; i <= hosts; ++i)
    substrate.link(num_name("e", ++link_count), "/link/ethernet-sim",
                   num_name("s", pick(rng, 1, i - 1)), num_name("s", i),
                   {harness::bandwidth(pick(rng, 1, 10) * 50)});
  if (hosts >= 3 && pick(rng, 0, 1) == 1) {
    const int a = pick(rng, 1, hosts - 2);
    const int b = pick(rng, a + 2, hosts);
    substrate.link(num_name("e", ++link_count), "/link/ethernet-sim", num_name("s", a),
                   num_name("s", b), {harness::bandwidth(pick(rng, 1, 10) * 50)});
  }
  inst.substrate = substrate.graph();

  const int vnodes = pick(rng, 1, 5);
  GraphBuilder request("ol" + std::to_string(seed), rdl::Layer::OL1);
  for (int i = 1; i <= vnodes; ++i)
    request.node(num_name("v", i), "/node/host/generic",
                 {harness::ram(pick(rng, 1, 6) * 128), harness::cpu(pick(rng, 1, 2))});
  for (int i = 2; i <= vnodes; ++i)
    request.link(num_name("l", i - 1), "/link/vlan", num_name("v", pick(rng, 1, i - 1)),
                 num_name("v", i), {harness::bandwidth(pick(rng, 1, 8) * 5)});
  inst.request = request.graph();

  inst.objective.mode = pick(rng, 0, 2) == 0 ? solver::ObjectiveSpec::Mode::Compact
                                             : solver::ObjectiveSpec::Mode::MinCongestion;
  return inst;
}

rdl::TopologyGraph random_codec_graph(unsigned seed) {
  std::mt19937 rng(seed);
  const rdl::Layer layer =
      std::array<rdl::Layer, 4>{rdl::Layer::UL, rdl::Layer::OL0, rdl::Layer::OL1,
                                rdl::Layer::ML}[pick(rng, 0, 2)];  // ML handled separately

  GraphBuilder b("g;=" + std::to_string(seed) + ":x,~+", layer);
  const int nodes = pick(rng, 1, 6);
  const char* kinds[] = {"ram", "cpu", "bandwidth", "disk"};
  for (int i = 1; i <= nodes; ++i) {
    std::vector<rdl::Resource> resources;
    for (int k = 0; k < 4; ++k)
      if (pick(rng, 0, 1) == 1) {
        rdl::Resource r = rdl::make_resource(kinds[k], pick(rng, 0, 4096));
        r.shareable = pick(rng, 0, 3) == 0;
        resources.push_back(std::move(r));
      }
    std::vector<rdl::Feature> features;
    if (pick(rng, 0, 1) == 1) {
      const bool vague = layer == rdl::Layer::OL0 && pick(rng, 0, 1) == 1;
      features.push_back({"arch", vague ? rdl::kUnspecified : "amd64",
                          pick(rng, 0, 1) == 1 ? "grp;1" : ""});
    }
    if (pick(rng, 0, 2) == 0) features.push_back({"note", "a=b;c:d,e~f+\\n", ""});
    b.node(num_name("n=", i), "/node/host/generic", std::move(resources),
           std::move(features));
  }
  for (int i = 2; i <= nodes; ++i)
    if (pick(rng, 0, 2) > 0)
      b.link(num_name("l;", i), "/link/vlan", num_name("n=", pick(rng, 1, i - 1)),
             num_name("n=", i), {harness::bandwidth(pick(rng, 0, 100))});
  return b.graph();
}

}  // namespace cloudnet::testing
