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

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "cloudnet/codec/document.hpp"
#include "cloudnet/common/errors.hpp"
#include "cloudnet/harness/scenario.hpp"
#include "cloudnet/pip/config.hpp"
#include "cloudnet/pip/service.hpp"
#include "cloudnet/vnp/config.hpp"
#include "cloudnet/vnp/service.hpp"
#include "cloudnet/wire/client.hpp"
#include "cloudnet/wire/server.hpp"

namespace {

using nlohmann::json;

// Exit codes: 0 ok, 1 scenario assertion, 2 parse/config, 3 transport,
// 4 pipeline or unknown-id failure.
constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kParseError = 2;
constexpr int kTransportError = 3;
constexpr int kPipelineError = 4;

std::atomic<bool> g_shutdown{false};

void handle_signal(int) { g_shutdown.store(true); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cloudnet::ConfigError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

std::pair<std::string, int> split_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos)
    throw cloudnet::ConfigError("--listen expects host:port, got " + listen);
  return {listen.substr(0, colon), std::atoi(listen.c_str() + colon + 1)};
}

void run_until_signal() {
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!g_shutdown.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

json call_vnp(const std::string& addr, const std::string& method, const std::string& body,
              double timeout) {
  cloudnet::wire::CallOptions options;
  options.timeout_seconds = timeout;
  return json::parse(cloudnet::wire::call(addr, method, body, options).body);
}

int classify(const cloudnet::Error& e) {
  using namespace cloudnet;
  if (dynamic_cast<const Timeout*>(&e) != nullptr ||
      dynamic_cast<const ConnectionRefused*>(&e) != nullptr ||
      dynamic_cast<const FrameError*>(&e) != nullptr)
    return kTransportError;
  if (dynamic_cast<const ConfigError*>(&e) != nullptr ||
      dynamic_cast<const MalformedDocument*>(&e) != nullptr ||
      dynamic_cast<const MalformedPath*>(&e) != nullptr ||
      dynamic_cast<const InvalidGraph*>(&e) != nullptr)
    return kParseError;
  return kPipelineError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated CloudNet orchestration: PIP/VNP daemons, request "
               "submission, migration analysis and canned scenarios"};
  app.require_subcommand(1);

  std::string config_path, listen = "127.0.0.1:0", vnp_addr, output_path;
  double timeout = 10.0;
  app.add_option("--output", output_path, "Also write machine-readable output here");
  app.add_option("--timeout", timeout, "Wire call timeout in seconds");

  auto* pipd = app.add_subcommand("pipd", "Run a PIP daemon");
  pipd->fallthrough();
  pipd->add_option("--config", config_path, "PIP config (JSON)")->required();
  pipd->add_option("--listen", listen, "host:port to serve on");

  auto* vnpd = app.add_subcommand("vnpd", "Run a VNP daemon");
  vnpd->fallthrough();
  vnpd->add_option("--config", config_path, "VNP config (JSON)")->required();
  vnpd->add_option("--listen", listen, "host:port to serve on");

  std::string graph_file;
  auto* submit = app.add_subcommand("submit", "Submit a CloudNet request to a VNP");
  submit->fallthrough();
  submit->add_option("graph", graph_file, "request graph (.cng)")->required();
  submit->add_option("--vnp", vnp_addr, "VNP address host:port")->required();

  std::string cloudnet_id;
  auto* status = app.add_subcommand("status", "Show a CloudNet's state");
  status->fallthrough();
  status->add_option("id", cloudnet_id, "CloudNet id")->required();
  status->add_option("--vnp", vnp_addr, "VNP address host:port")->required();

  auto* del = app.add_subcommand("delete", "Delete a confirmed CloudNet");
  del->fallthrough();
  del->add_option("id", cloudnet_id, "CloudNet id")->required();
  del->add_option("--vnp", vnp_addr, "VNP address host:port")->required();

  std::string objective = "compact";
  bool apply = false;
  auto* migrate = app.add_subcommand("migrate-analyze",
                                     "Cost-benefit analysis of re-embedding a CloudNet");
  migrate->fallthrough();
  migrate->add_option("id", cloudnet_id, "CloudNet id")->required();
  migrate->add_option("--vnp", vnp_addr, "VNP address host:port")->required();
  migrate->add_option("--objective", objective, "compact | migration_aware");
  migrate->add_flag("--apply", apply, "apply the plan instead of only reporting it");

  std::string scenario_name;
  auto* scenario = app.add_subcommand("scenario", "Run a canned scenario");
  scenario->fallthrough();
  scenario->add_option("name", scenario_name, "star13 | rollback | expiry | compaction20")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pipd->parsed()) {
      auto [config, log_dir] = cloudnet::pip::load_pip_config(config_path);
      cloudnet::pip::PipNode node(config, log_dir);
      cloudnet::wire::Server server;
      const auto [host, port] = split_listen(listen);
      server.start(host, port, cloudnet::pip::make_pip_handler(node));
      std::cout << "pipd " << node.id() << " serving on " << server.endpoint() << std::endl;

      std::thread ticker([&node] {
        while (!g_shutdown.load()) {
          node.expire_tick(cloudnet::now_ms());
          std::this_thread::sleep_for(std::chrono::milliseconds(200));
        }
      });
      run_until_signal();
      ticker.join();
      server.stop();
      return kOk;
    }

    if (vnpd->parsed()) {
      auto [config, log_dir] = cloudnet::vnp::load_vnp_config(config_path);
      cloudnet::vnp::VnpNode node(std::move(config), log_dir);
      cloudnet::wire::Server server;
      const auto [host, port] = split_listen(listen);
      server.start(host, port, cloudnet::vnp::make_vnp_handler(node));
      std::cout << "vnpd " << node.id() << " serving on " << server.endpoint() << std::endl;
      run_until_signal();
      server.stop();
      return kOk;
    }

    if (submit->parsed()) {
      const std::string request = read_file(graph_file);
      try {
        cloudnet::codec::deserialize(request);  // malformed files never reach the wire
      } catch (const cloudnet::MalformedDocument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
      }
      try {
        const json reply = call_vnp(vnp_addr, "submit_cloudnet", request, timeout);
        std::cout << "cloudnet " << reply.at("id").get<std::string>() << " confirmed\n";
        std::map<std::string, int> per_pip;
        for (const auto& [vnode, pip] : reply.at("placement").items())
          ++per_pip[pip.get<std::string>()];
        for (const auto& [pip, count] : per_pip)
          std::cout << "  " << pip << ": " << count << " vnode(s)\n";
        for (const auto& [vnode, token] : reply.at("tokens").items())
          std::cout << "  " << vnode << " -> " << token.get<std::string>() << "\n";
        // The canonical mapping document for machine consumption.
        const json status_reply =
            call_vnp(vnp_addr, "cloudnet_status",
                     json{{"id", reply.at("id").get<std::string>()}}.dump(), timeout);
        write_output(output_path, status_reply.value("mapping", ""));
        return kOk;
      } catch (const cloudnet::RemoteError& e) {
        const std::string what = e.what();
        const auto brace = what.find('{');
        if (e.code() == "pipeline_failed" && brace != std::string::npos) {
          const json detail = json::parse(what.substr(brace));
          std::cerr << "submit failed at stage " << detail.at("stage").get<std::string>()
                    << ": " << detail.at("code").get<std::string>() << " ("
                    << detail.at("detail").get<std::string>() << ")\n";
          return kPipelineError;
        }
        std::cerr << "submit rejected: " << what << "\n";
        return e.code() == "malformed_document" || e.code() == "invalid_graph"
                   ? kParseError
                   : kPipelineError;
      }
    }

    if (status->parsed()) {
      const json reply =
          call_vnp(vnp_addr, "cloudnet_status", json{{"id", cloudnet_id}}.dump(), timeout);
      std::cout << reply.dump(2) << "\n";
      write_output(output_path, reply.value("mapping", ""));
      return kOk;
    }

    if (del->parsed()) {
      call_vnp(vnp_addr, "cloudnet_delete", json{{"id", cloudnet_id}}.dump(), timeout);
      std::cout << "cloudnet " << cloudnet_id << " deleted\n";
      return kOk;
    }

    if (migrate->parsed()) {
      const json reply = call_vnp(
          vnp_addr, "migrate_analyze",
          json{{"id", cloudnet_id}, {"objective", objective}, {"apply", apply}}.dump(),
          timeout);
      std::cout << "cloudnet " << cloudnet_id << " " << objective << " analysis"
                << (apply ? " (applied)" : "") << "\n";
      for (const auto& [pip, plan] : reply.at("per_pip").items()) {
        std::cout << "  " << pip << ": " << plan.at("moves").size() << " move(s), cost "
                  << plan.at("migration_cost").get<double>() << ", hosts "
                  << plan.at("used_nodes_before").get<int>() << " -> "
                  << plan.at("used_nodes_after").get<int>() << "\n";
        for (const auto& move : plan.at("moves"))
          std::cout << "    " << move.at("vnode").get<std::string>() << ": "
                    << move.at("from").get<std::string>() << " -> "
                    << move.at("to").get<std::string>() << "\n";
        for (const auto& [kind, amount] : plan.at("freed_resources").items())
          std::cout << "    frees " << kind << " " << amount.get<double>() << "\n";
      }
      write_output(output_path, reply.dump(2));
      return kOk;
    }

    if (scenario->parsed()) {
      const cloudnet::harness::ScenarioReport report =
          cloudnet::harness::run_scenario(scenario_name);
      for (const auto& check : report.checks)
        std::cout << (check.ok ? "PASS" : "FAIL") << " " << check.name
                  << (check.detail.empty() ? "" : " [" + check.detail + "]") << "\n";
      if (!output_path.empty()) {
        json j{{"scenario", report.scenario}, {"metrics", report.metrics}};
        json checks = json::array();
        for (const auto& check : report.checks)
          checks.push_back({{"name", check.name}, {"ok", check.ok}, {"detail", check.detail}});
        j["checks"] = checks;
        write_output(output_path, j.dump(2));
      }
      if (!report.ok()) {
        for (const auto& check : report.checks)
          if (!check.ok) {
            std::cerr << "scenario " << scenario_name << " failed: " << check.name << "\n";
            break;
          }
        return kAssertionFailed;
      }
      std::cout << "scenario " << scenario_name << ": all checks passed\n";
      return kOk;
    }
  } catch (const cloudnet::RemoteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPipelineError;
  } catch (const cloudnet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  }
  return kOk;
}
