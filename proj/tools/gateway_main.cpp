// Copyright 2026 the agentgate authors
//
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

// Gateway server: loads a policy, binds the HTTP listener and serves
// until interrupted. Configuration precedence: config file, then
// GATE_MODE / GATE_SIGNING_KEY / GATE_LISTEN, then command-line flags.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <semaphore>
#include <string>

#include <CLI11.hpp>

#include "agentgate/gateway.hpp"
#include "agentgate/rbac.hpp"

namespace {

std::binary_semaphore g_shutdown{0};

void handle_signal(int) { g_shutdown.release(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agentgate gateway service"};
  std::string config_path;
  std::string policy_path;
  std::string listen;
  std::string mode;
  app.add_option("--config", config_path, "gateway config file (JSON)");
  app.add_option("--policy", policy_path, "policy file (JSON); overrides the config's path");
  app.add_option("--listen", listen, "host:port to bind; 0 picks an ephemeral port");
  app.add_option("--mode", mode, "access mode: none | rbac | rbac2fa");
  CLI11_PARSE(app, argc, argv);

  try {
    agentgate::gateway::GatewayConfig cfg;
    if (!config_path.empty()) cfg = agentgate::gateway::GatewayConfig::from_file(config_path);
    cfg.apply_env();
    if (!mode.empty()) {
      const auto parsed = agentgate::gateway::parse_mode(mode);
      if (!parsed) {
        std::cerr << "error: --mode must be none|rbac|rbac2fa\n";
        return 2;
      }
      cfg.mode = *parsed;
    }
    if (!listen.empty()) {
      const auto colon = listen.rfind(':');
      if (colon == std::string::npos) {
        std::cerr << "error: --listen must be host:port\n";
        return 2;
      }
      cfg.listen_host = listen.substr(0, colon);
      cfg.listen_port = std::stoi(listen.substr(colon + 1));
    }
    if (!policy_path.empty()) cfg.policy_path = policy_path;
    if (cfg.policy_path.empty()) {
      std::cerr << "error: no policy file (use --policy or the config's policy_path)\n";
      return 2;
    }

    agentgate::rbac::PolicyStore policy =
        agentgate::rbac::load_policy_file(cfg.policy_path);
    agentgate::gateway::GatewayService service(cfg, std::move(policy));
    if (!service.start()) {
      std::cerr << "error: failed to bind " << cfg.listen_host << ":" << cfg.listen_port << "\n";
      return 1;
    }
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::cout << "agentgate gateway listening on " << service.base_url() << " (mode "
              << agentgate::gateway::to_string(service.mode()) << ")" << std::endl;
    g_shutdown.acquire();
    service.stop();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
