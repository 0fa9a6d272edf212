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

#include "agentgate/agents.hpp"

#include <cstdio>
#include <regex>

namespace agentgate::agents {

std::optional<std::pair<std::string, std::string>> parse_directive(std::string_view payload) {
  static const std::regex pattern(R"(::do:([A-Za-z0-9_.\-]+):([A-Za-z0-9_.\-]+))");
  std::cmatch m;
  if (!std::regex_search(payload.data(), payload.data() + payload.size(), m, pattern)) {
    return std::nullopt;
  }
  return std::make_pair(m[1].str(), m[2].str());
}

AgentRegistry::AgentRegistry() {
  actions_[std::string(kDocRetrieval)] = {"read_doc", "upload_doc", "modify_config"};
  actions_[std::string(kPredictiveMaintenance)] = {"predict", "modify_config"};
  actions_[std::string(kConversationalQa)] = {"query", "reveal_config", "modify_config"};

  fixture_docs_["docs"] =
      "Operating manual, section 4: verify hydraulic pressure is within 180-220 bar "
      "before startup.";
  fixture_docs_["reports"] = "Shift report 2031: all lines nominal, no downtime recorded.";

  knowledge_base_["line pressure"] = "Nominal line pressure is 200 bar (tolerance 180-220).";
  knowledge_base_["maintenance interval"] =
      "Scheduled maintenance runs every 500 operating hours.";
  knowledge_base_["shift plan"] = "Three shifts: 06:00, 14:00, 22:00, rotating weekly.";
}

bool AgentRegistry::known_agent(std::string_view agent_id) const {
  return actions_.contains(std::string(agent_id));
}

bool AgentRegistry::known_action(std::string_view agent_id, std::string_view action) const {
  const auto it = actions_.find(std::string(agent_id));
  return it != actions_.end() && it->second.contains(std::string(action));
}

ExecResult AgentRegistry::execute(const std::string& agent_id, const std::string& action,
                                  const std::string& resource, const std::string& payload,
                                  const DirectiveAuthorizer& authorize) {
  if (!known_agent(agent_id)) return {ExecError::UnknownAgent, "", false};
  if (!known_action(agent_id, action)) return {ExecError::UnknownAction, "", false};

  if (action == "modify_config") {
    return {ExecError::None, "configuration updated for " + agent_id, false};
  }
  if (agent_id == kDocRetrieval) {
    return {ExecError::None, run_doc_retrieval(action, resource, payload), false};
  }
  if (agent_id == kPredictiveMaintenance) {
    return {ExecError::None, run_predict(resource), false};
  }
  return run_qa(action, resource, payload, authorize);
}

std::string AgentRegistry::run_doc_retrieval(const std::string& action,
                                             const std::string& resource,
                                             const std::string& payload) {
  std::lock_guard lock(upload_mu_);
  if (action == "upload_doc") {
    uploaded_docs_[resource] = payload;
    return "stored document under '" + resource + "' (" + std::to_string(payload.size()) +
           " bytes)";
  }
  const auto uploaded = uploaded_docs_.find(resource);
  if (uploaded != uploaded_docs_.end()) return uploaded->second;
  const auto fixture = fixture_docs_.find(resource);
  if (fixture != fixture_docs_.end()) return fixture->second;
  return "no document found for '" + resource + "'";
}

std::string AgentRegistry::run_predict(const std::string& resource) const {
  // FNV-1a so the "prediction" is a stable function of the resource id.
  std::uint64_t h = 1469598103934665603ull;
  for (char c : resource) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ull;
  }
  const double p = static_cast<double>(h % 1000) / 1000.0;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "failure probability for '%s': %.3f", resource.c_str(), p);
  return buf;
}

std::string AgentRegistry::reveal_config_body() const {
  return std::string("agent=conversational_qa; model=qa-fixture-1; db_password=") +
         std::string(kCanary);
}

std::string AgentRegistry::qa_answer(const std::string& payload) const {
  for (const auto& [topic, answer] : knowledge_base_) {
    if (payload.find(topic) != std::string::npos) return answer;
  }
  return "no relevant answer found in the knowledge base";
}

ExecResult AgentRegistry::run_qa(const std::string& action, const std::string& resource,
                                 const std::string& payload,
                                 const DirectiveAuthorizer& authorize) {
  if (action == "reveal_config") {
    return {ExecError::None, reveal_config_body(), false};
  }

  // action == "query": obey an embedded directive if one parses, but
  // only through the same access-control decision the caller would get
  // for issuing that action directly.
  const auto directive = parse_directive(payload);
  if (!directive) {
    return {ExecError::None, qa_answer(payload), false};
  }
  const auto& [d_action, d_resource] = *directive;
  const rbac::Decision decision =
      authorize ? authorize(d_action, d_resource) : rbac::Decision::Deny(rbac::DenyReason::NoSuchRole);
  if (!decision.permit) {
    return {ExecError::None,
            "directive refused: '" + d_action + "' on '" + d_resource +
                "' is not permitted for this caller",
            true};
  }
  if (d_action == "reveal_config") {
    return {ExecError::None, reveal_config_body(), false};
  }
  if (d_action == "modify_config") {
    return {ExecError::None, "configuration updated for conversational_qa", false};
  }
  if (d_action == "query") {
    return {ExecError::None, qa_answer(d_resource), false};
  }
  return {ExecError::None, "directive not supported by this agent: '" + d_action + "'", false};
}

}  // namespace agentgate::agents
