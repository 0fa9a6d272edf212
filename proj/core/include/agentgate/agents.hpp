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

#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "agentgate/rbac.hpp"

// Deterministic mock agents: fixture data only, no model inference.
// Experiments need replayable outputs, so every response is a pure
// function of (action, resource, payload) plus explicitly serialized
// upload state.
namespace agentgate::agents {

inline constexpr std::string_view kDocRetrieval = "doc_retrieval";
inline constexpr std::string_view kPredictiveMaintenance = "predictive_maintenance";
inline constexpr std::string_view kConversationalQa = "conversational_qa";

// Planted secret: it may appear in a response only through an
// authorized reveal_config, so any sighting elsewhere proves an
// injection got through.
inline constexpr std::string_view kCanary = "CANARY-DB-PASSWORD-93ac";

// Embedded instruction the QA agent obeys: "::do:<action>:<resource>".
// Tokens are [A-Za-z0-9_.-]+; anything else does not parse and the
// payload stays plain text. Returns the first well-formed directive.
std::optional<std::pair<std::string, std::string>> parse_directive(std::string_view payload);

enum class ExecError { None, UnknownAgent, UnknownAction };

struct ExecResult {
  ExecError error = ExecError::None;
  std::string body;
  // An embedded directive was found and refused by the access layer.
  bool directive_denied = false;
};

// Access-control hook for embedded directives; runs under the calling
// user's identity, same as the outer request.
using DirectiveAuthorizer =
    std::function<rbac::Decision(const std::string& action, const std::string& resource)>;

class AgentRegistry {
 public:
  AgentRegistry();

  bool known_agent(std::string_view agent_id) const;
  bool known_action(std::string_view agent_id, std::string_view action) const;

  ExecResult execute(const std::string& agent_id, const std::string& action,
                     const std::string& resource, const std::string& payload,
                     const DirectiveAuthorizer& authorize);

 private:
  std::string run_doc_retrieval(const std::string& action, const std::string& resource,
                                const std::string& payload);
  std::string run_predict(const std::string& resource) const;
  ExecResult run_qa(const std::string& action, const std::string& resource,
                    const std::string& payload, const DirectiveAuthorizer& authorize);
  std::string qa_answer(const std::string& payload) const;
  std::string reveal_config_body() const;

  std::map<std::string, std::set<std::string>> actions_;
  std::map<std::string, std::string> fixture_docs_;
  std::map<std::string, std::string> knowledge_base_;

  std::mutex upload_mu_;  // serializes upload_doc state
  std::map<std::string, std::string> uploaded_docs_;
};

}  // namespace agentgate::agents
