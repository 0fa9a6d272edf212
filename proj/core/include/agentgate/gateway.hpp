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

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "agentgate/agents.hpp"
#include "agentgate/audit.hpp"
#include "agentgate/clock.hpp"
#include "agentgate/metrics.hpp"
#include "agentgate/pending.hpp"
#include "agentgate/rbac.hpp"
#include "agentgate/token.hpp"

namespace agentgate::gateway {

namespace detail {
class HttpFrontend;
}

// Access modes for experiments. None switches off authentication and
// authorization entirely (baseline), RbacOnly is password login plus
// permission checks, RbacPlus2fa adds the second login step.
enum class Mode { None, RbacOnly, RbacPlus2fa };

const char* to_string(Mode m);  // "none" | "rbac" | "rbac2fa"
std::optional<Mode> parse_mode(std::string_view s);

struct GatewayConfig {
  Mode mode = Mode::RbacOnly;
  std::string listen_host = "127.0.0.1";
  int listen_port = 0;  // 0 picks an ephemeral port
  std::string signing_key;
  std::int64_t token_ttl_seconds = 3600;
  std::string audit_path;  // empty: in-memory log only
  audit::LogFormat audit_format = audit::LogFormat::Jsonl;
  audit::ThresholdConfig thresholds;
  std::int64_t pending_window_seconds = auth::PendingTokenStore::kDefaultWindowSeconds;
  int totp_skew_steps = 1;
  std::string policy_path;  // consumed by the CLI, not the service

  void validate() const;

  // Config file (strict keys), then environment on top: GATE_MODE,
  // GATE_SIGNING_KEY, GATE_LISTEN ("host:port").
  static GatewayConfig from_json(std::string_view text);
  static GatewayConfig from_file(const std::string& path);
  void apply_env();
};

struct AgentRequest {
  std::string agent_id;
  std::string action;
  std::string resource;
  std::string payload;
};

enum class InvokeStatus { Ok, Denied, AuthError, Blocked };
const char* to_string(InvokeStatus s);

struct AgentResponse {
  InvokeStatus status = InvokeStatus::Denied;
  std::string body;
  std::int64_t latency_us = 0;
  audit::Reason reason = audit::Reason::Permitted;
};

struct LoginResult {
  enum class Status { TokenIssued, PendingIssued, InvalidCredentials, UserBlocked };
  Status status = Status::InvalidCredentials;
  std::string pending;          // PendingIssued
  std::string token;            // TokenIssued
  std::int64_t expires_at = 0;  // TokenIssued, unix seconds
};

struct VerifyResult {
  enum class Status { TokenIssued, BadCode, PendingExpired, PendingAlreadyUsed, UserBlocked };
  Status status = Status::BadCode;
  std::string token;
  std::int64_t expires_at = 0;
};

struct AdminResult {
  int http_status = 200;
  std::string body_json;
};

// The service proper: every pipeline request (login, verify, invoke,
// admin) runs through exactly one terminal audit append, and every
// Deny or AuthFail feeds the per-user failure counter that drives the
// automated Alert/Block response. The HTTP listener is a thin layer
// over the handle_* methods, which are directly callable for tests.
class GatewayService {
 public:
  GatewayService(GatewayConfig cfg, rbac::PolicyStore initial_policy,
                 std::shared_ptr<Clock> clock = nullptr);
  ~GatewayService();

  GatewayService(const GatewayService&) = delete;
  GatewayService& operator=(const GatewayService&) = delete;

  LoginResult handle_login(const std::string& username, const std::string& password);
  VerifyResult handle_verify_2fa(const std::string& pending, const std::string& code);
  AgentResponse handle_invoke(const AgentRequest& request,
                              const std::optional<std::string>& bearer);

  // op: create_role | update_role_perms | assign_user | revoke_token |
  // block_user. args_json carries the op arguments.
  AdminResult handle_admin(const std::string& op, const std::string& args_json,
                           const std::optional<std::string>& bearer);

  // GET /audit/records: admin-gated observability read. Returns the
  // HTTP status plus a JSON body. Observability reads are not audited
  // (reading the log must not grow the log).
  AdminResult handle_audit_query(const std::optional<std::string>& bearer,
                                 const std::optional<std::string>& user,
                                 const std::optional<std::int64_t>& from_micros,
                                 const std::optional<std::int64_t>& to_micros) const;

  Mode mode() const { return cfg_.mode; }
  const GatewayConfig& config() const { return cfg_; }

  std::shared_ptr<const rbac::PolicyStore> policy_snapshot() const;
  const audit::AuditLog& audit_log() const { return audit_log_; }
  auth::RevocationList& revocations() { return revocations_; }
  Metrics& metrics() { return metrics_; }
  std::string metrics_text() const { return metrics_.render(); }

  // HTTP lifecycle. start binds (resolving an ephemeral port), spins
  // the accept loop on a background thread and returns once the
  // listener is ready.
  bool start();
  void stop();
  int port() const;
  std::string base_url() const;

 private:
  struct AuthOutcome {
    bool ok = false;
    InvokeStatus status = InvokeStatus::AuthError;
    audit::Reason reason = audit::Reason::MissingToken;
    std::string username = "anonymous";
    std::string role;
    std::optional<std::string> token_id;
  };

  AuthOutcome authenticate(const std::optional<std::string>& bearer,
                           const rbac::PolicyStore& store) const;
  std::string issue_access_token(const rbac::UserRecord& user, const rbac::PolicyStore& store,
                                 std::int64_t now_seconds, std::int64_t* expires_at);
  void finish_request(const std::string& username, const std::string& action,
                      const std::string& resource, audit::Decision decision,
                      audit::Reason reason, const std::optional<std::string>& token_id,
                      std::int64_t latency_us);
  void security_response(const std::string& username);
  void block_user_now(const std::string& username, bool emit_block_record);
  AdminResult admin_finish(const AuthOutcome& auth, const std::string& op,
                           const std::string& target, audit::Decision decision,
                           audit::Reason reason, int http_status, const std::string& body,
                           std::int64_t start_us);

  GatewayConfig cfg_;
  std::shared_ptr<Clock> clock_;
  rbac::PolicyService policy_;
  auth::PendingTokenStore pending_;
  auth::RevocationList revocations_;
  audit::AuditLog audit_log_;
  audit::FailureCounter failures_;
  Metrics metrics_;
  agents::AgentRegistry agents_;

  std::mutex live_mu_;
  std::unordered_map<std::string, std::vector<std::string>> live_tokens_;

  std::unique_ptr<detail::HttpFrontend> http_;
};

}  // namespace agentgate::gateway
