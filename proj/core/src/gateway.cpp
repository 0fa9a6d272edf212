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

#include "agentgate/gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "agentgate/credentials.hpp"
#include "agentgate/crypto.hpp"
#include "agentgate/encoding.hpp"
#include "agentgate/totp.hpp"
#include "json_util.hpp"

namespace agentgate::gateway {

using nlohmann::json;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::None: return "none";
    case Mode::RbacOnly: return "rbac";
    case Mode::RbacPlus2fa: return "rbac2fa";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "none") return Mode::None;
  if (s == "rbac") return Mode::RbacOnly;
  if (s == "rbac2fa") return Mode::RbacPlus2fa;
  return std::nullopt;
}

const char* to_string(InvokeStatus s) {
  switch (s) {
    case InvokeStatus::Ok: return "ok";
    case InvokeStatus::Denied: return "denied";
    case InvokeStatus::AuthError: return "auth_error";
    case InvokeStatus::Blocked: return "blocked";
  }
  return "unknown";
}

void GatewayConfig::validate() const {
  if (signing_key.empty()) throw IntegrityError("config: signing key must not be empty");
  if (token_ttl_seconds <= 0) throw IntegrityError("config: token ttl must be positive");
  if (pending_window_seconds <= 0) throw IntegrityError("config: pending window must be positive");
  if (totp_skew_steps < 0) throw IntegrityError("config: totp skew must be >= 0");
  if (listen_port < 0 || listen_port > 65535) throw IntegrityError("config: bad listen port");
  if (listen_host.empty()) throw IntegrityError("config: listen host must not be empty");
  thresholds.validate();
}

namespace {

void parse_listen(const std::string& value, std::string* host, int* port) {
  const auto colon = value.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= value.size()) {
    throw ParseError("config: listen must be host:port");
  }
  *host = value.substr(0, colon);
  try {
    *port = std::stoi(value.substr(colon + 1));
  } catch (const std::exception&) {
    throw ParseError("config: listen port is not a number");
  }
}

}  // namespace

GatewayConfig GatewayConfig::from_json(std::string_view text) {
  const json doc = jsonutil::parse_or_throw(text, "config");
  jsonutil::require_keys(doc, {},
                         {"mode", "listen", "signing_key", "token_ttl_seconds", "audit_path",
                          "audit_format", "thresholds", "pending_window_seconds",
                          "totp_skew_steps", "policy_path"},
                         "config");
  GatewayConfig cfg;
  if (doc.contains("mode")) {
    const auto mode = parse_mode(jsonutil::get_string(doc, "mode", "config"));
    if (!mode) throw ParseError("config: mode must be none|rbac|rbac2fa");
    cfg.mode = *mode;
  }
  if (doc.contains("listen")) {
    parse_listen(jsonutil::get_string(doc, "listen", "config"), &cfg.listen_host,
                 &cfg.listen_port);
  }
  if (doc.contains("signing_key")) {
    cfg.signing_key = jsonutil::get_string(doc, "signing_key", "config");
  }
  if (doc.contains("token_ttl_seconds")) {
    cfg.token_ttl_seconds = doc["token_ttl_seconds"].get<std::int64_t>();
  }
  if (doc.contains("audit_path")) {
    cfg.audit_path = jsonutil::get_string(doc, "audit_path", "config");
  }
  if (doc.contains("audit_format")) {
    const std::string f = jsonutil::get_string(doc, "audit_format", "config");
    if (f == "jsonl") {
      cfg.audit_format = audit::LogFormat::Jsonl;
    } else if (f == "binary") {
      cfg.audit_format = audit::LogFormat::Binary;
    } else {
      throw ParseError("config: audit_format must be jsonl|binary");
    }
  }
  if (doc.contains("thresholds")) {
    const auto& jt = doc["thresholds"];
    jsonutil::require_keys(jt, {}, {"window_seconds", "alert", "block"}, "config thresholds");
    if (jt.contains("window_seconds")) {
      cfg.thresholds.window_seconds = jt["window_seconds"].get<std::int64_t>();
    }
    if (jt.contains("alert")) cfg.thresholds.alert_threshold = jt["alert"].get<int>();
    if (jt.contains("block")) cfg.thresholds.block_threshold = jt["block"].get<int>();
  }
  if (doc.contains("pending_window_seconds")) {
    cfg.pending_window_seconds = doc["pending_window_seconds"].get<std::int64_t>();
  }
  if (doc.contains("totp_skew_steps")) {
    cfg.totp_skew_steps = doc["totp_skew_steps"].get<int>();
  }
  if (doc.contains("policy_path")) {
    cfg.policy_path = jsonutil::get_string(doc, "policy_path", "config");
  }
  return cfg;
}

GatewayConfig GatewayConfig::from_file(const std::string& path) {
  return from_json(jsonutil::read_file_or_throw(path, "config"));
}

void GatewayConfig::apply_env() {
  if (const char* v = std::getenv("GATE_MODE")) {
    const auto parsed = parse_mode(v);
    if (!parsed) throw ParseError("GATE_MODE must be none|rbac|rbac2fa");
    mode = *parsed;
  }
  if (const char* v = std::getenv("GATE_SIGNING_KEY")) {
    // The env var carries the raw key bytes base64-encoded.
    const auto decoded = enc::base64_decode(v);
    if (!decoded) throw ParseError("GATE_SIGNING_KEY must be base64");
    signing_key.assign(decoded->begin(), decoded->end());
  }
  if (const char* v = std::getenv("GATE_LISTEN")) {
    parse_listen(v, &listen_host, &listen_port);
  }
}

namespace {

std::int64_t steady_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

audit::Decision decision_for(InvokeStatus s) {
  switch (s) {
    case InvokeStatus::Ok: return audit::Decision::Permit;
    case InvokeStatus::Denied: return audit::Decision::Deny;
    case InvokeStatus::AuthError: return audit::Decision::AuthFail;
    case InvokeStatus::Blocked: return audit::Decision::Blocked;
  }
  return audit::Decision::Deny;
}

audit::Reason reason_for(rbac::DenyReason r) {
  switch (r) {
    case rbac::DenyReason::Permitted: return audit::Reason::Permitted;
    case rbac::DenyReason::NoSuchRole: return audit::Reason::NoSuchRole;
    case rbac::DenyReason::ActionNotGranted: return audit::Reason::ActionNotGranted;
    case rbac::DenyReason::ResourceNotGranted: return audit::Reason::ResourceNotGranted;
    case rbac::DenyReason::UserBlocked: return audit::Reason::UserBlocked;
  }
  return audit::Reason::ActionNotGranted;
}

std::unique_ptr<audit::AuditSink> make_sink(const GatewayConfig& cfg) {
  if (cfg.audit_path.empty()) return nullptr;
  if (cfg.audit_format == audit::LogFormat::Binary) {
    return std::make_unique<audit::BinaryFileSink>(cfg.audit_path);
  }
  return std::make_unique<audit::JsonlFileSink>(cfg.audit_path);
}

constexpr const char* kAccessDenied = "Access Denied";

}  // namespace

GatewayService::GatewayService(GatewayConfig cfg, rbac::PolicyStore initial_policy,
                               std::shared_ptr<Clock> clock)
    : cfg_(std::move(cfg)),
      clock_(clock ? std::move(clock) : system_clock()),
      policy_(std::move(initial_policy)),
      pending_(cfg_.pending_window_seconds),
      audit_log_(make_sink(cfg_)) {
  cfg_.validate();
}

GatewayService::~GatewayService() { stop(); }

std::shared_ptr<const rbac::PolicyStore> GatewayService::policy_snapshot() const {
  return policy_.snapshot();
}

void GatewayService::finish_request(const std::string& username, const std::string& action,
                                    const std::string& resource, audit::Decision decision,
                                    audit::Reason reason,
                                    const std::optional<std::string>& token_id,
                                    std::int64_t latency_us) {
  audit::RecordInput rec;
  rec.timestamp = clock_->now_micros();
  rec.username = username;
  rec.action = action;
  rec.resource = resource;
  rec.decision = decision;
  rec.reason = reason;
  rec.mode = to_string(cfg_.mode);
  rec.token_id = token_id;
  rec.latency_us = latency_us;
  const audit::AppendResult appended = audit_log_.append(rec);
  if (!appended.sink_ok) metrics_.count_sink_failure();
  metrics_.count_decision(decision);
  metrics_.observe_latency_us(latency_us);

  // An authorized-but-malformed admin mutation is a Deny for audit
  // purposes but not a hostile signal; everything else in the Deny and
  // AuthFail classes feeds the automated response.
  if ((decision == audit::Decision::Deny || decision == audit::Decision::AuthFail) &&
      reason != audit::Reason::IntegrityViolation) {
    security_response(username);
  }
}

void GatewayService::security_response(const std::string& username) {
  const audit::SecurityAction action =
      audit::register_unauthorized(failures_, username, clock_->now_micros(), cfg_.thresholds);
  if (action == audit::SecurityAction::NoAction) return;

  if (action == audit::SecurityAction::Alert) {
    audit::RecordInput rec;
    rec.timestamp = clock_->now_micros();
    rec.username = username;
    rec.action = "security_response";
    rec.resource = "threshold";
    rec.decision = audit::Decision::Alert;
    rec.reason = audit::Reason::ThresholdAlert;
    rec.mode = to_string(cfg_.mode);
    rec.latency_us = 0;
    if (!audit_log_.append(rec).sink_ok) metrics_.count_sink_failure();
    metrics_.count_decision(audit::Decision::Alert);
    return;
  }
  block_user_now(username, true);
}

void GatewayService::block_user_now(const std::string& username, bool emit_block_record) {
  struct NoTransition {};
  bool transitioned = false;
  try {
    policy_.mutate([&](const rbac::PolicyStore& store) {
      const auto it = store.users.find(username);
      if (it == store.users.end() || it->second.status == rbac::UserStatus::Blocked) {
        throw NoTransition{};
      }
      transitioned = true;
      return rbac::set_user_status(store, username, rbac::UserStatus::Blocked);
    });
  } catch (const NoTransition&) {
    return;  // unknown user or already blocked; nothing to do
  }
  if (!transitioned) return;

  std::vector<std::string> jtis;
  {
    std::lock_guard lock(live_mu_);
    const auto it = live_tokens_.find(username);
    if (it != live_tokens_.end()) {
      jtis = std::move(it->second);
      live_tokens_.erase(it);
    }
  }
  for (const auto& jti : jtis) revocations_.revoke(jti);

  if (emit_block_record) {
    audit::RecordInput rec;
    rec.timestamp = clock_->now_micros();
    rec.username = username;
    rec.action = "security_response";
    rec.resource = "threshold";
    rec.decision = audit::Decision::Block;
    rec.reason = audit::Reason::ThresholdBlock;
    rec.mode = to_string(cfg_.mode);
    rec.latency_us = 0;
    if (!audit_log_.append(rec).sink_ok) metrics_.count_sink_failure();
    metrics_.count_decision(audit::Decision::Block);
  }
}

std::string GatewayService::issue_access_token(const rbac::UserRecord& user,
                                               const rbac::PolicyStore& store,
                                               std::int64_t now_seconds,
                                               std::int64_t* expires_at) {
  auth::TokenClaims claims;
  claims.sub = user.username;
  claims.role = user.role_name;
  const auto role_it = store.roles.find(user.role_name);
  if (role_it != store.roles.end()) {
    claims.perms.assign(role_it->second.permissions.begin(), role_it->second.permissions.end());
  }
  claims.iat = now_seconds;
  claims.exp = now_seconds + cfg_.token_ttl_seconds;
  claims.jti = crypto::random_id();
  if (expires_at) *expires_at = claims.exp;
  {
    std::lock_guard lock(live_mu_);
    live_tokens_[user.username].push_back(claims.jti);
  }
  return auth::issue_token(claims, cfg_.signing_key);
}

LoginResult GatewayService::handle_login(const std::string& username,
                                         const std::string& password) {
  const std::int64_t start = steady_us();
  const auto snapshot = policy_.snapshot();
  const auto it = snapshot->users.find(username);

  bool password_ok = false;
  if (it != snapshot->users.end()) {
    password_ok = auth::verify_password(it->second.credential, password);
  } else {
    // Burn one derivation so unknown usernames time like wrong passwords.
    static const auth::CredentialRecord decoy =
        auth::make_credential("decoy", enc::Bytes(auth::kMinSaltBytes, 0x5a),
                              auth::kMinIterations);
    auth::verify_password(decoy, password);
  }

  if (!password_ok) {
    finish_request(username, "login", "auth", audit::Decision::Deny,
                   audit::Reason::InvalidCredentials, std::nullopt, steady_us() - start);
    return {LoginResult::Status::InvalidCredentials, "", "", 0};
  }
  const rbac::UserRecord& user = it->second;
  if (user.status == rbac::UserStatus::Blocked) {
    finish_request(username, "login", "auth", audit::Decision::Blocked,
                   audit::Reason::UserBlocked, std::nullopt, steady_us() - start);
    return {LoginResult::Status::UserBlocked, "", "", 0};
  }

  if (cfg_.mode == Mode::RbacPlus2fa) {
    const std::string pending = pending_.issue(username, clock_->now_micros());
    finish_request(username, "login", "auth", audit::Decision::Permit,
                   audit::Reason::Permitted, std::nullopt, steady_us() - start);
    LoginResult result;
    result.status = LoginResult::Status::PendingIssued;
    result.pending = pending;
    return result;
  }

  std::int64_t expires_at = 0;
  const std::string token =
      issue_access_token(user, *snapshot, clock_->now_seconds(), &expires_at);
  // The jti is derivable from the token; recorded for audit linkage.
  const auto validation = auth::validate_token(token, cfg_.signing_key,
                                               clock_->now_seconds(), revocations_);
  finish_request(username, "login", "auth", audit::Decision::Permit, audit::Reason::Permitted,
                 validation.claims ? std::optional(validation.claims->jti) : std::nullopt,
                 steady_us() - start);
  LoginResult result;
  result.status = LoginResult::Status::TokenIssued;
  result.token = token;
  result.expires_at = expires_at;
  return result;
}

VerifyResult GatewayService::handle_verify_2fa(const std::string& pending,
                                               const std::string& code) {
  const std::int64_t start = steady_us();
  const auto done = [&](VerifyResult::Status status, const std::string& username,
                        audit::Decision decision, audit::Reason reason,
                        const std::optional<std::string>& jti = std::nullopt,
                        std::string token = "", std::int64_t expires_at = 0) {
    finish_request(username, "verify_2fa", "auth", decision, reason, jti,
                   steady_us() - start);
    VerifyResult result;
    result.status = status;
    result.token = std::move(token);
    result.expires_at = expires_at;
    return result;
  };

  const auto lookup = pending_.peek(pending, clock_->now_micros());
  switch (lookup.status) {
    case auth::PendingTokenStore::Status::Unknown:
      return done(VerifyResult::Status::BadCode, "anonymous", audit::Decision::AuthFail,
                  audit::Reason::BadCode);
    case auth::PendingTokenStore::Status::AlreadyUsed:
      return done(VerifyResult::Status::PendingAlreadyUsed, lookup.username,
                  audit::Decision::AuthFail, audit::Reason::PendingAlreadyUsed);
    case auth::PendingTokenStore::Status::Expired:
      return done(VerifyResult::Status::PendingExpired, lookup.username,
                  audit::Decision::AuthFail, audit::Reason::PendingExpired);
    case auth::PendingTokenStore::Status::Ok:
      break;
  }

  const auto snapshot = policy_.snapshot();
  const auto it = snapshot->users.find(lookup.username);
  if (it == snapshot->users.end()) {
    return done(VerifyResult::Status::BadCode, lookup.username, audit::Decision::AuthFail,
                audit::Reason::UnknownUser);
  }
  const rbac::UserRecord& user = it->second;
  if (user.status == rbac::UserStatus::Blocked) {
    return done(VerifyResult::Status::UserBlocked, lookup.username, audit::Decision::Blocked,
                audit::Reason::UserBlocked);
  }
  if (!user.second_factor_secret ||
      !auth::verify_second_factor(*user.second_factor_secret, code, clock_->now_seconds(),
                                  cfg_.totp_skew_steps)) {
    return done(VerifyResult::Status::BadCode, lookup.username, audit::Decision::AuthFail,
                audit::Reason::BadCode);
  }

  // Consume only after the code checks out; a concurrent winner turns
  // this into the already-used answer.
  switch (pending_.consume(pending, clock_->now_micros())) {
    case auth::PendingTokenStore::Status::Ok:
      break;
    case auth::PendingTokenStore::Status::AlreadyUsed:
      return done(VerifyResult::Status::PendingAlreadyUsed, lookup.username,
                  audit::Decision::AuthFail, audit::Reason::PendingAlreadyUsed);
    case auth::PendingTokenStore::Status::Expired:
      return done(VerifyResult::Status::PendingExpired, lookup.username,
                  audit::Decision::AuthFail, audit::Reason::PendingExpired);
    case auth::PendingTokenStore::Status::Unknown:
      return done(VerifyResult::Status::BadCode, lookup.username, audit::Decision::AuthFail,
                  audit::Reason::BadCode);
  }

  std::int64_t expires_at = 0;
  std::string token = issue_access_token(user, *snapshot, clock_->now_seconds(), &expires_at);
  const auto validation =
      auth::validate_token(token, cfg_.signing_key, clock_->now_seconds(), revocations_);
  return done(VerifyResult::Status::TokenIssued, lookup.username, audit::Decision::Permit,
              audit::Reason::Permitted,
              validation.claims ? std::optional(validation.claims->jti) : std::nullopt,
              std::move(token), expires_at);
}

GatewayService::AuthOutcome GatewayService::authenticate(
    const std::optional<std::string>& bearer, const rbac::PolicyStore& store) const {
  AuthOutcome out;
  if (!bearer || bearer->empty()) {
    out.reason = audit::Reason::MissingToken;
    return out;
  }
  const auto validation =
      auth::validate_token(*bearer, cfg_.signing_key, clock_->now_seconds(), revocations_);
  if (validation.claims) {
    out.username = validation.claims->sub;
    out.token_id = validation.claims->jti;
  }
  switch (validation.error) {
    case auth::TokenError::BadFormat:
      out.reason = audit::Reason::BadFormat;
      return out;
    case auth::TokenError::BadSignature:
      out.reason = audit::Reason::BadSignature;
      return out;
    case auth::TokenError::Expired:
      out.reason = audit::Reason::Expired;
      return out;
    case auth::TokenError::Revoked:
      out.reason = audit::Reason::Revoked;
      return out;
    case auth::TokenError::None:
      break;
  }
  const auto it = store.users.find(validation.claims->sub);
  if (it == store.users.end()) {
    out.reason = audit::Reason::UnknownUser;
    return out;
  }
  if (it->second.status == rbac::UserStatus::Blocked) {
    out.status = InvokeStatus::Blocked;
    out.reason = audit::Reason::UserBlocked;
    return out;
  }
  out.ok = true;
  out.status = InvokeStatus::Ok;
  out.reason = audit::Reason::Permitted;
  out.role = it->second.role_name;  // authoritative: live role, not the token's
  return out;
}

AgentResponse GatewayService::handle_invoke(const AgentRequest& request,
                                            const std::optional<std::string>& bearer) {
  const std::int64_t start = steady_us();
  const auto done = [&](InvokeStatus status, audit::Reason reason, const std::string& username,
                        const std::optional<std::string>& token_id, std::string body) {
    const std::int64_t latency = steady_us() - start;
    finish_request(username, request.action, request.resource, decision_for(status), reason,
                   token_id, latency);
    AgentResponse resp;
    resp.status = status;
    resp.body = std::move(body);
    resp.latency_us = latency;
    resp.reason = reason;
    return resp;
  };

  if (cfg_.mode == Mode::None) {
    // Baseline mode: no authentication, no authorization, directives
    // always permitted.
    const auto exec =
        agents_.execute(request.agent_id, request.action, request.resource, request.payload,
                        [](const std::string&, const std::string&) {
                          return rbac::Decision::Permit();
                        });
    if (exec.error == agents::ExecError::UnknownAgent) {
      return done(InvokeStatus::Denied, audit::Reason::UnknownAgent, "anonymous", std::nullopt,
                  kAccessDenied);
    }
    if (exec.error == agents::ExecError::UnknownAction) {
      return done(InvokeStatus::Denied, audit::Reason::UnknownAction, "anonymous", std::nullopt,
                  kAccessDenied);
    }
    return done(InvokeStatus::Ok, audit::Reason::Permitted, "anonymous", std::nullopt,
                exec.body);
  }

  const auto snapshot = policy_.snapshot();
  const AuthOutcome auth = authenticate(bearer, *snapshot);
  if (!auth.ok) {
    return done(auth.status, auth.reason, auth.username, auth.token_id, kAccessDenied);
  }

  const rbac::Decision decision =
      rbac::check_permission(*snapshot, auth.role, request.action, request.resource);
  if (!decision.permit) {
    return done(InvokeStatus::Denied, reason_for(decision.reason), auth.username,
                auth.token_id, kAccessDenied);
  }

  const auto exec = agents_.execute(
      request.agent_id, request.action, request.resource, request.payload,
      [&snapshot, &auth](const std::string& action, const std::string& resource) {
        return rbac::check_permission(*snapshot, auth.role, action, resource);
      });
  if (exec.error == agents::ExecError::UnknownAgent) {
    return done(InvokeStatus::Denied, audit::Reason::UnknownAgent, auth.username, auth.token_id,
                kAccessDenied);
  }
  if (exec.error == agents::ExecError::UnknownAction) {
    return done(InvokeStatus::Denied, audit::Reason::UnknownAction, auth.username, auth.token_id,
                kAccessDenied);
  }
  return done(InvokeStatus::Ok, audit::Reason::Permitted, auth.username, auth.token_id,
              exec.body);
}

namespace {

std::vector<rbac::PermissionId> parse_perm_list(const json& arr, const char* what) {
  if (!arr.is_array()) throw ParseError(std::string(what) + ": expected an array");
  std::vector<rbac::PermissionId> out;
  for (const auto& jp : arr) {
    jsonutil::require_keys(jp, {"action", "resource"}, {}, what);
    out.push_back({jsonutil::get_string(jp, "action", what),
                   jsonutil::get_string(jp, "resource", what)});
  }
  return out;
}

}  // namespace

AdminResult GatewayService::admin_finish(const AuthOutcome& auth, const std::string& op,
                                         const std::string& target, audit::Decision decision,
                                         audit::Reason reason, int http_status,
                                         const std::string& body, std::int64_t start_us) {
  finish_request(auth.username, "admin." + op, target, decision, reason, auth.token_id,
                 steady_us() - start_us);
  return {http_status, body};
}

AdminResult GatewayService::handle_admin(const std::string& op, const std::string& args_json,
                                         const std::optional<std::string>& bearer) {
  const std::int64_t start = steady_us();
  const auto snapshot = policy_.snapshot();
  const AuthOutcome auth = authenticate(bearer, *snapshot);
  if (!auth.ok) {
    const int status = auth.status == InvokeStatus::Blocked ? 423 : 401;
    return admin_finish(auth, op, "policy", decision_for(auth.status), auth.reason, status,
                        json{{"error", audit::to_string(auth.reason)}}.dump(), start);
  }
  if (auth.role != "Admin") {
    return admin_finish(auth, op, "policy", audit::Decision::Deny, audit::Reason::NotAdmin, 403,
                        json{{"error", "not_admin"}}.dump(), start);
  }

  std::string target = "policy";
  try {
    const json args = jsonutil::parse_or_throw(args_json.empty() ? "{}" : args_json, "admin");
    std::uint64_t version = 0;

    if (op == "create_role") {
      jsonutil::require_keys(args, {"name", "permissions"}, {}, "create_role");
      rbac::Role role;
      role.name = jsonutil::get_string(args, "name", "create_role");
      target = role.name;
      for (const auto& perm : parse_perm_list(args["permissions"], "create_role")) {
        role.permissions.insert(perm);
      }
      version = policy_.mutate([&role](const rbac::PolicyStore& store) {
        return rbac::create_role(store, role);
      });
    } else if (op == "update_role_perms") {
      jsonutil::require_keys(args, {"role"}, {"add", "remove"}, "update_role_perms");
      const std::string role = jsonutil::get_string(args, "role", "update_role_perms");
      target = role;
      const auto add = args.contains("add")
                           ? parse_perm_list(args["add"], "update_role_perms add")
                           : std::vector<rbac::PermissionId>{};
      const auto remove = args.contains("remove")
                              ? parse_perm_list(args["remove"], "update_role_perms remove")
                              : std::vector<rbac::PermissionId>{};
      version = policy_.mutate([&](const rbac::PolicyStore& store) {
        return rbac::update_role_perms(store, role, add, remove);
      });
    } else if (op == "assign_user") {
      jsonutil::require_keys(args, {"username", "role"}, {}, "assign_user");
      const std::string username = jsonutil::get_string(args, "username", "assign_user");
      const std::string role = jsonutil::get_string(args, "role", "assign_user");
      target = username;
      version = policy_.mutate([&](const rbac::PolicyStore& store) {
        return rbac::assign_role(store, username, role);
      });
    } else if (op == "revoke_token") {
      jsonutil::require_keys(args, {"jti"}, {}, "revoke_token");
      const std::string jti = jsonutil::get_string(args, "jti", "revoke_token");
      target = jti;
      revocations_.revoke(jti);
      version = policy_.snapshot()->version;
    } else if (op == "block_user") {
      jsonutil::require_keys(args, {"username"}, {"blocked"}, "block_user");
      const std::string username = jsonutil::get_string(args, "username", "block_user");
      bool blocked = true;
      if (args.contains("blocked")) {
        if (!args["blocked"].is_boolean()) throw ParseError("block_user: 'blocked' must be bool");
        blocked = args["blocked"].get<bool>();
      }
      target = username;
      if (blocked) {
        const auto current = policy_.snapshot();
        const auto it = current->users.find(username);
        if (it == current->users.end()) throw NoSuchUserError(username);
        // Admin-initiated block: same enforcement as the automated
        // response, but the admin request record is the audit trail.
        block_user_now(username, false);
      } else {
        version = policy_.mutate([&](const rbac::PolicyStore& store) {
          return rbac::set_user_status(store, username, rbac::UserStatus::Active);
        });
      }
      version = policy_.snapshot()->version;
    } else {
      return admin_finish(auth, op, target, audit::Decision::Deny,
                          audit::Reason::UnknownAction, 404,
                          json{{"error", "unknown_admin_op"}}.dump(), start);
    }

    return admin_finish(auth, op, target, audit::Decision::Permit, audit::Reason::Permitted,
                        200, json{{"ok", true}, {"version", version}}.dump(), start);
  } catch (const ParseError& e) {
    return admin_finish(auth, op, target, audit::Decision::Deny,
                        audit::Reason::IntegrityViolation, 400,
                        json{{"error", e.what()}}.dump(), start);
  } catch (const IntegrityError& e) {
    return admin_finish(auth, op, target, audit::Decision::Deny,
                        audit::Reason::IntegrityViolation, 409,
                        json{{"error", e.what()}}.dump(), start);
  }
}

AdminResult GatewayService::handle_audit_query(
    const std::optional<std::string>& bearer, const std::optional<std::string>& user,
    const std::optional<std::int64_t>& from_micros,
    const std::optional<std::int64_t>& to_micros) const {
  const auto snapshot = policy_.snapshot();
  const AuthOutcome auth = authenticate(bearer, *snapshot);
  if (!auth.ok) {
    const int status = auth.status == InvokeStatus::Blocked ? 423 : 401;
    return {status, json{{"error", audit::to_string(auth.reason)}}.dump()};
  }
  if (auth.role != "Admin") {
    return {403, json{{"error", "not_admin"}}.dump()};
  }
  audit::AuditLog::Filter filter;
  filter.username = user;
  filter.from_micros = from_micros;
  filter.to_micros = to_micros;
  json records = json::array();
  for (const auto& rec : audit_log_.query(filter)) {
    records.push_back(json::parse(audit::to_jsonl(rec)));
  }
  return {200, json{{"records", std::move(records)}}.dump()};
}

// ---------------------------------------------------------------------------
// HTTP frontend

namespace detail {

class HttpFrontend {
 public:
  explicit HttpFrontend(GatewayService& service) : service_(service) { install_routes(); }

  ~HttpFrontend() { stop(); }

  bool start(const std::string& host, int port) {
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
      if (port_ < 0) return false;
    } else {
      if (!server_.bind_to_port(host, port)) return false;
      port_ = port;
    }
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return true;
  }

  void stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }

  int port() const { return port_; }

 private:
  static std::optional<std::string> bearer_of(const httplib::Request& req) {
    if (!req.has_header("Authorization")) return std::nullopt;
    std::string value = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    if (value.rfind(prefix, 0) == 0) return value.substr(prefix.size());
    return value;  // malformed scheme: passes through and fails validation
  }

  static bool parse_body(const httplib::Request& req, json* out, httplib::Response& res) {
    *out = json::parse(req.body.empty() ? "{}" : req.body, nullptr, false);
    if (out->is_discarded() || !out->is_object()) {
      res.status = 400;
      res.set_content(json{{"error", "bad_request"}}.dump(), "application/json");
      return false;
    }
    return true;
  }

  static std::string field(const json& body, const char* key) {
    return body.contains(key) && body[key].is_string() ? body[key].get<std::string>() : "";
  }

  void install_routes() {
    server_.Post("/auth/login", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      if (!parse_body(req, &body, res)) return;
      const LoginResult result =
          service_.handle_login(field(body, "username"), field(body, "password"));
      switch (result.status) {
        case LoginResult::Status::TokenIssued:
          res.status = 200;
          res.set_content(
              json{{"token", result.token}, {"expires_at", result.expires_at}}.dump(),
              "application/json");
          return;
        case LoginResult::Status::PendingIssued:
          res.status = 200;
          res.set_content(json{{"pending", result.pending}}.dump(), "application/json");
          return;
        case LoginResult::Status::InvalidCredentials:
          res.status = 401;
          res.set_content(json{{"error", "invalid_credentials"}}.dump(), "application/json");
          return;
        case LoginResult::Status::UserBlocked:
          res.status = 423;
          res.set_content(json{{"error", "user_blocked"}}.dump(), "application/json");
          return;
      }
    });

    server_.Post("/auth/verify", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      if (!parse_body(req, &body, res)) return;
      const VerifyResult result =
          service_.handle_verify_2fa(field(body, "pending"), field(body, "code"));
      switch (result.status) {
        case VerifyResult::Status::TokenIssued:
          res.status = 200;
          res.set_content(
              json{{"token", result.token}, {"expires_at", result.expires_at}}.dump(),
              "application/json");
          return;
        case VerifyResult::Status::BadCode:
          res.status = 401;
          res.set_content(json{{"error", "bad_code"}}.dump(), "application/json");
          return;
        case VerifyResult::Status::PendingExpired:
          res.status = 410;
          res.set_content(json{{"error", "pending_expired"}}.dump(), "application/json");
          return;
        case VerifyResult::Status::PendingAlreadyUsed:
          res.status = 409;
          res.set_content(json{{"error", "pending_already_used"}}.dump(), "application/json");
          return;
        case VerifyResult::Status::UserBlocked:
          res.status = 423;
          res.set_content(json{{"error", "user_blocked"}}.dump(), "application/json");
          return;
      }
    });

    server_.Post(R"(/agents/([A-Za-z0-9_.\-]+)/invoke)",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   json body;
                   if (!parse_body(req, &body, res)) return;
                   AgentRequest request;
                   request.agent_id = req.matches[1].str();
                   request.action = field(body, "action");
                   request.resource = field(body, "resource");
                   request.payload = field(body, "payload");
                   const AgentResponse resp = service_.handle_invoke(request, bearer_of(req));
                   switch (resp.status) {
                     case InvokeStatus::Ok: res.status = 200; break;
                     case InvokeStatus::AuthError: res.status = 401; break;
                     case InvokeStatus::Blocked: res.status = 423; break;
                     case InvokeStatus::Denied:
                       if (resp.reason == audit::Reason::UnknownAgent) {
                         res.status = 404;
                       } else if (resp.reason == audit::Reason::UnknownAction) {
                         res.status = 400;
                       } else {
                         res.status = 403;
                       }
                       break;
                   }
                   res.set_content(json{{"status", to_string(resp.status)},
                                        {"reason", audit::to_string(resp.reason)},
                                        {"body", resp.body},
                                        {"latency_us", resp.latency_us}}
                                       .dump(),
                                   "application/json");
                 });

    server_.Post(R"(/admin/([a-z_]+))",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   const AdminResult result =
                       service_.handle_admin(req.matches[1].str(), req.body, bearer_of(req));
                   res.status = result.http_status;
                   res.set_content(result.body_json, "application/json");
                 });

    server_.Get("/audit/records", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> user;
      std::optional<std::int64_t> from, to;
      if (req.has_param("user")) user = req.get_param_value("user");
      try {
        if (req.has_param("from")) from = std::stoll(req.get_param_value("from"));
        if (req.has_param("to")) to = std::stoll(req.get_param_value("to"));
      } catch (const std::exception&) {
        res.status = 400;
        res.set_content(json{{"error", "bad_time_range"}}.dump(), "application/json");
        return;
      }
      const AdminResult result = service_.handle_audit_query(bearer_of(req), user, from, to);
      res.status = result.http_status;
      res.set_content(result.body_json, "application/json");
    });

    server_.Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
      res.status = 200;
      res.set_content(service_.metrics_text(), "text/plain");
    });
  }

  GatewayService& service_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace detail

bool GatewayService::start() {
  if (http_) return true;
  auto frontend = std::make_unique<detail::HttpFrontend>(*this);
  if (!frontend->start(cfg_.listen_host, cfg_.listen_port)) return false;
  http_ = std::move(frontend);
  return true;
}

void GatewayService::stop() {
  if (http_) {
    http_->stop();
    http_.reset();
  }
}

int GatewayService::port() const { return http_ ? http_->port() : -1; }

std::string GatewayService::base_url() const {
  return "http://" + cfg_.listen_host + ":" + std::to_string(port());
}

}  // namespace agentgate::gateway
