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

#include "agentgate/rbac.hpp"

#include <cctype>

#include <nlohmann/json.hpp>

#include "json_util.hpp"

namespace agentgate::rbac {

using nlohmann::json;

bool valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

const char* to_string(UserStatus s) {
  return s == UserStatus::Active ? "active" : "blocked";
}

std::optional<UserStatus> parse_user_status(std::string_view s) {
  if (s == "active") return UserStatus::Active;
  if (s == "blocked") return UserStatus::Blocked;
  return std::nullopt;
}

const char* to_string(DenyReason r) {
  switch (r) {
    case DenyReason::Permitted: return "permitted";
    case DenyReason::NoSuchRole: return "no_such_role";
    case DenyReason::ActionNotGranted: return "action_not_granted";
    case DenyReason::ResourceNotGranted: return "resource_not_granted";
    case DenyReason::UserBlocked: return "user_blocked";
  }
  return "unknown";
}

void validate(const PolicyStore& store) {
  for (const auto& [name, role] : store.roles) {
    if (name != role.name) throw IntegrityError("role key mismatch: " + name);
    if (!valid_identifier(name)) throw IntegrityError("bad role name: '" + name + "'");
    for (const auto& perm : role.permissions) {
      if (!valid_identifier(perm.action) || perm.action == "*") {
        throw IntegrityError("bad action in role " + name + ": '" + perm.action + "'");
      }
      if (!valid_identifier(perm.resource)) {
        throw IntegrityError("bad resource in role " + name + ": '" + perm.resource + "'");
      }
    }
  }
  for (const auto& [name, user] : store.users) {
    if (name != user.username) throw IntegrityError("user key mismatch: " + name);
    if (!valid_identifier(name) || name == "*") {
      throw IntegrityError("bad username: '" + name + "'");
    }
    if (!store.roles.contains(user.role_name)) {
      throw IntegrityError("user " + name + " references missing role " + user.role_name);
    }
    auth::validate(user.credential);
    if (user.second_factor_secret && user.second_factor_secret->empty()) {
      throw IntegrityError("user " + name + " has an empty second-factor secret");
    }
  }
}

Decision check_permission(const PolicyStore& store, std::string_view role_name,
                          std::string_view action, std::string_view resource) {
  const auto it = store.roles.find(std::string(role_name));
  if (it == store.roles.end()) return Decision::Deny(DenyReason::NoSuchRole);
  bool action_seen = false;
  for (const auto& perm : it->second.permissions) {
    if (perm.action != action) continue;
    action_seen = true;
    if (perm.resource == "*" || perm.resource == resource) return Decision::Permit();
  }
  return Decision::Deny(action_seen ? DenyReason::ResourceNotGranted
                                    : DenyReason::ActionNotGranted);
}

namespace {

PolicyStore finish(PolicyStore store) {
  store.version += 1;
  validate(store);
  return store;
}

}  // namespace

PolicyStore create_role(PolicyStore store, Role role) {
  if (store.roles.contains(role.name)) {
    throw IntegrityError("role already exists: " + role.name);
  }
  store.roles.emplace(role.name, std::move(role));
  return finish(std::move(store));
}

PolicyStore update_role_perms(PolicyStore store, const std::string& role_name,
                              const std::vector<PermissionId>& add,
                              const std::vector<PermissionId>& remove) {
  auto it = store.roles.find(role_name);
  if (it == store.roles.end()) throw NoSuchRoleError(role_name);
  for (const auto& perm : add) it->second.permissions.insert(perm);
  for (const auto& perm : remove) it->second.permissions.erase(perm);
  return finish(std::move(store));
}

PolicyStore assign_role(PolicyStore store, const std::string& username,
                        const std::string& role_name) {
  auto it = store.users.find(username);
  if (it == store.users.end()) throw NoSuchUserError(username);
  if (!store.roles.contains(role_name)) throw NoSuchRoleError(role_name);
  it->second.role_name = role_name;
  return finish(std::move(store));
}

PolicyStore set_user_status(PolicyStore store, const std::string& username, UserStatus status) {
  auto it = store.users.find(username);
  if (it == store.users.end()) throw NoSuchUserError(username);
  it->second.status = status;
  return finish(std::move(store));
}

PolicyStore upsert_user(PolicyStore store, UserRecord user) {
  store.users[user.username] = std::move(user);
  return finish(std::move(store));
}

namespace {

using jsonutil::get_string;
using jsonutil::require_keys;

enc::Bytes get_b64(const json& obj, const char* key, const char* what) {
  const auto decoded = enc::base64_decode(get_string(obj, key, what));
  if (!decoded) throw ParseError(std::string(what) + ": '" + key + "' is not valid base64");
  return *decoded;
}

}  // namespace

PolicyStore load_policy(std::string_view json_text) {
  json doc = jsonutil::parse_or_throw(json_text, "policy");
  require_keys(doc, {"roles", "users"}, {"version"}, "policy");
  if (!doc["roles"].is_array() || !doc["users"].is_array()) {
    throw ParseError("policy: 'roles' and 'users' must be arrays");
  }

  PolicyStore store;
  store.version = 1;  // fresh load; an explicit "version" key overrides
  if (doc.contains("version")) {
    if (!doc["version"].is_number_unsigned()) {
      throw ParseError("policy: 'version' must be a non-negative integer");
    }
    store.version = doc["version"].get<std::uint64_t>();
  }
  for (const auto& jr : doc["roles"]) {
    require_keys(jr, {"name", "permissions"}, {}, "role");
    Role role;
    role.name = get_string(jr, "name", "role");
    if (!jr["permissions"].is_array()) throw ParseError("role: 'permissions' must be an array");
    for (const auto& jp : jr["permissions"]) {
      require_keys(jp, {"action", "resource"}, {}, "permission");
      role.permissions.insert(
          {get_string(jp, "action", "permission"), get_string(jp, "resource", "permission")});
    }
    if (store.roles.contains(role.name)) {
      throw IntegrityError("policy: duplicate role " + role.name);
    }
    store.roles.emplace(role.name, std::move(role));
  }

  for (const auto& ju : doc["users"]) {
    require_keys(ju,
                 {"username", "password_scheme", "salt_b64", "digest_b64", "iterations", "role",
                  "status"},
                 {"totp_secret_b32"}, "user");
    UserRecord user;
    user.username = get_string(ju, "username", "user");
    user.role_name = get_string(ju, "role", "user");
    const auto status = parse_user_status(get_string(ju, "status", "user"));
    if (!status) throw ParseError("user " + user.username + ": bad status");
    user.status = *status;

    user.credential.scheme = get_string(ju, "password_scheme", "user");
    user.credential.salt = get_b64(ju, "salt_b64", "user");
    if (!ju["iterations"].is_number_unsigned()) {
      throw ParseError("user: 'iterations' must be a non-negative integer");
    }
    user.credential.iterations = ju["iterations"].get<std::uint32_t>();
    user.credential.digest = get_b64(ju, "digest_b64", "user");

    if (ju.contains("totp_secret_b32")) {
      const auto secret = enc::base32_decode(get_string(ju, "totp_secret_b32", "user"));
      if (!secret) throw ParseError("user " + user.username + ": bad base32 secret");
      user.second_factor_secret = *secret;
    }

    if (store.users.contains(user.username)) {
      throw IntegrityError("policy: duplicate user " + user.username);
    }
    store.users.emplace(user.username, std::move(user));
  }

  validate(store);
  return store;
}

PolicyStore load_policy_file(const std::string& path) {
  return load_policy(jsonutil::read_file_or_throw(path, "policy"));
}

std::string dump_policy(const PolicyStore& store) {
  json doc;
  doc["version"] = store.version;
  doc["roles"] = json::array();
  for (const auto& [_, role] : store.roles) {
    json jr;
    jr["name"] = role.name;
    jr["permissions"] = json::array();
    for (const auto& perm : role.permissions) {
      jr["permissions"].push_back({{"action", perm.action}, {"resource", perm.resource}});
    }
    doc["roles"].push_back(std::move(jr));
  }
  doc["users"] = json::array();
  for (const auto& [_, user] : store.users) {
    json ju;
    ju["username"] = user.username;
    ju["password_scheme"] = user.credential.scheme;
    ju["salt_b64"] = enc::base64_encode(user.credential.salt);
    ju["digest_b64"] = enc::base64_encode(user.credential.digest);
    ju["iterations"] = user.credential.iterations;
    ju["role"] = user.role_name;
    ju["status"] = to_string(user.status);
    if (user.second_factor_secret) {
      ju["totp_secret_b32"] = enc::base32_encode(*user.second_factor_secret);
    }
    doc["users"].push_back(std::move(ju));
  }
  return doc.dump(2);
}

PolicyService::PolicyService(PolicyStore initial) {
  validate(initial);
  current_ = std::make_shared<const PolicyStore>(std::move(initial));
}

std::shared_ptr<const PolicyStore> PolicyService::snapshot() const {
  std::lock_guard lock(mu_);
  return current_;
}

std::uint64_t PolicyService::mutate(const std::function<PolicyStore(const PolicyStore&)>& fn) {
  std::lock_guard lock(mu_);
  PolicyStore next = fn(*current_);
  validate(next);
  if (next.version <= current_->version) {
    throw IntegrityError("policy mutation must advance the version");
  }
  const std::uint64_t version = next.version;
  current_ = std::make_shared<const PolicyStore>(std::move(next));
  return version;
}

}  // namespace agentgate::rbac
