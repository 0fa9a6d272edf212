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

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "agentgate/credentials.hpp"
#include "agentgate/encoding.hpp"
#include "agentgate/errors.hpp"

namespace agentgate::rbac {

// Identifiers (usernames, role names, actions, resource classes) are
// non-empty and contain no whitespace. "*" is only meaningful as a
// resource wildcard inside a role grant.
bool valid_identifier(std::string_view id);

struct PermissionId {
  std::string action;
  std::string resource;  // resource class, or "*" to match any class

  auto operator<=>(const PermissionId&) const = default;
};

struct Role {
  std::string name;
  std::set<PermissionId> permissions;

  bool operator==(const Role&) const = default;
};

enum class UserStatus { Active, Blocked };

const char* to_string(UserStatus s);
std::optional<UserStatus> parse_user_status(std::string_view s);

struct UserRecord {
  std::string username;
  auth::CredentialRecord credential;
  std::optional<enc::Bytes> second_factor_secret;  // shared authenticator secret
  std::string role_name;                           // exactly one role per user
  UserStatus status = UserStatus::Active;

  bool operator==(const UserRecord&) const = default;
};

// Immutable snapshot of the authorization state. Mutations copy, edit,
// validate and re-publish (see PolicyService); readers never observe a
// partially applied change.
struct PolicyStore {
  std::map<std::string, Role> roles;
  std::map<std::string, UserRecord> users;
  std::uint64_t version = 0;

  bool operator==(const PolicyStore&) const = default;
};

// Throws IntegrityError if any id is malformed, any map key disagrees
// with the record's own name, or any user references a missing role.
void validate(const PolicyStore& store);

enum class DenyReason {
  Permitted,  // not a denial; paired with Outcome::Permit only
  NoSuchRole,
  ActionNotGranted,
  ResourceNotGranted,
  UserBlocked,
};

const char* to_string(DenyReason r);

struct Decision {
  bool permit = false;
  DenyReason reason = DenyReason::Permitted;

  static Decision Permit() { return {true, DenyReason::Permitted}; }
  static Decision Deny(DenyReason r) { return {false, r}; }
  bool operator==(const Decision&) const = default;
};

// Deny-by-default lookup of (action, resource) against one role.
// A grant matches when the action is equal and the resource is equal
// or the grant's resource is "*".
Decision check_permission(const PolicyStore& store, std::string_view role_name,
                          std::string_view action, std::string_view resource);

// Pure mutations: each returns an edited copy with version + 1.
// All of them validate their inputs and throw on violation.
PolicyStore create_role(PolicyStore store, Role role);  // duplicate name -> IntegrityError
PolicyStore update_role_perms(PolicyStore store, const std::string& role_name,
                              const std::vector<PermissionId>& add,
                              const std::vector<PermissionId>& remove);
PolicyStore assign_role(PolicyStore store, const std::string& username,
                        const std::string& role_name);
PolicyStore set_user_status(PolicyStore store, const std::string& username, UserStatus status);
PolicyStore upsert_user(PolicyStore store, UserRecord user);

// Policy file format: {"roles": [...], "users": [...]} as produced by
// dump_policy. Unknown keys are rejected. load(dump(s)) == s.
PolicyStore load_policy(std::string_view json_text);
PolicyStore load_policy_file(const std::string& path);
std::string dump_policy(const PolicyStore& store);

// Serializes writers and hands out consistent snapshots to readers.
class PolicyService {
 public:
  explicit PolicyService(PolicyStore initial);

  std::shared_ptr<const PolicyStore> snapshot() const;

  // Applies fn to a copy of the current store under the writer lock,
  // validates the result and publishes it. fn is expected to go through
  // the mutation helpers above, so the published version is strictly
  // greater than the old one; mutate enforces that. Exceptions from fn
  // leave the store untouched.
  std::uint64_t mutate(const std::function<PolicyStore(const PolicyStore&)>& fn);

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const PolicyStore> current_;
};

}  // namespace agentgate::rbac
