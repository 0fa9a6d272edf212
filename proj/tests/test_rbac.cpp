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

#include <doctest.h>

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "agentgate/credentials.hpp"
#include "agentgate/encoding.hpp"
#include "agentgate/errors.hpp"
#include "agentgate/rbac.hpp"

using namespace agentgate;
using nlohmann::json;

namespace {

enc::Bytes bytes_of(std::string_view s) { return enc::Bytes(s.begin(), s.end()); }

json user_json(const std::string& name, const std::string& role) {
  const auto cred = auth::make_credential("pw-" + name, bytes_of("0123456789abcdef"), 1000);
  json ju;
  ju["username"] = name;
  ju["password_scheme"] = std::string(auth::kCredentialScheme);
  ju["salt_b64"] = enc::base64_encode(cred.salt);
  ju["digest_b64"] = enc::base64_encode(cred.digest);
  ju["iterations"] = cred.iterations;
  ju["role"] = role;
  ju["status"] = "active";
  return ju;
}

json three_role_doc() {
  json doc;
  doc["roles"] = json::array({
      {{"name", "Admin"},
       {"permissions", json::array({{{"action", "modify_config"}, {"resource", "*"}},
                                    {{"action", "read_doc"}, {"resource", "*"}}})}},
      {{"name", "User"},
       {"permissions", json::array({{{"action", "read_doc"}, {"resource", "docs"}},
                                    {{"action", "query"}, {"resource", "qa"}}})}},
      {{"name", "Client"},
       {"permissions", json::array({{{"action", "query"}, {"resource", "qa"}}})}},
  });
  doc["users"] = json::array({user_json("root", "Admin"), user_json("alice", "User"),
                              user_json("bob", "Client")});
  return doc;
}

}  // namespace

TEST_SUITE("rbac") {

TEST_CASE("load_policy builds the declared roles and users") {
  const auto store = rbac::load_policy(three_role_doc().dump());
  CHECK(store.roles.size() == 3);
  CHECK(store.users.size() == 3);
  CHECK(store.version == 1);
  CHECK(store.roles.at("Admin").permissions.size() == 2);
  CHECK(store.users.at("alice").role_name == "User");
  CHECK(store.users.at("alice").status == rbac::UserStatus::Active);
  CHECK_FALSE(store.users.at("alice").second_factor_secret.has_value());
}

TEST_CASE("a role with an empty permission set permits nothing") {
  auto doc = three_role_doc();
  doc["roles"].push_back({{"name", "Intern"}, {"permissions", json::array()}});
  const auto store = rbac::load_policy(doc.dump());
  CHECK(store.roles.at("Intern").permissions.empty());
  const auto d = rbac::check_permission(store, "Intern", "read_doc", "docs");
  CHECK_FALSE(d.permit);
  CHECK(d.reason == rbac::DenyReason::ActionNotGranted);
}

TEST_CASE("load_policy rejects structural violations") {
  auto dup_role = three_role_doc();
  dup_role["roles"].push_back(dup_role["roles"][1]);  // second "User"
  CHECK_THROWS_AS(rbac::load_policy(dup_role.dump()), IntegrityError);

  auto dup_user = three_role_doc();
  dup_user["users"].push_back(user_json("alice", "Client"));
  CHECK_THROWS_AS(rbac::load_policy(dup_user.dump()), IntegrityError);

  auto dangling = three_role_doc();
  dangling["users"].push_back(user_json("eve", "Operator"));
  CHECK_THROWS_AS(rbac::load_policy(dangling.dump()), IntegrityError);
}

TEST_CASE("load_policy rejects unknown keys and malformed fields") {
  CHECK_THROWS_AS(rbac::load_policy("not json"), ParseError);
  CHECK_THROWS_AS(rbac::load_policy("[1,2,3]"), ParseError);

  auto extra_top = three_role_doc();
  extra_top["surprise"] = 1;
  CHECK_THROWS_AS(rbac::load_policy(extra_top.dump()), ParseError);

  auto extra_role = three_role_doc();
  extra_role["roles"][0]["color"] = "red";
  CHECK_THROWS_AS(rbac::load_policy(extra_role.dump()), ParseError);

  auto extra_perm = three_role_doc();
  extra_perm["roles"][0]["permissions"][0]["scope"] = "all";
  CHECK_THROWS_AS(rbac::load_policy(extra_perm.dump()), ParseError);

  auto extra_user = three_role_doc();
  extra_user["users"][0]["email"] = "root@example.com";
  CHECK_THROWS_AS(rbac::load_policy(extra_user.dump()), ParseError);

  auto bad_status = three_role_doc();
  bad_status["users"][0]["status"] = "suspended";
  CHECK_THROWS_AS(rbac::load_policy(bad_status.dump()), ParseError);

  auto bad_secret = three_role_doc();
  bad_secret["users"][0]["totp_secret_b32"] = "not base32 0189";
  CHECK_THROWS_AS(rbac::load_policy(bad_secret.dump()), ParseError);
}

TEST_CASE("dump then load reproduces the store exactly") {
  auto doc = three_role_doc();
  doc["users"][1]["totp_secret_b32"] = "GEZDGNBVGY3TQOJQGEZDGNBVGY3TQOJQ";
  const auto store = rbac::load_policy(doc.dump());
  const auto again = rbac::load_policy(rbac::dump_policy(store));
  CHECK(again == store);
  REQUIRE(again.users.at("alice").second_factor_secret.has_value());
  CHECK(*again.users.at("alice").second_factor_secret == bytes_of("12345678901234567890"));
}

TEST_CASE("check_permission follows the grant table") {
  const auto store = rbac::load_policy(three_role_doc().dump());

  // A Client probing an admin action.
  const auto denied = rbac::check_permission(store, "Client", "modify_config", "qa");
  CHECK_FALSE(denied.permit);
  CHECK(denied.reason == rbac::DenyReason::ActionNotGranted);

  // Wildcard resource grants match any class.
  CHECK(rbac::check_permission(store, "Admin", "modify_config", "qa").permit);
  CHECK(rbac::check_permission(store, "Admin", "read_doc", "sensors").permit);

  // Granted action, wrong resource class.
  const auto wrong_res = rbac::check_permission(store, "User", "read_doc", "sensors");
  CHECK_FALSE(wrong_res.permit);
  CHECK(wrong_res.reason == rbac::DenyReason::ResourceNotGranted);

  // Unknown role is a handled denial, not an error.
  const auto no_role = rbac::check_permission(store, "Operator", "read_doc", "docs");
  CHECK_FALSE(no_role.permit);
  CHECK(no_role.reason == rbac::DenyReason::NoSuchRole);
}

TEST_CASE("deny-by-default over the full cross product") {
  const auto store = rbac::load_policy(three_role_doc().dump());
  const std::vector<std::string> actions = {"modify_config", "read_doc", "query", "predict"};
  const std::vector<std::string> resources = {"docs", "qa", "sensors", "config"};
  for (const auto& [role_name, role] : store.roles) {
    for (const auto& action : actions) {
      for (const auto& resource : resources) {
        const bool granted =
            role.permissions.contains({action, resource}) ||
            role.permissions.contains({action, "*"});
        const auto decision = rbac::check_permission(store, role_name, action, resource);
        CHECK(decision.permit == granted);
        // Same store version, same inputs: identical decision.
        CHECK(rbac::check_permission(store, role_name, action, resource) == decision);
      }
    }
  }
}

TEST_CASE("actions never wildcard") {
  auto doc = three_role_doc();
  doc["roles"][2]["permissions"].push_back({{"action", "*"}, {"resource", "docs"}});
  CHECK_THROWS_AS(rbac::load_policy(doc.dump()), IntegrityError);
}

TEST_CASE("assign_role replaces, never accumulates") {
  auto store = rbac::load_policy(three_role_doc().dump());
  CHECK(store.users.at("bob").role_name == "Client");

  const auto v1 = store.version;
  store = rbac::assign_role(std::move(store), "bob", "User");
  CHECK(store.version == v1 + 1);
  CHECK(store.users.at("bob").role_name == "User");

  // The very next check reflects the new role.
  CHECK(rbac::check_permission(store, store.users.at("bob").role_name, "read_doc", "docs")
            .permit);

  CHECK_THROWS_AS(rbac::assign_role(store, "bob", "Operator"), NoSuchRoleError);
  CHECK_THROWS_AS(rbac::assign_role(store, "nobody", "User"), NoSuchUserError);
}

TEST_CASE("create_role and update_role_perms edit copies with version bumps") {
  auto store = rbac::load_policy(three_role_doc().dump());
  const auto v1 = store.version;

  rbac::Role ops;
  ops.name = "Ops";
  ops.permissions = {{"predict", "sensors"}};
  store = rbac::create_role(std::move(store), ops);
  CHECK(store.version == v1 + 1);
  CHECK(rbac::check_permission(store, "Ops", "predict", "sensors").permit);
  CHECK_THROWS_AS(rbac::create_role(store, rbac::Role{"Ops", {}}), IntegrityError);

  store = rbac::update_role_perms(std::move(store), "Client", {{"upload_doc", "docs"}},
                                  {{"query", "qa"}});
  CHECK(store.version == v1 + 2);
  CHECK(rbac::check_permission(store, "Client", "upload_doc", "docs").permit);
  CHECK_FALSE(rbac::check_permission(store, "Client", "query", "qa").permit);

  CHECK_THROWS_AS(rbac::update_role_perms(store, "Operator", {{"a", "b"}}, {}),
                  NoSuchRoleError);
}

TEST_CASE("set_user_status and upsert_user") {
  auto store = rbac::load_policy(three_role_doc().dump());
  store = rbac::set_user_status(std::move(store), "bob", rbac::UserStatus::Blocked);
  CHECK(store.users.at("bob").status == rbac::UserStatus::Blocked);
  CHECK_THROWS_AS(rbac::set_user_status(store, "nobody", rbac::UserStatus::Active),
                  NoSuchUserError);

  rbac::UserRecord carol;
  carol.username = "carol";
  carol.credential = auth::make_credential("pw", bytes_of("0123456789abcdef"), 1000);
  carol.role_name = "User";
  const auto v = store.version;
  store = rbac::upsert_user(std::move(store), carol);
  CHECK(store.version == v + 1);
  CHECK(store.users.at("carol").role_name == "User");

  carol.role_name = "Client";
  store = rbac::upsert_user(std::move(store), carol);
  CHECK(store.users.at("carol").role_name == "Client");
  CHECK(store.users.size() == 4);

  carol.role_name = "Ghost";
  CHECK_THROWS_AS(rbac::upsert_user(store, carol), IntegrityError);
}

TEST_CASE("adding a grant never flips a permit to deny") {
  auto store = rbac::load_policy(three_role_doc().dump());
  const std::vector<std::string> actions = {"modify_config", "read_doc", "query", "predict"};
  const std::vector<std::string> resources = {"docs", "qa", "sensors", "*"};

  std::vector<std::pair<std::string, std::string>> permitted;
  for (const auto& a : actions) {
    for (const auto& r : resources) {
      if (r == "*") continue;
      if (rbac::check_permission(store, "User", a, r).permit) permitted.emplace_back(a, r);
    }
  }
  const auto grown = rbac::update_role_perms(store, "User", {{"predict", "*"}}, {});
  for (const auto& [a, r] : permitted) {
    CHECK(rbac::check_permission(grown, "User", a, r).permit);
  }
}

TEST_CASE("policy service publishes snapshots atomically") {
  rbac::PolicyService service(rbac::load_policy(three_role_doc().dump()));
  const auto before = service.snapshot();
  const auto v_before = before->version;

  const auto v_after = service.mutate([](const rbac::PolicyStore& store) {
    return rbac::assign_role(store, "bob", "User");
  });
  CHECK(v_after == v_before + 1);

  // The old snapshot is immutable; a fresh one sees the change.
  CHECK(before->users.at("bob").role_name == "Client");
  CHECK(service.snapshot()->users.at("bob").role_name == "User");
}

TEST_CASE("mutate rolls back on exception and rejects non-increments") {
  rbac::PolicyService service(rbac::load_policy(three_role_doc().dump()));
  const auto before = *service.snapshot();

  CHECK_THROWS_AS(service.mutate([](const rbac::PolicyStore& store) {
    return rbac::assign_role(store, "bob", "Operator");  // throws NoSuchRole
  }),
                  NoSuchRoleError);
  CHECK(*service.snapshot() == before);

  // A function that forgets to bump the version is a bug; mutate refuses it.
  CHECK_THROWS_AS(service.mutate([](const rbac::PolicyStore& store) { return store; }),
                  IntegrityError);
  CHECK(*service.snapshot() == before);
}

TEST_CASE("identifier syntax is enforced") {
  CHECK(rbac::valid_identifier("read_doc"));
  CHECK(rbac::valid_identifier("*"));
  CHECK_FALSE(rbac::valid_identifier(""));
  CHECK_FALSE(rbac::valid_identifier("two words"));
  CHECK_FALSE(rbac::valid_identifier("tab\tchar"));
  CHECK_FALSE(rbac::valid_identifier(" lead"));
}

}  // TEST_SUITE
