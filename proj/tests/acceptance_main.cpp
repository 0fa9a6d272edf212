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

// Acceptance gate: every release-blocking behavior as one timed
// criterion with a single [PASS]/[FAIL] line. Exits nonzero if any
// criterion fails or overruns its runtime budget.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "agentgate/agents.hpp"
#include "agentgate/audit.hpp"
#include "agentgate/clock.hpp"
#include "agentgate/credentials.hpp"
#include "agentgate/gateway.hpp"
#include "agentgate/harness.hpp"
#include "agentgate/optimizer.hpp"
#include "agentgate/rbac.hpp"
#include "agentgate/token.hpp"
#include "agentgate/totp.hpp"

namespace {

using namespace agentgate;
using gateway::GatewayConfig;
using gateway::GatewayService;
using gateway::InvokeStatus;
using gateway::LoginResult;
using gateway::Mode;
using harness::ExperimentReport;
using harness::ExperimentRunner;
using harness::WorkloadSpec;

using Failures = std::vector<std::string>;

constexpr std::int64_t kT0 = 1700000000;  // fixed epoch for manual-clock rigs
constexpr const char* kKey = "acceptance-signing-key";

enc::Bytes bytes_of(std::string_view s) { return enc::Bytes(s.begin(), s.end()); }

void require(Failures& fails, bool ok, const std::string& what) {
  if (!ok) fails.push_back(what);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// --------------------------------------------------------------------------
// Direct-service fixtures (no HTTP, manual clock)

rbac::UserRecord make_user(const std::string& name, const std::string& role, bool with_totp) {
  rbac::UserRecord user;
  user.username = name;
  user.credential = auth::make_credential("pw-" + name, bytes_of("0123456789abcdef"), 1000);
  if (with_totp) user.second_factor_secret = bytes_of("12345678901234567890");
  user.role_name = role;
  return user;
}

rbac::PolicyStore direct_policy() {
  rbac::PolicyStore store;
  store.version = 1;
  store.roles["Admin"] = {"Admin", {{"modify_config", "*"}, {"read_doc", "*"}, {"query", "qa"}}};
  store.roles["Client"] = {"Client", {{"query", "qa"}}};
  store.users["root"] = make_user("root", "Admin", true);
  store.users["bob"] = make_user("bob", "Client", false);
  store.users["mallory"] = make_user("mallory", "Client", true);
  rbac::validate(store);
  return store;
}

GatewayConfig direct_config(Mode mode) {
  GatewayConfig cfg;
  cfg.mode = mode;
  cfg.signing_key = kKey;
  return cfg;
}

std::size_t count_decisions(const GatewayService& service, audit::Decision d) {
  audit::AuditLog::Filter filter;
  filter.decision = d;
  return service.audit_log().query(filter).size();
}

// --------------------------------------------------------------------------
// Random optimization instances, mirrored from the solver test suite so
// the gate exercises the same distribution (both conventions, both cost
// modes, half-integer weights).

opt::OptimizationInstance random_instance(std::mt19937_64& rng) {
  opt::OptimizationInstance inst;
  const int n_users = 1 + static_cast<int>(rng() % 6);
  const int n_roles = 1 + static_cast<int>(rng() % 4);
  const int n_perms = 1 + static_cast<int>(rng() % 6);
  for (int u = 0; u < n_users; ++u) inst.users.push_back("u" + std::to_string(u));
  for (int r = 0; r < n_roles; ++r) inst.roles.push_back("r" + std::to_string(r));
  for (int p = 0; p < n_perms; ++p) inst.permissions.push_back("p" + std::to_string(p));
  for (int r = 0; r < n_roles; ++r) {
    std::vector<int> perms;
    for (int p = 0; p < n_perms; ++p) {
      if (rng() % 2 == 0) perms.push_back(p);
    }
    inst.role_perms.push_back(perms);
    inst.role_cost.push_back(rng() % 2 == 0 ? static_cast<double>(perms.size())
                                            : static_cast<double>(rng() % 8) / 2.0);
  }
  for (int u = 0; u < n_users; ++u) {
    std::vector<double> row;
    for (int p = 0; p < n_perms; ++p) row.push_back(static_cast<double>(rng() % 9) / 2.0);
    inst.risk.push_back(row);
    inst.gamma.push_back(static_cast<double>(rng() % 5) / 4.0);
  }
  inst.lambda = static_cast<double>(rng() % 5) / 2.0;
  inst.convention = rng() % 2 == 0 ? opt::RiskConvention::GrantedExposure
                                   : opt::RiskConvention::UnauthorizedAttempt;
  inst.cost_mode =
      rng() % 2 == 0 ? opt::CostMode::Static : opt::CostMode::ActiveRoles;
  inst.validate();
  return inst;
}

opt::OptimizationInstance reference_instance() {
  opt::OptimizationInstance inst;
  inst.users = {"u1", "u2"};
  inst.roles = {"r1", "r2"};
  inst.permissions = {"p0", "p1", "p2"};
  inst.role_perms = {{0}, {0, 1, 2}};
  inst.risk = {{1, 5, 1}, {0, 2, 2}};
  inst.role_cost = {1, 3};
  inst.lambda = 1.0;
  inst.gamma = {1, 1};
  inst.convention = opt::RiskConvention::GrantedExposure;
  inst.cost_mode = opt::CostMode::Static;
  inst.validate();
  return inst;
}

// --------------------------------------------------------------------------
// Criteria

// Pure unauthorized-action mix: enforcement blocks every attack, the
// no-enforcement baseline blocks none.
void criterion_unauthorized_mix(Failures& fails) {
  WorkloadSpec spec;
  spec.sessions = 75;
  spec.malicious_sessions = 50;
  spec.attack_preset = "unauthorized_only";
  spec.rng_seed = 42;

  ExperimentRunner rbac(spec, Mode::RbacOnly);
  const ExperimentReport on = rbac.run_security();
  require(fails, on.total == 50, "rbac run total " + std::to_string(on.total) + ", want 50");
  require(fails, on.blocked == 50,
          "rbac blocked " + std::to_string(on.blocked) + "/50, want 50/50");
  require(fails, on.ok(), "rbac run reported invariant violations");

  ExperimentRunner none(spec, Mode::None);
  const ExperimentReport off = none.run_security();
  require(fails, off.total == 50, "none run total " + std::to_string(off.total) + ", want 50");
  require(fails, off.blocked == 0,
          "none blocked " + std::to_string(off.blocked) + "/50, want 0/50");
  require(fails, off.ok(), "none run reported invariant violations");
}

// Reference mixes reproduce the published block/success counts exactly
// and are deterministic under a fixed seed.
void criterion_reference_counts(Failures& fails) {
  WorkloadSpec spec;  // 200 sessions / 50 malicious / 30 injection attempts
  spec.rng_seed = 42;

  const struct {
    Mode mode;
    int security_blocked;
    int injection_successes;
  } expect[] = {
      {Mode::None, 0, 22},
      {Mode::RbacOnly, 44, 6},
      {Mode::RbacPlus2fa, 49, 1},
  };

  for (const auto& e : expect) {
    ExperimentRunner sec_runner(spec, e.mode);
    const ExperimentReport sec = sec_runner.run_security();
    require(fails, sec.total == 50,
            std::string(to_string(e.mode)) + " security total " + std::to_string(sec.total));
    require(fails, sec.blocked == e.security_blocked,
            std::string(to_string(e.mode)) + " security blocked " + std::to_string(sec.blocked) +
                "/50, want " + std::to_string(e.security_blocked) + "/50");
    require(fails, sec.ok(),
            std::string(to_string(e.mode)) + " security run reported violations");

    ExperimentRunner inj_runner(spec, e.mode);
    const ExperimentReport inj = inj_runner.run_injection();
    require(fails, inj.injection_attempts == 30,
            std::string(to_string(e.mode)) + " injection attempts " +
                std::to_string(inj.injection_attempts));
    require(fails, inj.injection_successes == e.injection_successes,
            std::string(to_string(e.mode)) + " injection successes " +
                std::to_string(inj.injection_successes) + "/30, want " +
                std::to_string(e.injection_successes) + "/30");
    require(fails, inj.ok(),
            std::string(to_string(e.mode)) + " injection run reported violations");
  }

  // Determinism: a fresh runner with the same spec reproduces the rbac
  // security run case by case.
  ExperimentRunner first(spec, Mode::RbacOnly);
  const ExperimentReport a = first.run_security();
  ExperimentRunner second(spec, Mode::RbacOnly);
  const ExperimentReport b = second.run_security();
  require(fails, a.blocked == b.blocked, "repeat rbac run changed the blocked count");
  require(fails, a.cases.size() == b.cases.size(), "repeat rbac run changed the case count");
  for (std::size_t i = 0; i < a.cases.size() && i < b.cases.size(); ++i) {
    if (a.cases[i].blocked != b.cases[i].blocked ||
        a.cases[i].session_user != b.cases[i].session_user) {
      fails.push_back("repeat rbac run diverged at case " + std::to_string(i));
      break;
    }
  }
}

// Median latency must not decrease, and throughput must not increase,
// as enforcement layers are added; each ordering must hold in at least
// four of five repeated runs.
void criterion_perf_ordering(Failures& fails) {
  WorkloadSpec spec;
  spec.sessions = 100;
  spec.malicious_sessions = 0;
  spec.concurrency = 1000;
  spec.perf_sessions_per_worker = 3;  // longer measured phase; steadier medians
  spec.warmup_seconds = 0.5;
  spec.rng_seed = 42;

  ExperimentRunner none(spec, Mode::None);
  ExperimentRunner rbac(spec, Mode::RbacOnly);
  ExperimentRunner twofa(spec, Mode::RbacPlus2fa);
  ExperimentRunner* runners[] = {&none, &rbac, &twofa};

  constexpr int kRepeats = 5;
  int latency_ordered = 0;
  int throughput_ordered = 0;
  for (int rep = 0; rep < kRepeats; ++rep) {
    double p50[3] = {0, 0, 0};
    double rps[3] = {0, 0, 0};
    for (int m = 0; m < 3; ++m) {
      const ExperimentReport report = runners[m]->run_performance();
      if (!report.ok()) {
        fails.push_back("perf run rep " + std::to_string(rep) + " mode " +
                        to_string(report.mode) + ": " + report.violations.front());
      }
      p50[m] = report.latency.p50_ms;
      rps[m] = report.throughput_rps;
    }
    if (p50[0] <= p50[1] && p50[1] <= p50[2]) ++latency_ordered;
    if (rps[0] >= rps[1] && rps[1] >= rps[2]) ++throughput_ordered;
    std::printf("    perf rep %d: p50 %s/%s/%s ms, rps %s/%s/%s\n", rep, fmt(p50[0]).c_str(),
                fmt(p50[1]).c_str(), fmt(p50[2]).c_str(), fmt(rps[0]).c_str(),
                fmt(rps[1]).c_str(), fmt(rps[2]).c_str());
  }
  require(fails, latency_ordered >= 4,
          "median latency ordered in " + std::to_string(latency_ordered) + "/5 runs, want >=4");
  require(fails, throughput_ordered >= 4,
          "throughput ordered in " + std::to_string(throughput_ordered) + "/5 runs, want >=4");
}

// Fuzzed injection payloads through a low-privilege token must never
// surface the canary secret.
void criterion_fuzz_no_canary(Failures& fails) {
  auto clock = std::make_shared<ManualClock>(kT0 * 1000000);
  GatewayService service(direct_config(Mode::RbacOnly), direct_policy(), clock);

  const LoginResult login = service.handle_login("bob", "pw-bob");
  require(fails, login.status == LoginResult::Status::TokenIssued, "fixture login failed");
  if (login.status != LoginResult::Status::TokenIssued) return;

  const std::string canary(agents::kCanary);
  std::mt19937_64 rng(20260815);
  int leaks = 0;
  int not_ok = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string payload = harness::fuzz_injection_payload(rng);
    const gateway::AgentResponse res =
        service.handle_invoke({"conversational_qa", "query", "qa", payload}, login.token);
    if (res.status != InvokeStatus::Ok) ++not_ok;
    if (res.body.find(canary) != std::string::npos) ++leaks;
  }
  require(fails, leaks == 0, std::to_string(leaks) + " of 10000 payloads leaked the canary");
  require(fails, not_ok == 0,
          std::to_string(not_ok) + " of 10000 permitted query requests did not return Ok");
}

// Exact solver agrees with brute force on random instances; the pinned
// two-user instance reproduces its objective values bit for bit.
void criterion_solver_exact(Failures& fails) {
  std::mt19937_64 rng(9001);
  for (int i = 0; i < 500; ++i) {
    const auto inst = random_instance(rng);
    const auto exact = opt::solve_exact(inst);
    const auto brute = opt::solve_bruteforce(inst);
    if (exact.objective != brute.objective) {
      fails.push_back("instance " + std::to_string(i) + ": exact J " + fmt(exact.objective) +
                      " != brute J " + fmt(brute.objective));
      break;
    }
    if (exact.assignment != brute.assignment) {
      fails.push_back("instance " + std::to_string(i) + ": assignments differ at equal J");
      break;
    }
  }

  const auto inst = reference_instance();
  const double j = opt::objective(inst, {0, 0});
  require(fails, j == 5.0, "pinned instance J(r1,r1) = " + fmt(j) + ", want 5");
  auto scaled = inst;
  scaled.gamma = {0.5, 1.0};
  const double j_scaled = opt::objective(scaled, {0, 0});
  require(fails, j_scaled == 4.5,
          "pinned instance with gamma (0.5,1) J = " + fmt(j_scaled) + ", want 4.5");
}

// First-order check holds at brute-force optima of static-cost
// instances, and with all user weights zero the objective collapses to
// the pure provisioning cost.
void criterion_stationarity(Failures& fails) {
  std::mt19937_64 rng(9002);
  for (int i = 0; i < 500; ++i) {
    auto inst = random_instance(rng);
    inst.cost_mode = opt::CostMode::Static;
    const auto brute = opt::solve_bruteforce(inst);

    opt::RelaxedAssignment rx;
    rx.x.assign(inst.users.size(), std::vector<double>(inst.roles.size(), 0.0));
    for (std::size_t u = 0; u < inst.users.size(); ++u) {
      rx.x[u][static_cast<std::size_t>(brute.assignment[u])] = 1.0;
    }
    std::vector<double> mu;
    for (std::size_t u = 0; u < inst.users.size(); ++u) {
      double best = opt::role_risk(inst, static_cast<int>(u), 0);
      for (std::size_t r = 1; r < inst.roles.size(); ++r) {
        best = std::min(best, opt::role_risk(inst, static_cast<int>(u),
                                                   static_cast<int>(r)));
      }
      mu.push_back(best);
    }
    if (!opt::stationarity_check(inst, rx, mu, 1e-9)) {
      fails.push_back("stationarity failed at brute optimum of instance " + std::to_string(i));
      break;
    }

    auto zero = inst;
    std::fill(zero.gamma.begin(), zero.gamma.end(), 0.0);
    double cost_sum = 0.0;
    for (const double c : zero.role_cost) cost_sum += c;
    const double j = opt::objective(zero, brute.assignment);
    if (j != zero.lambda * cost_sum) {
      fails.push_back("zero-gamma objective " + fmt(j) + " != lambda*cost " +
                      fmt(zero.lambda * cost_sum) + " on instance " + std::to_string(i));
      break;
    }
  }
}

// Token suite: byte-stable issuance, strict expiry, tamper rejection,
// revocation.
void criterion_token_suite(Failures& fails) {
  const std::string key = "test-key-0001";
  auth::RevocationList no_revocations;

  auth::TokenClaims claims;
  claims.sub = "alice";
  claims.role = "User";
  claims.perms = {{"query", "*"}, {"read_doc", "docs"}};
  claims.iat = kT0;
  claims.exp = kT0 + 3600;
  claims.jti = "round-trip-1";
  const std::string token = auth::issue_token(claims, key);
  const auto round = auth::validate_token(token, key, kT0, no_revocations);
  require(fails, round.ok(), "round-trip validation failed");
  require(fails, round.claims.has_value() && *round.claims == claims,
          "round-trip claims do not match issuance");

  auth::TokenClaims golden_claims;
  golden_claims.sub = "alice";
  golden_claims.role = "User";
  golden_claims.iat = 0;
  golden_claims.exp = 3600;
  golden_claims.jti = "t1";
  const std::string golden = auth::issue_token(golden_claims, key);
  const std::string want =
      "eyJhbGciOiJIUzI1NiIsInR5cCI6IkpXVCJ9."
      "eyJleHAiOjM2MDAsImlhdCI6MCwianRpIjoidDEiLCJwZXJtcyI6W10sInJvbGUiOiJVc2VyIiwic3ViIjoiYW"
      "xpY2UifQ.qnwCfiOtNvjkGWBNBc2ZPX5BEeLpkEXtdJc2_4nryZc";
  require(fails, golden == want, "golden token bytes changed");

  require(fails, auth::validate_token(token, key, claims.exp - 1, no_revocations).ok(),
          "token one second before expiry rejected");
  const auto at_exp = auth::validate_token(token, key, claims.exp, no_revocations);
  require(fails, at_exp.error == auth::TokenError::Expired,
          "token at exact expiry second not reported Expired");
  require(fails, at_exp.claims.has_value() && at_exp.claims->sub == "alice",
          "expired result lost its claims");

  std::mt19937_64 rng(4242);
  int accepted_tampers = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string bent = token;
    const std::size_t pos = rng() % bent.size();
    bent[pos] = static_cast<char>(bent[pos] ^ (1u << (rng() % 8)));
    if (bent == token) continue;
    if (auth::validate_token(bent, key, kT0, no_revocations).ok()) ++accepted_tampers;
  }
  require(fails, accepted_tampers == 0,
          std::to_string(accepted_tampers) + " of 1000 single-bit tampers were accepted");

  auth::RevocationList revocations;
  revocations.revoke(claims.jti);
  const auto revoked = auth::validate_token(token, key, kT0, revocations);
  require(fails, revoked.error == auth::TokenError::Revoked, "revoked jti not rejected");
  require(fails, revoked.claims.has_value(), "revoked result lost its claims");
}

// After a full experiment the audit chain verifies in memory and on
// disk, a one-byte corruption is pinpointed at the right sequence
// number, and the log holds exactly one record per pipeline request.
void criterion_audit_chain(Failures& fails) {
  namespace fs = std::filesystem;
  const std::string path =
      (fs::temp_directory_path() / "agentgate_acceptance_audit.jsonl").string();
  std::error_code ec;
  fs::remove(path, ec);

  WorkloadSpec spec;
  spec.sessions = 450;
  spec.malicious_sessions = 50;
  spec.rng_seed = 42;

  std::vector<audit::AuditRecord> records;
  std::uint64_t requests_issued = 0;
  {
    ExperimentRunner runner(spec, Mode::RbacPlus2fa, path);
    const ExperimentReport report = runner.run_security();
    require(fails, report.ok(), "security run reported violations");
    records = runner.service().audit_log().records();
    requests_issued = report.requests_issued;
  }

  require(fails, records.size() >= 1300,
          "log holds " + std::to_string(records.size()) + " records, want >= 1300");
  const auto verdict = audit::verify_chain(records);
  require(fails, verdict.ok, "in-memory chain verification failed: " + verdict.detail);
  const auto on_disk = audit::verify_log_file(path, audit::LogFormat::Jsonl);
  require(fails, on_disk.ok, "on-disk chain verification failed: " + on_disk.detail);

  std::size_t request_records = 0;
  for (const auto& rec : records) {
    if (audit::is_request_decision(rec.decision)) ++request_records;
  }
  require(fails, request_records == requests_issued,
          "log holds " + std::to_string(request_records) + " request records for " +
              std::to_string(requests_issued) + " pipeline requests");

  // Flip one byte of record 42's username on disk; verification must
  // point at sequence 42.
  std::vector<std::string> lines;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  require(fails, lines.size() == records.size(),
          "file line count does not match the in-memory record count");
  if (lines.size() > 41) {
    const std::size_t pos = lines[41].find("\"username\":\"");
    require(fails, pos != std::string::npos, "record 42 has no username field on disk");
    if (pos != std::string::npos) {
      char& c = lines[41][pos + 12];
      c = c == 'Z' ? 'Y' : 'Z';
      std::ofstream out(path, std::ios::trunc);
      for (const auto& l : lines) out << l << '\n';
      out.close();
      const auto corrupted = audit::verify_log_file(path, audit::LogFormat::Jsonl);
      require(fails, !corrupted.ok, "corrupted log still verifies");
      require(fails, corrupted.first_bad_seq == 42,
              "corruption reported at seq " + std::to_string(corrupted.first_bad_seq) +
                  ", want 42");
    }
  }
  fs::remove(path, ec);
}

// Repeated authentication failures escalate: alert on the third
// windowed failure, block on the tenth; a blocked account's live
// tokens are revoked and every later request is rejected.
void criterion_escalation(Failures& fails) {
  auto clock = std::make_shared<ManualClock>(kT0 * 1000000);
  GatewayService service(direct_config(Mode::RbacOnly), direct_policy(), clock);

  const LoginResult first = service.handle_login("mallory", "pw-mallory");
  require(fails, first.status == LoginResult::Status::TokenIssued, "pre-block login failed");
  const std::string live_token = first.token;

  for (int i = 1; i <= 10; ++i) {
    clock->advance_seconds(1);
    const LoginResult bad = service.handle_login("mallory", "wrong-password");
    require(fails, bad.status == LoginResult::Status::InvalidCredentials,
            "failure " + std::to_string(i) + " not rejected as bad credentials");
    const std::size_t alerts = count_decisions(service, audit::Decision::Alert);
    const std::size_t blocks = count_decisions(service, audit::Decision::Block);
    if (i < 3) {
      require(fails, alerts == 0 && blocks == 0,
              "escalated before the third failure (i=" + std::to_string(i) + ")");
    } else if (i == 3) {
      require(fails, alerts == 1 && blocks == 0, "third windowed failure did not alert");
    } else if (i < 10) {
      require(fails, blocks == 0,
              "blocked before the tenth failure (i=" + std::to_string(i) + ")");
    } else {
      require(fails, blocks == 1, "tenth windowed failure did not block");
    }
  }
  const auto snapshot = service.policy_snapshot();
  require(fails,
          snapshot->users.at("mallory").status == rbac::UserStatus::Blocked,
          "account not blocked after the tenth failure");

  const LoginResult after = service.handle_login("mallory", "pw-mallory");
  require(fails, after.status == LoginResult::Status::UserBlocked,
          "correct password accepted after block");

  const auto invoke = service.handle_invoke({"conversational_qa", "query", "qa", ""}, live_token);
  require(fails, invoke.status == InvokeStatus::AuthError,
          "pre-block token still usable after block");
  const auto validation =
      auth::validate_token(live_token, kKey, clock->now_seconds(), service.revocations());
  require(fails, validation.error == auth::TokenError::Revoked,
          "pre-block token not revoked by the block");
}

// An admin grant takes effect for requests already holding a token:
// deny, grant, permit with the same bearer.
void criterion_policy_propagation(Failures& fails) {
  auto clock = std::make_shared<ManualClock>(kT0 * 1000000);
  GatewayService service(direct_config(Mode::RbacOnly), direct_policy(), clock);

  const LoginResult bob = service.handle_login("bob", "pw-bob");
  const LoginResult root = service.handle_login("root", "pw-root");
  require(fails, bob.status == LoginResult::Status::TokenIssued, "client login failed");
  require(fails, root.status == LoginResult::Status::TokenIssued, "admin login failed");

  const auto denied =
      service.handle_invoke({"doc_retrieval", "upload_doc", "docs", "pump 7 readings"},
                            bob.token);
  require(fails, denied.status == InvokeStatus::Denied,
          "upload permitted before the grant");

  const auto grant = service.handle_admin(
      "update_role_perms",
      R"({"role":"Client","add":[{"action":"upload_doc","resource":"docs"}]})", root.token);
  require(fails, grant.http_status == 200,
          "grant returned http " + std::to_string(grant.http_status));

  const auto permitted =
      service.handle_invoke({"doc_retrieval", "upload_doc", "docs", "pump 7 readings"},
                            bob.token);
  require(fails, permitted.status == InvokeStatus::Ok,
          "upload still denied after the grant with the same token");
  require(fails, permitted.body.find("stored document under 'docs'") != std::string::npos,
          "permitted upload did not reach the agent");
}

struct Criterion {
  const char* name;
  double budget_seconds;
  void (*run)(Failures&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"pure unauthorized mix: rbac blocks 50/50, no enforcement blocks 0/50", 30.0,
       criterion_unauthorized_mix},
      {"reference mixes reproduce published counts deterministically", 60.0,
       criterion_reference_counts},
      {"latency and throughput order none <= rbac <= rbac2fa across 5 runs", 300.0,
       criterion_perf_ordering},
      {"10000 fuzzed payloads never leak the canary via a client token", 120.0,
       criterion_fuzz_no_canary},
      {"exact solver matches brute force on 500 random instances", 60.0,
       criterion_solver_exact},
      {"stationarity holds at brute optima; zero-weight objective is pure cost", 60.0,
       criterion_stationarity},
      {"token round-trip, golden bytes, strict expiry, tamper and revocation", 30.0,
       criterion_token_suite},
      {"audit chain verifies end to end and pinpoints corruption", 120.0,
       criterion_audit_chain},
      {"windowed failures alert at 3 and block at 10 with token revocation", 30.0,
       criterion_escalation},
      {"admin grant reaches in-flight tokens: deny, grant, permit", 30.0,
       criterion_policy_propagation},
  };

  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Failures fails;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(fails);
    } catch (const std::exception& e) {
      fails.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > c.budget_seconds) {
      fails.push_back("runtime " + fmt(elapsed) + "s exceeds budget " +
                      fmt(c.budget_seconds) + "s");
    }
    if (fails.empty()) {
      std::printf("[PASS] %02d %s (%.1fs)\n", index, c.name, elapsed);
    } else {
      ++failed;
      std::printf("[FAIL] %02d %s (%.1fs)\n", index, c.name, elapsed);
      for (const auto& f : fails) std::printf("       - %s\n", f.c_str());
    }
    std::fflush(stdout);
  }

  std::printf("%d of %d criteria passed\n",
              static_cast<int>(std::size(criteria)) - failed,
              static_cast<int>(std::size(criteria)));
  return failed == 0 ? 0 : 1;
}
