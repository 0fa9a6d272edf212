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

// Microbenchmarks for the hot request-path pieces: permission lookup,
// token issue/validate, audit append, second-factor codes, credential
// hashing, objective evaluation and the exact solver.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "agentgate/audit.hpp"
#include "agentgate/credentials.hpp"
#include "agentgate/crypto.hpp"
#include "agentgate/optimizer.hpp"
#include "agentgate/rbac.hpp"
#include "agentgate/token.hpp"
#include "agentgate/totp.hpp"

namespace {

using namespace agentgate;

enc::Bytes bytes_of(std::string_view s) { return enc::Bytes(s.begin(), s.end()); }

rbac::PolicyStore bench_policy() {
  rbac::PolicyStore store;
  store.version = 1;
  store.roles["Admin"] = {"Admin", {{"modify_config", "*"}, {"read_doc", "*"}, {"query", "*"}}};
  store.roles["User"] = {"User",
                         {{"read_doc", "docs"}, {"upload_doc", "docs"}, {"query", "qa"}}};
  store.roles["Client"] = {"Client", {{"read_doc", "docs"}, {"query", "qa"}}};
  return store;
}

auth::TokenClaims bench_claims() {
  auth::TokenClaims claims;
  claims.sub = "alice";
  claims.role = "User";
  claims.perms = {{"read_doc", "docs"}, {"query", "qa"}};
  claims.iat = 1700000000;
  claims.exp = 1700003600;
  claims.jti = "bench-1";
  return claims;
}

opt::OptimizationInstance bench_instance(int users, int roles, int perms) {
  opt::OptimizationInstance inst;
  for (int u = 0; u < users; ++u) inst.users.push_back("u" + std::to_string(u));
  for (int r = 0; r < roles; ++r) inst.roles.push_back("r" + std::to_string(r));
  for (int p = 0; p < perms; ++p) inst.permissions.push_back("p" + std::to_string(p));
  for (int r = 0; r < roles; ++r) {
    std::vector<int> grant;
    for (int p = r % 2; p < perms; p += 2) grant.push_back(p);
    inst.role_perms.push_back(grant);
    inst.role_cost.push_back(static_cast<double>(grant.size()));
  }
  for (int u = 0; u < users; ++u) {
    std::vector<double> row;
    for (int p = 0; p < perms; ++p) row.push_back(static_cast<double>((u + p) % 5) / 2.0);
    inst.risk.push_back(row);
    inst.gamma.push_back(1.0);
  }
  inst.lambda = 0.5;
  inst.validate();
  return inst;
}

void BM_CheckPermission(benchmark::State& state) {
  const auto store = bench_policy();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rbac::check_permission(store, "User", "read_doc", "docs"));
    benchmark::DoNotOptimize(rbac::check_permission(store, "Client", "modify_config", "qa"));
  }
}
BENCHMARK(BM_CheckPermission);

void BM_TokenIssue(benchmark::State& state) {
  const auto claims = bench_claims();
  for (auto _ : state) {
    benchmark::DoNotOptimize(auth::issue_token(claims, "bench-signing-key"));
  }
}
BENCHMARK(BM_TokenIssue);

void BM_TokenValidate(benchmark::State& state) {
  const auto claims = bench_claims();
  const std::string token = auth::issue_token(claims, "bench-signing-key");
  auth::RevocationList revocations;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        auth::validate_token(token, "bench-signing-key", claims.iat, revocations));
  }
}
BENCHMARK(BM_TokenValidate);

void BM_AuditAppend(benchmark::State& state) {
  audit::AuditLog log;
  audit::RecordInput input;
  input.timestamp = 1700000000000000;
  input.username = "alice";
  input.action = "read_doc";
  input.resource = "docs";
  input.decision = audit::Decision::Permit;
  input.reason = audit::Reason::Permitted;
  input.mode = "rbac";
  input.latency_us = 120;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log.append(input));
  }
}
BENCHMARK(BM_AuditAppend);

void BM_TotpCode(benchmark::State& state) {
  const enc::Bytes secret = bytes_of("12345678901234567890");
  std::int64_t t = 1700000000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(auth::totp_at(secret, t++));
  }
}
BENCHMARK(BM_TotpCode);

void BM_CredentialDerive(benchmark::State& state) {
  const enc::Bytes salt = bytes_of("0123456789abcdef");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        crypto::pbkdf2_hmac_sha256("correct horse battery staple", salt,
                                   static_cast<std::uint32_t>(state.range(0)), 32));
  }
}
BENCHMARK(BM_CredentialDerive)->Arg(1000)->Arg(10000);

void BM_ObjectiveEval(benchmark::State& state) {
  const auto inst = bench_instance(static_cast<int>(state.range(0)), 4, 8);
  const opt::Assignment x(inst.users.size(), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opt::objective(inst, x));
  }
}
BENCHMARK(BM_ObjectiveEval)->Arg(6)->Arg(32);

void BM_SolveExact(benchmark::State& state) {
  const auto inst = bench_instance(static_cast<int>(state.range(0)), 4, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opt::solve_exact(inst));
  }
}
BENCHMARK(BM_SolveExact)->Arg(6)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
