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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "agentgate/agents.hpp"
#include "agentgate/errors.hpp"
#include "agentgate/harness.hpp"

using namespace agentgate;
using harness::AttackCase;
using harness::AttackKind;
using harness::CredentialSource;
using harness::ExperimentReport;
using harness::WorkloadSpec;

namespace {

int count_kind(const std::vector<AttackCase>& mix, AttackKind kind) {
  return static_cast<int>(std::count_if(
      mix.begin(), mix.end(), [kind](const AttackCase& c) { return c.kind == kind; }));
}

int count_source(const std::vector<AttackCase>& mix, CredentialSource source) {
  return static_cast<int>(std::count_if(mix.begin(), mix.end(), [source](const AttackCase& c) {
    return c.source == source;
  }));
}

ExperimentReport security_report() {
  ExperimentReport r;
  r.experiment = "security";
  r.mode = gateway::Mode::RbacOnly;
  r.blocked = 44;
  r.total = 50;
  r.block_rate = 0.88;
  return r;
}

ExperimentReport perf_report() {
  ExperimentReport r;
  r.experiment = "perf";
  r.mode = gateway::Mode::None;
  r.latency = {12.5, 11.0, 20.0, 30.0};
  r.throughput_rps = 1234.5;
  return r;
}

ExperimentReport inject_report() {
  ExperimentReport r;
  r.experiment = "inject";
  r.mode = gateway::Mode::RbacPlus2fa;
  r.injection_successes = 1;
  r.injection_attempts = 30;
  return r;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("attack kinds and credential sources round-trip by name") {
  for (auto kind : {AttackKind::UnauthorizedAction, AttackKind::CredentialTheft,
                    AttackKind::CredentialTheftWith2faBypass, AttackKind::InjectionDirective,
                    AttackKind::MalformedDirective}) {
    const auto parsed = harness::parse_attack_kind(harness::to_string(kind));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == kind);
  }
  for (auto source : {CredentialSource::Own, CredentialSource::StolenPassword,
                      CredentialSource::StolenPasswordAndTotp}) {
    const auto parsed = harness::parse_credential_source(harness::to_string(source));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == source);
  }
  CHECK_FALSE(harness::parse_attack_kind("phishing").has_value());
  CHECK_FALSE(harness::parse_credential_source("borrowed").has_value());
}

TEST_CASE("workload specs round-trip through json") {
  WorkloadSpec spec;
  spec.sessions = 120;
  spec.malicious_sessions = 30;
  spec.concurrency = 64;
  spec.injection_attempts = 12;
  spec.rng_seed = 20260815;
  spec.warmup_seconds = 0.25;
  spec.perf_sessions_per_worker = 3;

  AttackCase custom;
  custom.kind = AttackKind::CredentialTheft;
  custom.source = CredentialSource::StolenPassword;
  custom.actor_role = "Admin";
  custom.action = "modify_config";
  custom.resource = "qa";
  spec.attack_cases.push_back(custom);

  const auto parsed = WorkloadSpec::from_json(spec.to_json());
  CHECK(parsed.sessions == spec.sessions);
  CHECK(parsed.malicious_sessions == spec.malicious_sessions);
  CHECK(parsed.concurrency == spec.concurrency);
  CHECK(parsed.injection_attempts == spec.injection_attempts);
  CHECK(parsed.rng_seed == spec.rng_seed);
  CHECK(parsed.warmup_seconds == spec.warmup_seconds);
  CHECK(parsed.perf_sessions_per_worker == spec.perf_sessions_per_worker);
  CHECK(parsed.attack_cases == spec.attack_cases);

  const auto defaults = WorkloadSpec::from_json("{}");
  CHECK(defaults.sessions == 200);
  CHECK(defaults.malicious_sessions == 50);
  CHECK(defaults.concurrency == 1000);
  CHECK(defaults.injection_attempts == 30);
  CHECK(defaults.attack_preset == "reference_mix");

  const auto preset = WorkloadSpec::from_json(R"({"attack_mix": "unauthorized_only"})");
  CHECK(preset.attack_preset == "unauthorized_only");
  CHECK(preset.attack_cases.empty());

  // A theft kind without an explicit source implies the stolen one.
  const auto implied = WorkloadSpec::from_json(
      R"({"attack_mix": [{"kind": "credential_theft_2fa_bypass"}]})");
  REQUIRE(implied.attack_cases.size() == 1);
  CHECK(implied.attack_cases[0].source == CredentialSource::StolenPasswordAndTotp);
}

TEST_CASE("workload parsing is strict") {
  CHECK_THROWS_AS(WorkloadSpec::from_json("not json"), ParseError);
  CHECK_THROWS_AS(WorkloadSpec::from_json(R"({"session_count": 10})"), ParseError);
  CHECK_THROWS_AS(WorkloadSpec::from_json(R"({"attack_mix": 7})"), ParseError);
  CHECK_THROWS_AS(WorkloadSpec::from_json(R"({"attack_mix": []})"), ParseError);
  CHECK_THROWS_AS(WorkloadSpec::from_json(R"({"attack_mix": [{"kind": "novel"}]})"), ParseError);
  CHECK_THROWS_AS(
      WorkloadSpec::from_json(R"({"attack_mix": [{"kind": "credential_theft", "armor": 1}]})"),
      ParseError);
}

TEST_CASE("workload validation rejects impossible shapes") {
  WorkloadSpec spec;
  CHECK_NOTHROW(spec.validate());

  auto bad = spec;
  bad.malicious_sessions = bad.sessions + 1;
  CHECK_THROWS_AS(bad.validate(), IntegrityError);
  bad = spec;
  bad.concurrency = -1;
  CHECK_THROWS_AS(bad.validate(), IntegrityError);
  bad = spec;
  bad.warmup_seconds = -0.5;
  CHECK_THROWS_AS(bad.validate(), IntegrityError);
  bad = spec;
  bad.perf_sessions_per_worker = 0;
  CHECK_THROWS_AS(bad.validate(), IntegrityError);
  bad = spec;
  bad.fixture_pbkdf2_iterations = 999;  // below the credential floor
  CHECK_THROWS_AS(bad.validate(), IntegrityError);
  bad = spec;
  bad.attack_preset = "reference_mix_v2";
  CHECK_THROWS_AS(bad.validate(), IntegrityError);
}

TEST_CASE("the security reference mix reproduces the published split") {
  WorkloadSpec spec;  // 50 malicious sessions
  const auto mix = harness::security_mix(spec);
  REQUIRE(mix.size() == 50);
  CHECK(count_kind(mix, AttackKind::UnauthorizedAction) == 44);
  CHECK(count_kind(mix, AttackKind::CredentialTheft) == 5);
  CHECK(count_kind(mix, AttackKind::CredentialTheftWith2faBypass) == 1);
  CHECK(count_source(mix, CredentialSource::Own) == 44);
  CHECK(count_source(mix, CredentialSource::StolenPassword) == 5);
  CHECK(count_source(mix, CredentialSource::StolenPasswordAndTotp) == 1);

  // The split scales: at 10 sessions the 12% theft share rounds to one
  // case, which is the authenticator-bypass one.
  spec.malicious_sessions = 10;
  spec.sessions = 10;
  const auto small = harness::security_mix(spec);
  REQUIRE(small.size() == 10);
  CHECK(count_kind(small, AttackKind::UnauthorizedAction) == 9);
  CHECK(count_kind(small, AttackKind::CredentialTheftWith2faBypass) == 1);

  spec.malicious_sessions = 0;
  spec.sessions = 0;
  CHECK(harness::security_mix(spec).empty());
}

TEST_CASE("the injection reference mix reproduces the published split") {
  WorkloadSpec spec;  // 30 attempts
  const auto mix = harness::injection_mix(spec);
  REQUIRE(mix.size() == 30);
  CHECK(count_kind(mix, AttackKind::MalformedDirective) == 8);
  CHECK(count_kind(mix, AttackKind::InjectionDirective) == 22);
  CHECK(count_source(mix, CredentialSource::Own) == 24);  // 16 well-formed + 8 malformed
  CHECK(count_source(mix, CredentialSource::StolenPassword) == 5);
  CHECK(count_source(mix, CredentialSource::StolenPasswordAndTotp) == 1);

  spec.injection_attempts = 4;
  const auto small = harness::injection_mix(spec);
  REQUIRE(small.size() == 4);
  CHECK(count_kind(small, AttackKind::MalformedDirective) == 1);
  CHECK(count_source(small, CredentialSource::StolenPasswordAndTotp) == 1);
}

TEST_CASE("presets and explicit case lists expand as documented") {
  WorkloadSpec spec;
  spec.attack_preset = "unauthorized_only";
  const auto security = harness::security_mix(spec);
  CHECK(count_kind(security, AttackKind::UnauthorizedAction) == 50);
  const auto injection = harness::injection_mix(spec);
  CHECK(count_kind(injection, AttackKind::InjectionDirective) == 30);
  CHECK(count_source(injection, CredentialSource::Own) == 30);

  AttackCase a;
  a.kind = AttackKind::CredentialTheft;
  a.source = CredentialSource::StolenPassword;
  AttackCase b;
  b.kind = AttackKind::UnauthorizedAction;
  spec.attack_cases = {a, b};
  spec.malicious_sessions = 5;
  const auto cycled = harness::security_mix(spec);
  REQUIRE(cycled.size() == 5);
  CHECK(cycled[0] == a);
  CHECK(cycled[1] == b);
  CHECK(cycled[2] == a);
  CHECK(cycled[4] == a);
}

TEST_CASE("the fixture is deterministic and satisfies the role contract") {
  WorkloadSpec spec;
  const auto fx1 = harness::make_fixture(spec);
  const auto fx2 = harness::make_fixture(spec);
  CHECK(fx1.policy == fx2.policy);
  CHECK(fx1.benign_users == fx2.benign_users);
  CHECK(fx1.attacker_users == fx2.attacker_users);
  CHECK(fx1.victim_admins == fx2.victim_admins);

  CHECK(fx1.policy.version == 1);
  CHECK_NOTHROW(rbac::validate(fx1.policy));
  REQUIRE(fx1.policy.roles.contains("Admin"));
  REQUIRE(fx1.policy.roles.contains("User"));
  REQUIRE(fx1.policy.roles.contains("Client"));

  // 200 total / 50 malicious: 20 benign accounts (capped), enough
  // attackers to stay under the block threshold, 6 theft victims.
  CHECK(fx1.benign_users.size() == 20);
  CHECK(fx1.attacker_users.size() >= 10);
  CHECK(fx1.victim_admins.size() >= 6);

  for (const auto& name : fx1.attacker_users) {
    CHECK(fx1.policy.users.at(name).role_name == "Client");
  }
  for (const auto& name : fx1.victim_admins) {
    CHECK(fx1.policy.users.at(name).role_name == "Admin");
  }
  CHECK(rbac::check_permission(fx1.policy, "Client", "modify_config", "qa").permit == false);
  CHECK(rbac::check_permission(fx1.policy, "Admin", "modify_config", "qa").permit == true);
  CHECK(rbac::check_permission(fx1.policy, "Client", "query", "qa").permit == true);

  const auto& attacker = fx1.attacker_users.front();
  CHECK(fx1.password_of(attacker) == "pw-" + attacker);
  CHECK(fx1.totp_secret_of(attacker).size() == 20);
  CHECK_THROWS_AS(fx1.password_of("nobody"), NoSuchUserError);
  CHECK_THROWS_AS(fx1.totp_secret_of("nobody"), NoSuchUserError);
}

TEST_CASE("payload fuzzing is seeded and covers both surface shapes") {
  std::mt19937_64 a(77), b(77);
  for (int i = 0; i < 200; ++i) {
    CHECK(harness::fuzz_injection_payload(a) == harness::fuzz_injection_payload(b));
  }

  std::mt19937_64 rng(20260815);
  int parses = 0, rejects = 0;
  for (int i = 0; i < 400; ++i) {
    const auto payload = harness::fuzz_injection_payload(rng);
    CHECK_FALSE(payload.empty());
    if (agents::parse_directive(payload)) {
      ++parses;
    } else {
      ++rejects;
    }
  }
  // The generator must exercise the parser both ways.
  CHECK(parses > 50);
  CHECK(rejects > 50);
}

TEST_CASE("published reference values are pinned per mode") {
  const auto& none = harness::reference_for(gateway::Mode::None);
  CHECK(none.security_blocked == 0);
  CHECK(none.security_total == 50);
  CHECK(none.latency_ms == 32.0);
  CHECK(none.throughput_rps == 1240.0);
  CHECK(none.injection_successes == 22);
  CHECK(none.injection_attempts == 30);

  const auto& rbac = harness::reference_for(gateway::Mode::RbacOnly);
  CHECK(rbac.security_blocked == 44);
  CHECK(rbac.latency_ms == 41.0);
  CHECK(rbac.throughput_rps == 1185.0);
  CHECK(rbac.injection_successes == 6);

  const auto& rbac2fa = harness::reference_for(gateway::Mode::RbacPlus2fa);
  CHECK(rbac2fa.security_blocked == 49);
  CHECK(rbac2fa.latency_ms == 55.0);
  CHECK(rbac2fa.throughput_rps == 1100.0);
  CHECK(rbac2fa.injection_successes == 1);
}

TEST_CASE("markdown reports group by experiment and annotate references") {
  const std::vector<ExperimentReport> reports = {security_report(), perf_report(),
                                                 inject_report()};
  const auto md = harness::emit_report(reports, harness::ReportFormat::Markdown,
                                       harness::ReferenceColumn::Paper);
  CHECK(md.rfind("# Experiment Report\n", 0) == 0);
  CHECK(md.find("## Security Enforcement") != std::string::npos);
  CHECK(md.find("## Performance") != std::string::npos);
  CHECK(md.find("## Prompt Injection") != std::string::npos);
  CHECK(md.find("| rbac | 44/50 | 88.0% | 88.0% | +0.0 |") != std::string::npos);
  CHECK(md.find("| rbac2fa | 1/30 |") != std::string::npos);
  CHECK(md.find("Reference Rate") != std::string::npos);
  CHECK(md.find("published evaluation results") != std::string::npos);

  const auto bare = harness::emit_report(reports, harness::ReportFormat::Markdown,
                                         harness::ReferenceColumn::None);
  CHECK(bare.find("Reference Rate") == std::string::npos);
  CHECK(bare.find("published evaluation results") == std::string::npos);

  CHECK(harness::emit_report({}, harness::ReportFormat::Markdown,
                             harness::ReferenceColumn::Paper) == "# Experiment Report\n\n");
}

TEST_CASE("invariant violations surface in the markdown report") {
  auto report = security_report();
  report.violations.push_back("audit cross-check: blocked=44 but observed=43");
  const auto md = harness::emit_report({report}, harness::ReportFormat::Markdown,
                                       harness::ReferenceColumn::None);
  CHECK(md.find("## Invariant Violations") != std::string::npos);
  CHECK(md.find("- [security/rbac] audit cross-check") != std::string::npos);
  CHECK_FALSE(report.ok());
  CHECK(security_report().ok());
}

TEST_CASE("csv reports round-trip through the parser") {
  const std::vector<ExperimentReport> reports = {security_report(), perf_report(),
                                                 inject_report()};
  const auto csv = harness::emit_report(reports, harness::ReportFormat::Csv,
                                        harness::ReferenceColumn::Paper);
  CHECK(csv.rfind("experiment,mode,metric,value,reference\n", 0) == 0);

  const auto rows = harness::parse_csv_metrics(csv);
  REQUIRE(rows.size() == 11);  // 3 security + 5 perf + 3 inject
  CHECK(rows[0] == harness::CsvRow{"security", "rbac", "blocked", 44.0, 44.0});
  CHECK(rows[2].metric == "block_rate");
  CHECK(rows[2].value == 0.88);
  CHECK(rows[3] == harness::CsvRow{"perf", "none", "mean_ms", 12.5, 32.0});
  CHECK_FALSE(rows[4].reference.has_value());  // percentiles have no reference
  CHECK(rows[7] == harness::CsvRow{"perf", "none", "throughput_rps", 1234.5, 1240.0});
  CHECK(rows[8] == harness::CsvRow{"inject", "rbac2fa", "successes", 1.0, 1.0});

  // Without the reference column every reference field is empty.
  const auto blank = harness::parse_csv_metrics(harness::emit_report(
      reports, harness::ReportFormat::Csv, harness::ReferenceColumn::None));
  for (const auto& row : blank) CHECK_FALSE(row.reference.has_value());

  // Shortest-form floats survive the trip bit for bit.
  auto tricky = perf_report();
  tricky.throughput_rps = 1234.5678901234567;
  const auto reparsed = harness::parse_csv_metrics(harness::emit_report(
      {tricky}, harness::ReportFormat::Csv, harness::ReferenceColumn::None));
  CHECK(reparsed[4].value == 1234.5678901234567);

  CHECK_THROWS_AS(harness::parse_csv_metrics("h\na,b,c\n"), ParseError);
  CHECK_THROWS_AS(harness::parse_csv_metrics("h\na,b,c,notafloat,\n"), ParseError);
}

TEST_CASE("a small security run blocks everything under rbac, nothing without") {
  WorkloadSpec spec;
  spec.sessions = 10;
  spec.malicious_sessions = 5;
  spec.attack_preset = "unauthorized_only";
  spec.rng_seed = 7;

  harness::ExperimentRunner rbac(spec, gateway::Mode::RbacOnly);
  const auto guarded = rbac.run_security();
  CHECK(guarded.ok());
  CHECK(guarded.blocked == 5);
  CHECK(guarded.total == 5);
  CHECK(guarded.block_rate == 1.0);
  CHECK(guarded.requests_issued > 0);
  CHECK(guarded.cases.size() == 5);

  // Same spec, fresh runner: identical outcome sequence.
  harness::ExperimentRunner again(spec, gateway::Mode::RbacOnly);
  const auto repeat = again.run_security();
  REQUIRE(repeat.cases.size() == guarded.cases.size());
  for (std::size_t i = 0; i < repeat.cases.size(); ++i) {
    CHECK(repeat.cases[i].blocked == guarded.cases[i].blocked);
    CHECK(repeat.cases[i].session_user == guarded.cases[i].session_user);
  }

  harness::ExperimentRunner open(spec, gateway::Mode::None);
  const auto unguarded = open.run_security();
  CHECK(unguarded.ok());
  CHECK(unguarded.blocked == 0);
  CHECK(unguarded.total == 5);
}

TEST_CASE("a small injection run is contained by rbac and open without it") {
  WorkloadSpec spec;
  spec.sessions = 4;
  spec.malicious_sessions = 0;
  spec.injection_attempts = 4;
  spec.attack_preset = "unauthorized_only";
  spec.rng_seed = 11;

  harness::ExperimentRunner rbac(spec, gateway::Mode::RbacOnly);
  const auto contained = rbac.run_injection();
  CHECK(contained.ok());
  CHECK(contained.injection_attempts == 4);
  CHECK(contained.injection_successes == 0);

  harness::ExperimentRunner open(spec, gateway::Mode::None);
  const auto leaked = open.run_injection();
  CHECK(leaked.ok());
  CHECK(leaked.injection_successes == 4);
}

TEST_CASE("a small performance run yields coherent statistics") {
  WorkloadSpec spec;
  spec.sessions = 4;
  spec.malicious_sessions = 0;
  spec.concurrency = 2;
  spec.perf_sessions_per_worker = 2;
  spec.warmup_seconds = 0.0;
  spec.rng_seed = 3;

  harness::ExperimentRunner runner(spec, gateway::Mode::RbacOnly);
  const auto report = runner.run_performance();
  CHECK(report.ok());
  CHECK(report.throughput_rps > 0.0);
  CHECK(report.latency.p50_ms > 0.0);
  CHECK(report.latency.p50_ms <= report.latency.p95_ms);
  CHECK(report.latency.p95_ms <= report.latency.p99_ms);
  CHECK(report.requests_issued >= 4);  // at least one request per session

  spec.concurrency = 0;
  harness::ExperimentRunner idle(spec, gateway::Mode::RbacOnly);
  const auto empty = idle.run_performance();
  CHECK(empty.ok());
  CHECK(empty.throughput_rps == 0.0);
  CHECK(empty.latency.mean_ms == 0.0);
  CHECK(empty.requests_issued == 0);
}

}  // TEST_SUITE
