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

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "agentgate/gateway.hpp"
#include "agentgate/rbac.hpp"

namespace httplib {
class Client;
}

namespace agentgate::harness {

// The in-process gateway failed to start or stopped answering.
struct GatewayUnreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Workload description

enum class AttackKind {
  UnauthorizedAction,            // own low-privilege login, out-of-role request
  CredentialTheft,               // victim's password is known to the attacker
  CredentialTheftWith2faBypass,  // password and authenticator secret both stolen
  InjectionDirective,            // well-formed embedded directive in a query payload
  MalformedDirective,            // directive-like text that does not parse
};

// How the attacking session authenticates. Own uses the attacker's own
// account; the stolen variants use a victim's password, with or
// without the victim's authenticator secret. The second login factor
// stops StolenPassword but not StolenPasswordAndTotp.
enum class CredentialSource { Own, StolenPassword, StolenPasswordAndTotp };

const char* to_string(AttackKind k);
const char* to_string(CredentialSource s);
std::optional<AttackKind> parse_attack_kind(std::string_view s);
std::optional<CredentialSource> parse_credential_source(std::string_view s);

struct AttackCase {
  AttackKind kind = AttackKind::UnauthorizedAction;
  CredentialSource source = CredentialSource::Own;
  std::string actor_role = "Client";  // role whose credentials the session holds
  std::string action;                 // target action; empty picks a seeded default
  std::string resource;               // target resource; empty picks a seeded default
  std::string payload;                // payload template; empty picks a seeded default

  bool operator==(const AttackCase&) const = default;
};

struct WorkloadSpec {
  int sessions = 200;             // total sessions in the security experiment
  int malicious_sessions = 50;    // of which this many run an attack case
  int concurrency = 1000;         // concurrent workers in the performance experiment
  int injection_attempts = 30;    // payload count in the injection experiment
  std::string attack_preset = "reference_mix";  // used when attack_cases is empty
  std::vector<AttackCase> attack_cases;         // explicit mix; overrides the preset
  std::int64_t rng_seed = 1;

  // Tuning knobs with sane defaults; not part of the core workload shape.
  double warmup_seconds = 5.0;        // unmeasured load before the perf measurement
  int perf_sessions_per_worker = 1;   // closed-loop sessions each worker completes
  int fixture_pbkdf2_iterations = 1000;  // credential hardness of fixture accounts

  void validate() const;  // throws IntegrityError
  static WorkloadSpec from_json(std::string_view text);
  static WorkloadSpec from_file(const std::string& path);
  std::string to_json() const;
};

// Expands the spec's preset (or returns its explicit list, padded or
// truncated to the required length) into one AttackCase per malicious
// session / injection attempt. Presets:
//   "unauthorized_only": every case is UnauthorizedAction (security) or
//       an own-credential InjectionDirective (injection).
//   "reference_mix": the mix constructed so the deterministic gateway
//       reproduces the reference block/success counts exactly; for 50
//       malicious sessions that is 44 UnauthorizedAction +
//       5 CredentialTheft + 1 CredentialTheftWith2faBypass, and for 30
//       injection attempts 16 own-credential + 5 stolen-password +
//       1 stolen-password-and-totp well-formed directives plus
//       8 MalformedDirective.
std::vector<AttackCase> security_mix(const WorkloadSpec& spec);
std::vector<AttackCase> injection_mix(const WorkloadSpec& spec);

// ---------------------------------------------------------------------------
// Fixture environment

// Deterministic account and policy fixture: Admin holds every action on
// every resource, User holds a read/predict/query slice, Client holds
// read and query only. All secrets are derived from the username, so
// two runs with the same spec build identical policies.
struct Fixture {
  rbac::PolicyStore policy;
  std::vector<std::string> benign_users;    // mixed User and Client roles
  std::vector<std::string> attacker_users;  // Client role, attacker-owned
  std::vector<std::string> victim_admins;   // Admin role, theft targets
  std::unordered_map<std::string, std::string> passwords;
  std::unordered_map<std::string, enc::Bytes> totp_secrets;

  const std::string& password_of(const std::string& username) const;
  const enc::Bytes& totp_secret_of(const std::string& username) const;
};

Fixture make_fixture(const WorkloadSpec& spec);

// Adversarial payload generator for fuzzing the injection surface:
// emits directive shapes, near-misses, random identifier soup and
// binary-ish garbage, all derived from the given generator.
std::string fuzz_injection_payload(std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Reports

struct LatencyStats {
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double p99_ms = 0.0;
};

struct CaseOutcome {
  AttackCase attack;
  std::string session_user;  // identity the session authenticated as
  bool blocked = false;      // attack objective was not achieved
  std::string detail;
};

struct ExperimentReport {
  std::string experiment;  // "security" | "perf" | "inject"
  gateway::Mode mode = gateway::Mode::RbacOnly;

  int blocked = 0;  // security: attacks stopped, of `total`
  int total = 0;
  double block_rate = 0.0;

  LatencyStats latency;
  double throughput_rps = 0.0;

  int injection_successes = 0;
  int injection_attempts = 0;

  std::vector<CaseOutcome> cases;
  std::vector<std::string> violations;  // embedded invariant check failures

  std::uint64_t requests_issued = 0;  // pipeline requests the run produced
  std::int64_t window_from_us = 0;    // audit window of the run
  std::int64_t window_to_us = 0;

  bool ok() const { return violations.empty(); }
};

// Published evaluation numbers rendered in the report's reference
// column; the reference_mix presets are constructed to reproduce the
// security and injection counts exactly.
struct ReferenceValues {
  int security_blocked = 0;
  int security_total = 0;
  double latency_ms = 0.0;
  double throughput_rps = 0.0;
  int injection_successes = 0;
  int injection_attempts = 0;
};

const ReferenceValues& reference_for(gateway::Mode mode);

enum class ReportFormat { Markdown, Csv };
enum class ReferenceColumn { Paper, None };

// Renders grouped comparison tables (markdown) or one row per
// (mode, metric) (csv). With ReferenceColumn::Paper the published
// numbers appear side by side with deltas.
std::string emit_report(const std::vector<ExperimentReport>& reports, ReportFormat format,
                        ReferenceColumn reference);

struct CsvRow {
  std::string experiment;
  std::string mode;
  std::string metric;
  double value = 0.0;
  std::optional<double> reference;

  bool operator==(const CsvRow&) const = default;
};

// Parses emit_report csv output back into rows; values round-trip
// exactly (shortest-form float encoding).
std::vector<CsvRow> parse_csv_metrics(std::string_view text);

// ---------------------------------------------------------------------------
// Runner

// Owns an in-process gateway (real HTTP listener on an ephemeral port)
// and replays seeded workloads against it over HTTP. The security and
// injection experiments run sessions sequentially so outcomes and the
// audit trail are reproducible; the performance experiment runs
// spec.concurrency closed-loop workers.
class ExperimentRunner {
 public:
  // audit_path, when set, attaches a JSONL file sink to the gateway's
  // audit log for post-run chain verification on disk.
  ExperimentRunner(WorkloadSpec spec, gateway::Mode mode, std::string audit_path = "");
  ~ExperimentRunner();

  ExperimentRunner(const ExperimentRunner&) = delete;
  ExperimentRunner& operator=(const ExperimentRunner&) = delete;

  ExperimentReport run_security();
  ExperimentReport run_performance();
  ExperimentReport run_injection();

  gateway::GatewayService& service() { return *service_; }
  const Fixture& fixture() const { return fixture_; }
  const WorkloadSpec& spec() const { return spec_; }

 private:
  struct SessionOutcome {
    bool achieved = false;  // the session's objective (benign or attack) succeeded
    std::int64_t latency_us = 0;
    std::string detail;
  };

  // Client-side login flow; the second-factor code is computed by the
  // caller (right code, stolen code, or deliberately wrong code).
  std::optional<std::string> acquire_token(httplib::Client& client, const std::string& username,
                                           const std::string& password,
                                           const std::string& second_factor_code,
                                           std::string* detail);
  SessionOutcome run_benign_session(httplib::Client& client, const std::string& username,
                                    std::mt19937_64& rng);
  SessionOutcome run_attack_session(httplib::Client& client, const AttackCase& attack,
                                    const std::string& attacker, const std::string& victim,
                                    std::mt19937_64& rng);

  WorkloadSpec spec_;
  gateway::Mode mode_;
  Fixture fixture_;
  std::unique_ptr<gateway::GatewayService> service_;
  std::atomic<std::uint64_t> requests_issued_{0};
};

}  // namespace agentgate::harness
