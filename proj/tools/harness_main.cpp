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

// Experiment runner front end:
//   harness security|perf|inject --mode none|rbac|rbac2fa
//           [--spec file] [--seed n] [--format md|csv] [--reference paper|none]
// Exits nonzero if any invariant check embedded in the run fails.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "agentgate/harness.hpp"

namespace {

int run_one(const std::string& experiment, const agentgate::harness::WorkloadSpec& spec,
            agentgate::gateway::Mode mode, agentgate::harness::ReportFormat format,
            agentgate::harness::ReferenceColumn reference) {
  agentgate::harness::ExperimentRunner runner(spec, mode);
  agentgate::harness::ExperimentReport report;
  if (experiment == "security") {
    report = runner.run_security();
  } else if (experiment == "perf") {
    report = runner.run_performance();
  } else {
    report = runner.run_injection();
  }
  std::cout << agentgate::harness::emit_report({report}, format, reference);
  if (!report.ok()) {
    std::cerr << "invariant checks failed (" << report.violations.size() << ")\n";
    for (const auto& v : report.violations) std::cerr << "  - " << v << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agentgate experiment harness"};
  app.require_subcommand(1);

  std::string mode_name = "rbac";
  std::string spec_path;
  std::int64_t seed = -1;
  std::string format_name = "md";
  std::string reference_name = "paper";

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode_name, "access mode: none | rbac | rbac2fa");
    cmd->add_option("--spec", spec_path, "workload spec file (JSON)");
    cmd->add_option("--seed", seed, "overrides the spec's rng_seed");
    cmd->add_option("--format", format_name, "report format: md | csv");
    cmd->add_option("--reference", reference_name, "reference column: paper | none");
  };
  auto* security = app.add_subcommand("security", "security-enforcement experiment");
  auto* perf = app.add_subcommand("perf", "latency/throughput experiment");
  auto* inject = app.add_subcommand("inject", "prompt-injection experiment");
  add_common(security);
  add_common(perf);
  add_common(inject);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto mode = agentgate::gateway::parse_mode(mode_name);
    if (!mode) {
      std::cerr << "error: --mode must be none|rbac|rbac2fa\n";
      return 2;
    }
    agentgate::harness::ReportFormat format;
    if (format_name == "md") {
      format = agentgate::harness::ReportFormat::Markdown;
    } else if (format_name == "csv") {
      format = agentgate::harness::ReportFormat::Csv;
    } else {
      std::cerr << "error: --format must be md|csv\n";
      return 2;
    }
    agentgate::harness::ReferenceColumn reference;
    if (reference_name == "paper") {
      reference = agentgate::harness::ReferenceColumn::Paper;
    } else if (reference_name == "none") {
      reference = agentgate::harness::ReferenceColumn::None;
    } else {
      std::cerr << "error: --reference must be paper|none\n";
      return 2;
    }

    agentgate::harness::WorkloadSpec spec;
    if (!spec_path.empty()) spec = agentgate::harness::WorkloadSpec::from_file(spec_path);
    if (seed >= 0) spec.rng_seed = seed;

    std::string experiment = "security";
    if (perf->parsed()) experiment = "perf";
    if (inject->parsed()) experiment = "inject";
    return run_one(experiment, spec, *mode, format, reference);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
