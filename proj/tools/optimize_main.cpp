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

// Role-assignment optimizer front end.
//   optimize solve <instance.json>       exact solver
//   optimize oracle <instance.json>      exhaustive reference solver
//   optimize verify-kkt <instance.json>  stationarity check at the optimum

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agentgate/optimizer.hpp"

namespace {

using agentgate::opt::OptimizationInstance;
using agentgate::opt::SolveResult;

void print_solution(const OptimizationInstance& inst, const SolveResult& result) {
  for (std::size_t i = 0; i < result.assignment.size(); ++i) {
    std::printf("%s -> %s\n", inst.users[i].c_str(),
                inst.roles[static_cast<std::size_t>(result.assignment[i])].c_str());
  }
  std::printf("J = %.17g\n", result.objective);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"role-assignment optimizer"};
  app.require_subcommand(1);

  std::string instance_path;
  double tol = 1e-9;

  auto* solve = app.add_subcommand("solve", "minimize J(x) exactly");
  solve->add_option("instance", instance_path, "instance file (JSON)")->required();

  auto* oracle = app.add_subcommand("oracle", "exhaustive reference minimizer");
  oracle->add_option("instance", instance_path, "instance file (JSON)")->required();

  auto* kkt = app.add_subcommand("verify-kkt",
                                 "check first-order conditions at the exact optimum");
  kkt->add_option("instance", instance_path, "instance file (JSON)")->required();
  kkt->add_option("--tol", tol, "comparison tolerance (default 1e-9)");

  CLI11_PARSE(app, argc, argv);

  try {
    const OptimizationInstance inst = OptimizationInstance::from_file(instance_path);

    if (solve->parsed()) {
      print_solution(inst, agentgate::opt::solve_exact(inst));
      return 0;
    }
    if (oracle->parsed()) {
      print_solution(inst, agentgate::opt::solve_bruteforce(inst));
      return 0;
    }

    // verify-kkt: build the one-hot relaxation of the exact optimum and
    // the multipliers mu_i = min_r (per-user minimal adjusted role
    // risk), then test stationarity of the relaxed objective there.
    const SolveResult best = agentgate::opt::solve_exact(inst);
    print_solution(inst, best);
    const std::size_t n_users = inst.users.size();
    const std::size_t n_roles = inst.roles.size();
    agentgate::opt::RelaxedAssignment relaxed;
    relaxed.x.assign(n_users, std::vector<double>(n_roles, 0.0));
    std::vector<double> mu(n_users, 0.0);
    for (std::size_t i = 0; i < n_users; ++i) {
      relaxed.x[i][static_cast<std::size_t>(best.assignment[i])] = 1.0;
      double lo = agentgate::opt::role_risk(inst, static_cast<int>(i), 0);
      for (std::size_t r = 1; r < n_roles; ++r) {
        lo = std::min(lo, agentgate::opt::role_risk(inst, static_cast<int>(i),
                                                    static_cast<int>(r)));
      }
      mu[i] = lo;
      std::printf("mu[%s] = %.17g\n", inst.users[i].c_str(), mu[i]);
    }
    if (agentgate::opt::stationarity_check(inst, relaxed, mu, tol)) {
      std::printf("stationarity: PASS (tol %.3g)\n", tol);
      return 0;
    }
    std::printf("stationarity: FAIL\n");
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
