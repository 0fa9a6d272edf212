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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "agentgate/errors.hpp"

// Least-privilege role assignment: pick one role per user minimizing
//
//   J(x) = sum_i gamma_i * (sum over the role's scored permission set
//          of risk[i][j]) + lambda * C(x)
//
// where the scored set per (user, role) depends on the risk convention:
// GrantedExposure scores the permissions the role grants, and
// UnauthorizedAttempt scores the permissions it does not grant (both
// readings are in circulation; the flag makes the choice explicit, and
// GrantedExposure is the default). C(x) is either the total cost of all
// roles (Static, invariant in x) or the cost of roles with at least one
// assigned user (ActiveRoles).
namespace agentgate::opt {

enum class RiskConvention { GrantedExposure, UnauthorizedAttempt };
enum class CostMode { Static, ActiveRoles };

const char* to_string(RiskConvention c);
const char* to_string(CostMode m);

class TooLargeError : public std::runtime_error {
 public:
  explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};

class InvalidAssignmentError : public std::invalid_argument {
 public:
  explicit InvalidAssignmentError(const std::string& what) : std::invalid_argument(what) {}
};

struct OptimizationInstance {
  std::vector<std::string> users;
  std::vector<std::string> roles;
  std::vector<std::string> permissions;
  std::vector<std::vector<int>> role_perms;  // per role, ascending permission indices
  std::vector<std::vector<double>> risk;     // risk[user][permission], non-negative
  std::vector<double> role_cost;             // per role, non-negative
  double lambda = 0.0;                       // non-negative
  std::vector<double> gamma;                 // per user, non-negative
  RiskConvention convention = RiskConvention::GrantedExposure;
  CostMode cost_mode = CostMode::Static;

  // Throws IntegrityError on any shape or range violation: empty user
  // or role list, ragged matrices, duplicate ids, out-of-range
  // permission indices, negative weights.
  void validate() const;

  int user_index(std::string_view username) const;  // -1 if absent
  int role_index(std::string_view role) const;      // -1 if absent

  // Instance file format; see from_json for the schema. Unknown keys
  // are rejected. from_json(to_json(i)) reproduces i exactly.
  static OptimizationInstance from_json(std::string_view json_text);
  static OptimizationInstance from_file(const std::string& path);
  std::string to_json() const;
};

// assignment[i] is the role index of user i.
using Assignment = std::vector<int>;

struct SolveResult {
  Assignment assignment;
  double objective = 0.0;
};

// Risk contribution of giving `role` to `user`:
// gamma[user] * sum of risk[user][j] over the scored permission set.
double role_risk(const OptimizationInstance& inst, int user, int role);
double role_risk(const OptimizationInstance& inst, std::string_view user,
                 std::string_view role);

// Cost term C plus multiplier as configured; Static mode ignores x.
double assignment_cost(const OptimizationInstance& inst, const Assignment& x);

// Full objective. Throws InvalidAssignmentError if x has the wrong
// length or any entry is out of range.
double objective(const OptimizationInstance& inst, const Assignment& x);

// Exhaustive search over all |R|^|U| assignments in lexicographic
// order, keeping the first minimizer. Throws TooLargeError when the
// space exceeds 10^6 points. Reference oracle for the solvers below.
SolveResult solve_bruteforce(const OptimizationInstance& inst);

// Exact minimizer, same tie-break as solve_bruteforce (bit-identical
// objective and assignment). Static cost separates per user; ActiveRoles
// runs branch-and-bound over the set of active roles, which keeps it
// practical up to a few dozen roles (guard: |R| <= 24).
SolveResult solve_exact(const OptimizationInstance& inst);

// Steepest-descent over single-user moves from a seeded random start.
// Deterministic for a fixed (instance, seed, max_iters): the start is
// drawn from mt19937_64 via modulo (no distribution objects), ties in
// the move choice resolve to the lowest (user, role). Stops at a local
// minimum or after max_iters applied moves.
SolveResult local_search(const OptimizationInstance& inst, std::uint64_t seed,
                         std::int64_t max_iters);

// Fractional assignment, X[i][r] in [0,1], each row summing to 1
// within 1e-9. Only meaningful with the Static cost mode, where the
// objective extends linearly; ActiveRoles has no linear extension, so
// relaxed_objective rejects it.
struct RelaxedAssignment {
  std::vector<std::vector<double>> x;
};

void validate_relaxed(const OptimizationInstance& inst, const RelaxedAssignment& rx);

double relaxed_objective(const OptimizationInstance& inst, const RelaxedAssignment& rx);

// First-order optimality for the linear relaxation with one multiplier
// mu[i] per simplex row: every X[i][r] > tol needs its risk within tol
// of mu[i], and no role may undercut mu[i] by more than tol.
bool stationarity_check(const OptimizationInstance& inst, const RelaxedAssignment& rx,
                        const std::vector<double>& mu, double tol);

}  // namespace agentgate::opt
