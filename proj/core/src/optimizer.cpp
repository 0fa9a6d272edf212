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

#include "agentgate/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "json_util.hpp"

namespace agentgate::opt {

using nlohmann::json;

const char* to_string(RiskConvention c) {
  return c == RiskConvention::GrantedExposure ? "granted_exposure" : "unauthorized_attempt";
}

const char* to_string(CostMode m) { return m == CostMode::Static ? "static" : "active_roles"; }

void OptimizationInstance::validate() const {
  const std::size_t n_users = users.size();
  const std::size_t n_roles = roles.size();
  const std::size_t n_perms = permissions.size();
  if (n_roles == 0) throw IntegrityError("instance: at least one role is required");

  const auto check_unique = [](const std::vector<std::string>& ids, const char* what) {
    std::set<std::string> seen;
    for (const auto& id : ids) {
      if (id.empty()) throw IntegrityError(std::string("instance: empty ") + what + " id");
      if (!seen.insert(id).second) {
        throw IntegrityError(std::string("instance: duplicate ") + what + " id: " + id);
      }
    }
  };
  check_unique(users, "user");
  check_unique(roles, "role");
  check_unique(permissions, "permission");

  if (role_perms.size() != n_roles) throw IntegrityError("instance: role_perms shape mismatch");
  for (const auto& perms : role_perms) {
    int prev = -1;
    for (int j : perms) {
      if (j < 0 || static_cast<std::size_t>(j) >= n_perms) {
        throw IntegrityError("instance: permission index out of range");
      }
      if (j <= prev) throw IntegrityError("instance: role permissions must ascend uniquely");
      prev = j;
    }
  }
  if (risk.size() != n_users) throw IntegrityError("instance: risk matrix needs one row per user");
  for (const auto& row : risk) {
    if (row.size() != n_perms) {
      throw IntegrityError("instance: risk row needs one entry per permission");
    }
    for (double v : row) {
      if (!std::isfinite(v) || v < 0) throw IntegrityError("instance: risk must be finite, >= 0");
    }
  }
  if (role_cost.size() != n_roles) throw IntegrityError("instance: role_cost shape mismatch");
  for (double c : role_cost) {
    if (!std::isfinite(c) || c < 0) throw IntegrityError("instance: cost must be finite, >= 0");
  }
  if (!std::isfinite(lambda) || lambda < 0) {
    throw IntegrityError("instance: lambda must be finite, >= 0");
  }
  if (gamma.size() != n_users) throw IntegrityError("instance: gamma needs one entry per user");
  for (double g : gamma) {
    if (!std::isfinite(g) || g < 0) throw IntegrityError("instance: gamma must be finite, >= 0");
  }
}

int OptimizationInstance::user_index(std::string_view username) const {
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (users[i] == username) return static_cast<int>(i);
  }
  return -1;
}

int OptimizationInstance::role_index(std::string_view role) const {
  for (std::size_t r = 0; r < roles.size(); ++r) {
    if (roles[r] == role) return static_cast<int>(r);
  }
  return -1;
}

double role_risk(const OptimizationInstance& inst, int user, int role) {
  if (user < 0 || static_cast<std::size_t>(user) >= inst.users.size()) {
    throw InvalidAssignmentError("role_risk: user index out of range");
  }
  if (role < 0 || static_cast<std::size_t>(role) >= inst.roles.size()) {
    throw InvalidAssignmentError("role_risk: role index out of range");
  }
  const auto& row = inst.risk[static_cast<std::size_t>(user)];
  const auto& granted = inst.role_perms[static_cast<std::size_t>(role)];
  double sum = 0.0;
  if (inst.convention == RiskConvention::GrantedExposure) {
    for (int j : granted) sum += row[static_cast<std::size_t>(j)];
  } else {
    // Score the permissions the role does NOT grant. Walk all
    // permissions in order, skipping the (sorted) granted list.
    std::size_t g = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (g < granted.size() && static_cast<std::size_t>(granted[g]) == j) {
        ++g;
        continue;
      }
      sum += row[j];
    }
  }
  return inst.gamma[static_cast<std::size_t>(user)] * sum;
}

double role_risk(const OptimizationInstance& inst, std::string_view user,
                 std::string_view role) {
  const int i = inst.user_index(user);
  if (i < 0) throw InvalidAssignmentError("role_risk: unknown user: " + std::string(user));
  const int r = inst.role_index(role);
  if (r < 0) throw InvalidAssignmentError("role_risk: unknown role: " + std::string(role));
  return role_risk(inst, i, r);
}

namespace {

void check_assignment(const OptimizationInstance& inst, const Assignment& x) {
  if (x.size() != inst.users.size()) {
    throw InvalidAssignmentError("assignment length must equal the user count");
  }
  for (int r : x) {
    if (r < 0 || static_cast<std::size_t>(r) >= inst.roles.size()) {
      throw InvalidAssignmentError("assignment role index out of range");
    }
  }
}

// Accumulation order is part of the contract: risks in user order,
// then costs in role order. solve_exact relies on reproducing this
// float-for-float.
double cost_term(const OptimizationInstance& inst, const std::vector<bool>& active) {
  double c = 0.0;
  for (std::size_t r = 0; r < inst.roles.size(); ++r) {
    if (inst.cost_mode == CostMode::Static || active[r]) c += inst.role_cost[r];
  }
  return inst.lambda * c;
}

}  // namespace

double assignment_cost(const OptimizationInstance& inst, const Assignment& x) {
  check_assignment(inst, x);
  std::vector<bool> active(inst.roles.size(), false);
  for (int r : x) active[static_cast<std::size_t>(r)] = true;
  return cost_term(inst, active);
}

double objective(const OptimizationInstance& inst, const Assignment& x) {
  check_assignment(inst, x);
  double total = 0.0;
  std::vector<bool> active(inst.roles.size(), false);
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += role_risk(inst, static_cast<int>(i), x[i]);
    active[static_cast<std::size_t>(x[i])] = true;
  }
  return total + cost_term(inst, active);
}

SolveResult solve_bruteforce(const OptimizationInstance& inst) {
  inst.validate();
  const std::size_t n = inst.users.size();
  const std::size_t r = inst.roles.size();

  double points = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    points *= static_cast<double>(r);
    if (points > 1e6) {
      throw TooLargeError("brute force limited to 1e6 assignments");
    }
  }

  Assignment x(n, 0);
  SolveResult best{x, objective(inst, x)};
  // Odometer with the last user fastest: visits assignments in
  // ascending lexicographic order, so keeping strict improvements
  // yields the lexicographically first minimizer.
  while (true) {
    std::size_t i = n;
    while (i > 0) {
      --i;
      x[i] += 1;
      if (static_cast<std::size_t>(x[i]) < r) break;
      x[i] = 0;
      if (i == 0) return best;
    }
    if (n == 0) return best;
    const double j = objective(inst, x);
    if (j < best.objective) best = {x, j};
  }
}

namespace {

std::vector<std::vector<double>> risk_table(const OptimizationInstance& inst) {
  std::vector<std::vector<double>> tab(inst.users.size(),
                                       std::vector<double>(inst.roles.size(), 0.0));
  for (std::size_t i = 0; i < inst.users.size(); ++i) {
    for (std::size_t r = 0; r < inst.roles.size(); ++r) {
      tab[i][r] = role_risk(inst, static_cast<int>(i), static_cast<int>(r));
    }
  }
  return tab;
}

// Lexicographically first assignment matching target_j exactly. The
// running lower bound adds each user's minimum risk at the same
// accumulation position the real objective would, so it never exceeds
// the value of any completion and never prunes an optimal leaf.
class LexReconstructor {
 public:
  LexReconstructor(const OptimizationInstance& inst, const std::vector<std::vector<double>>& tab,
                   double target_j)
      : inst_(inst), tab_(tab), target_(target_j), n_(inst.users.size()),
        n_roles_(inst.roles.size()) {
    min_risk_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      min_risk_[i] = *std::min_element(tab_[i].begin(), tab_[i].end());
    }
    x_.assign(n_, 0);
    active_.assign(n_roles_, 0);
  }

  Assignment run() {
    if (!dfs(0, 0.0)) {
      throw IntegrityError("optimizer internal error: target objective unreachable");
    }
    return x_;
  }

 private:
  double bound(std::size_t next_user, double risk_acc) const {
    double acc = risk_acc;
    for (std::size_t k = next_user; k < n_; ++k) acc += min_risk_[k];
    double c = 0.0;
    for (std::size_t r = 0; r < n_roles_; ++r) {
      if (inst_.cost_mode == CostMode::Static || active_[r] > 0) c += inst_.role_cost[r];
    }
    return acc + inst_.lambda * c;
  }

  bool dfs(std::size_t i, double risk_acc) {
    if (bound(i, risk_acc) > target_) return false;
    if (i == n_) {
      return objective(inst_, x_) == target_;
    }
    for (std::size_t r = 0; r < n_roles_; ++r) {
      x_[i] = static_cast<int>(r);
      active_[r] += 1;
      if (dfs(i + 1, risk_acc + tab_[i][r])) return true;
      active_[r] -= 1;
    }
    x_[i] = 0;
    return false;
  }

  const OptimizationInstance& inst_;
  const std::vector<std::vector<double>>& tab_;
  double target_;
  std::size_t n_, n_roles_;
  std::vector<double> min_risk_;
  Assignment x_;
  std::vector<int> active_;
};

// Minimum objective in ActiveRoles mode, found by branch-and-bound
// over the set of roles allowed to be active. For any optimal
// assignment with active set A, assigning every user its cheapest role
// within A is no worse, so scanning candidate sets and greedy-filling
// covers an optimum.
class ActiveSetSearch {
 public:
  ActiveSetSearch(const OptimizationInstance& inst, const std::vector<std::vector<double>>& tab)
      : inst_(inst), tab_(tab), n_(inst.users.size()), n_roles_(inst.roles.size()) {}

  double run() {
    best_ = std::numeric_limits<double>::infinity();
    allowed_.assign(n_roles_, true);
    descend(0, 0);
    return best_;
  }

 private:
  void evaluate_current() {
    Assignment x(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      int arg = -1;
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < n_roles_; ++r) {
        if (allowed_[r] && tab_[i][r] < mn) {
          mn = tab_[i][r];
          arg = static_cast<int>(r);
        }
      }
      x[i] = arg;
    }
    const double j = objective(inst_, x);
    if (j < best_) best_ = j;
  }

  // Roles before `idx` are decided (allowed_ flags), the rest are still
  // open. Lower bound: per-user minimum over every role not yet ruled
  // out, plus the cost of roles already committed as active-capable is
  // not a sound bound (commitment does not force activity), so only the
  // risk part prunes.
  void descend(std::size_t idx, std::size_t excluded_count) {
    if (excluded_count == n_roles_) return;  // at least one role must remain
    if (idx == n_roles_) {
      evaluate_current();
      return;
    }
    double lb = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < n_roles_; ++r) {
        if (allowed_[r]) mn = std::min(mn, tab_[i][r]);
      }
      lb += mn;
    }
    if (lb > best_) return;
    descend(idx + 1, excluded_count);
    allowed_[idx] = false;
    descend(idx + 1, excluded_count + 1);
    allowed_[idx] = true;
  }

  const OptimizationInstance& inst_;
  const std::vector<std::vector<double>>& tab_;
  std::size_t n_, n_roles_;
  std::vector<bool> allowed_;
  double best_ = 0.0;
};

}  // namespace

SolveResult solve_exact(const OptimizationInstance& inst) {
  inst.validate();
  const std::size_t n = inst.users.size();
  if (n == 0) {
    Assignment empty;
    return {empty, objective(inst, empty)};
  }
  const auto tab = risk_table(inst);

  double target;
  if (inst.cost_mode == CostMode::Static) {
    // Separable: the termwise minimum is attainable, and by float-sum
    // monotonicity no assignment can come in below it.
    Assignment x(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t arg = 0;
      for (std::size_t r = 1; r < inst.roles.size(); ++r) {
        if (tab[i][r] < tab[i][arg]) arg = r;
      }
      x[i] = static_cast<int>(arg);
    }
    target = objective(inst, x);
  } else {
    if (inst.roles.size() > 24) {
      throw TooLargeError("active-roles exact solve limited to 24 roles");
    }
    target = ActiveSetSearch(inst, tab).run();
  }

  Assignment x = LexReconstructor(inst, tab, target).run();
  return {x, target};
}

SolveResult local_search(const OptimizationInstance& inst, std::uint64_t seed,
                         std::int64_t max_iters) {
  inst.validate();
  const std::size_t n = inst.users.size();
  const std::size_t n_roles = inst.roles.size();
  const auto tab = risk_table(inst);

  // Modulo draw instead of a distribution object: identical streams on
  // every platform for a given seed.
  std::mt19937_64 rng(seed);
  Assignment x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<int>(rng() % n_roles);
  }

  std::vector<int> active_count(n_roles, 0);
  for (int r : x) active_count[static_cast<std::size_t>(r)] += 1;
  const bool active_mode = inst.cost_mode == CostMode::ActiveRoles;

  for (std::int64_t iter = 0; iter < max_iters; ++iter) {
    double best_delta = 0.0;
    std::size_t best_user = 0;
    std::size_t best_role = 0;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto cur = static_cast<std::size_t>(x[i]);
      for (std::size_t r = 0; r < n_roles; ++r) {
        if (r == cur) continue;
        double delta = tab[i][r] - tab[i][cur];
        if (active_mode) {
          if (active_count[r] == 0) delta += inst.lambda * inst.role_cost[r];
          if (active_count[cur] == 1) delta -= inst.lambda * inst.role_cost[cur];
        }
        if (delta < best_delta) {
          best_delta = delta;
          best_user = i;
          best_role = r;
          found = true;
        }
      }
    }
    if (!found) break;
    const auto old_role = static_cast<std::size_t>(x[best_user]);
    active_count[old_role] -= 1;
    active_count[best_role] += 1;
    x[best_user] = static_cast<int>(best_role);
  }

  return {x, objective(inst, x)};
}

void validate_relaxed(const OptimizationInstance& inst, const RelaxedAssignment& rx) {
  if (rx.x.size() != inst.users.size()) {
    throw InvalidAssignmentError("relaxation needs one row per user");
  }
  for (const auto& row : rx.x) {
    if (row.size() != inst.roles.size()) {
      throw InvalidAssignmentError("relaxation row needs one entry per role");
    }
    double sum = 0.0;
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw InvalidAssignmentError("relaxation entries must lie in [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidAssignmentError("relaxation rows must sum to 1 within 1e-9");
    }
  }
}

double relaxed_objective(const OptimizationInstance& inst, const RelaxedAssignment& rx) {
  inst.validate();
  if (inst.cost_mode != CostMode::Static) {
    throw InvalidAssignmentError(
        "relaxed objective is defined for the static cost mode only; the active-roles "
        "cost is not linear in the assignment");
  }
  validate_relaxed(inst, rx);
  double total = 0.0;
  for (std::size_t i = 0; i < inst.users.size(); ++i) {
    for (std::size_t r = 0; r < inst.roles.size(); ++r) {
      total += rx.x[i][r] * role_risk(inst, static_cast<int>(i), static_cast<int>(r));
    }
  }
  double c = 0.0;
  for (double cost : inst.role_cost) c += cost;
  return total + inst.lambda * c;
}

bool stationarity_check(const OptimizationInstance& inst, const RelaxedAssignment& rx,
                        const std::vector<double>& mu, double tol) {
  inst.validate();
  validate_relaxed(inst, rx);
  if (mu.size() != inst.users.size()) {
    throw InvalidAssignmentError("one multiplier per user is required");
  }
  if (!(tol >= 0)) throw InvalidAssignmentError("tolerance must be non-negative");
  for (std::size_t i = 0; i < inst.users.size(); ++i) {
    for (std::size_t r = 0; r < inst.roles.size(); ++r) {
      const double risk = role_risk(inst, static_cast<int>(i), static_cast<int>(r));
      if (rx.x[i][r] > tol && std::abs(risk - mu[i]) > tol) return false;
      if (risk < mu[i] - tol) return false;
    }
  }
  return true;
}

namespace {

using jsonutil::get_number;
using jsonutil::get_string;
using jsonutil::require_keys;

std::vector<std::string> get_string_array(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + ": expected an array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_string()) throw ParseError(std::string(what) + ": expected strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

OptimizationInstance OptimizationInstance::from_json(std::string_view json_text) {
  const json doc = jsonutil::parse_or_throw(json_text, "instance");
  require_keys(doc, {"users", "roles", "permissions", "risk", "lambda"},
               {"gamma", "convention", "cost_mode"}, "instance");

  OptimizationInstance inst;
  inst.users = get_string_array(doc.at("users"), "instance users");
  inst.permissions = get_string_array(doc.at("permissions"), "instance permissions");

  if (!doc.at("roles").is_array()) throw ParseError("instance: 'roles' must be an array");
  for (const auto& jr : doc.at("roles")) {
    require_keys(jr, {"name", "permissions"}, {"cost"}, "instance role");
    inst.roles.push_back(get_string(jr, "name", "instance role"));
    const auto perm_names = get_string_array(jr.at("permissions"), "instance role permissions");
    std::vector<int> indices;
    for (const auto& name : perm_names) {
      const auto it = std::find(inst.permissions.begin(), inst.permissions.end(), name);
      if (it == inst.permissions.end()) {
        throw IntegrityError("instance: role references unknown permission: " + name);
      }
      indices.push_back(static_cast<int>(it - inst.permissions.begin()));
    }
    std::sort(indices.begin(), indices.end());
    inst.role_perms.push_back(std::move(indices));
    if (jr.contains("cost")) {
      inst.role_cost.push_back(get_number(jr.at("cost"), "instance role cost"));
    } else {
      // Default cost: the number of permissions the role grants.
      inst.role_cost.push_back(static_cast<double>(perm_names.size()));
    }
  }

  if (!doc.at("risk").is_array()) throw ParseError("instance: 'risk' must be an array");
  for (const auto& row : doc.at("risk")) {
    if (!row.is_array()) throw ParseError("instance: 'risk' rows must be arrays");
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& v : row) r.push_back(get_number(v, "instance risk"));
    inst.risk.push_back(std::move(r));
  }

  inst.lambda = get_number(doc.at("lambda"), "instance lambda");

  if (doc.contains("gamma")) {
    if (!doc.at("gamma").is_array()) throw ParseError("instance: 'gamma' must be an array");
    for (const auto& v : doc.at("gamma")) inst.gamma.push_back(get_number(v, "instance gamma"));
  } else {
    inst.gamma.assign(inst.users.size(), 1.0);
  }

  if (doc.contains("convention")) {
    const std::string c = get_string(doc, "convention", "instance");
    if (c == "granted_exposure") {
      inst.convention = RiskConvention::GrantedExposure;
    } else if (c == "unauthorized_attempt") {
      inst.convention = RiskConvention::UnauthorizedAttempt;
    } else {
      throw ParseError("instance: unknown convention: " + c);
    }
  }
  if (doc.contains("cost_mode")) {
    const std::string m = get_string(doc, "cost_mode", "instance");
    if (m == "static") {
      inst.cost_mode = CostMode::Static;
    } else if (m == "active_roles") {
      inst.cost_mode = CostMode::ActiveRoles;
    } else {
      throw ParseError("instance: unknown cost_mode: " + m);
    }
  }

  inst.validate();
  return inst;
}

OptimizationInstance OptimizationInstance::from_file(const std::string& path) {
  return from_json(jsonutil::read_file_or_throw(path, "instance"));
}

std::string OptimizationInstance::to_json() const {
  validate();
  json doc;
  doc["users"] = users;
  doc["permissions"] = permissions;
  doc["roles"] = json::array();
  for (std::size_t r = 0; r < roles.size(); ++r) {
    json jr;
    jr["name"] = roles[r];
    json perms = json::array();
    for (int j : role_perms[r]) perms.push_back(permissions[static_cast<std::size_t>(j)]);
    jr["permissions"] = std::move(perms);
    jr["cost"] = role_cost[r];
    doc["roles"].push_back(std::move(jr));
  }
  doc["risk"] = risk;
  doc["lambda"] = lambda;
  doc["gamma"] = gamma;
  doc["convention"] = to_string(convention);
  doc["cost_mode"] = to_string(cost_mode);
  return doc.dump(2);
}

}  // namespace agentgate::opt
