#include <algorithm>
#include <map>
#include <mutex>

#include "homocp/errors.h"
#include "homocp/sdp.h"

namespace homocp {

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, Backend> backends{{"ipm", &SolveInteriorPoint}};
};

Registry& GetRegistry() {
  static Registry registry;
  return registry;
}

std::vector<SdpEntry> Canonical(std::vector<SdpEntry> entries) {
  std::erase_if(entries, [](const SdpEntry& e) { return e.value == 0.0; });
  std::sort(entries.begin(), entries.end());
  return entries;
}

std::vector<std::pair<int, double>> Canonical(std::vector<std::pair<int, double>> coeffs) {
  std::erase_if(coeffs, [](const auto& c) { return c.second == 0.0; });
  std::sort(coeffs.begin(), coeffs.end());
  return coeffs;
}

}  // namespace

std::string_view StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kNearOptimal:
      return "near_optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kNumericalError:
      return "numerical_error";
  }
  return "numerical_error";
}

SolveStatus StatusFromName(std::string_view name) {
  for (SolveStatus s : {SolveStatus::kOptimal, SolveStatus::kNearOptimal, SolveStatus::kInfeasible,
                        SolveStatus::kUnbounded, SolveStatus::kNumericalError}) {
    if (StatusName(s) == name) return s;
  }
  throw Error("unknown solve status '" + std::string(name) + "'");
}

bool SameForm(const SdpStandardForm& a, const SdpStandardForm& b) {
  if (a.num_vars != b.num_vars || a.num_slacks != b.num_slacks) return false;
  if (a.objective != b.objective) return false;
  if (a.blocks.size() != b.blocks.size() || a.equalities.size() != b.equalities.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.blocks.size(); ++k) {
    const auto& x = a.blocks[k];
    const auto& y = b.blocks[k];
    if (x.label != y.label || x.side != y.side) return false;
    if (Canonical(x.entries) != Canonical(y.entries)) return false;
  }
  for (std::size_t r = 0; r < a.equalities.size(); ++r) {
    if (a.equalities[r].rhs != b.equalities[r].rhs) return false;
    if (Canonical(a.equalities[r].coeffs) != Canonical(b.equalities[r].coeffs)) return false;
  }
  return true;
}

Eigen::MatrixXd EvaluateBlock(const PsdMap& block, const Eigen::VectorXd& y) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(block.side, block.side);
  for (const auto& e : block.entries) {
    const double v = e.var == kConstantTerm ? e.value : e.value * y(e.var);
    m(e.row, e.col) += v;
    if (e.row != e.col) m(e.col, e.row) += v;
  }
  return m;
}

void RegisterBackend(const std::string& name, Backend backend) {
  auto& reg = GetRegistry();
  std::lock_guard lock(reg.mu);
  reg.backends[name] = std::move(backend);
}

void UnregisterBackend(const std::string& name) {
  auto& reg = GetRegistry();
  std::lock_guard lock(reg.mu);
  reg.backends.erase(name);
}

std::vector<std::string> RegisteredBackends() {
  auto& reg = GetRegistry();
  std::lock_guard lock(reg.mu);
  std::vector<std::string> names;
  for (const auto& [name, fn] : reg.backends) names.push_back(name);
  return names;
}

BackendSolution Solve(const SdpStandardForm& form, const SolverSettings& settings) {
  Backend backend;
  {
    auto& reg = GetRegistry();
    std::lock_guard lock(reg.mu);
    const auto it = reg.backends.find(settings.backend);
    if (it == reg.backends.end()) {
      throw NoBackend("no SDP backend registered under '" + settings.backend + "'");
    }
    backend = it->second;
  }
  BackendSolution sol = backend(form, settings);
  if (sol.status == SolveStatus::kNumericalError) {
    throw SolverFailure("backend '" + settings.backend + "' failed: " +
                        std::string(StatusName(sol.status)) + " after " +
                        std::to_string(sol.iterations) + " iterations");
  }
  return sol;
}

}  // namespace homocp
