#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace homocp {

/// One upper-triangle entry (row <= col) of the matrix multiplying decision
/// variable `var` in a PSD map; var == kConstantTerm marks the constant part.
struct SdpEntry {
  int var = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;

  bool operator==(const SdpEntry&) const = default;
  auto operator<=>(const SdpEntry&) const = default;
};

inline constexpr int kConstantTerm = -1;

/// F(y) = F_const + sum_i y_i F_i, required to be positive semidefinite.
struct PsdMap {
  std::string label;
  int side = 0;
  std::vector<SdpEntry> entries;
};

struct SparseRow {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
};

/// minimize  objective^T y
/// s.t.      F_k(y) ⪰ 0 for every block, equalities a_r^T y = rhs_r.
/// The decision vector is the pseudo-moments of every measure (measure order,
/// then graded lex) followed by `num_slacks` slack variables.
struct SdpStandardForm {
  int num_vars = 0;
  int num_slacks = 0;
  std::vector<double> objective;
  std::vector<PsdMap> blocks;
  std::vector<SparseRow> equalities;
};

/// Structural equality, ignoring the order of entries within blocks and of
/// coefficients within rows.
bool SameForm(const SdpStandardForm& a, const SdpStandardForm& b);

enum class SolveStatus { kOptimal, kNearOptimal, kInfeasible, kUnbounded, kNumericalError };

std::string_view StatusName(SolveStatus status);
SolveStatus StatusFromName(std::string_view name);
inline bool IsSolved(SolveStatus s) {
  return s == SolveStatus::kOptimal || s == SolveStatus::kNearOptimal;
}

struct SolverSettings {
  std::string backend = "ipm";
  int max_iterations = 100;
  double feasibility_tolerance = 1e-8;
  double gap_tolerance = 1e-8;
  bool verbose = false;
};

struct BackendSolution {
  Eigen::VectorXd y;
  double objective = 0.0;
  SolveStatus status = SolveStatus::kNumericalError;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
};

/// A backend maps a standard form to a solution, synchronously.
using Backend = std::function<BackendSolution(const SdpStandardForm&, const SolverSettings&)>;

void RegisterBackend(const std::string& name, Backend backend);
void UnregisterBackend(const std::string& name);
std::vector<std::string> RegisteredBackends();

/// Dispatches to settings.backend. Throws NoBackend if it is not registered
/// and SolverFailure when the backend reports kNumericalError.
BackendSolution Solve(const SdpStandardForm& form, const SolverSettings& settings = {});

/// Built-in backend, registered as "ipm": equalities are eliminated through
/// an orthonormal null-space basis, and the reduced problem is solved by a
/// primal-dual infeasible interior-point method (HKM direction, Mehrotra
/// predictor-corrector).
BackendSolution SolveInteriorPoint(const SdpStandardForm& form, const SolverSettings& settings);

/// Dense value of block k at y.
Eigen::MatrixXd EvaluateBlock(const PsdMap& block, const Eigen::VectorXd& y);

/// SDPA sparse (.dat-s) text. The decision vector is the SDPA y vector; each
/// block k reads sum_i F_i y_i - F_0 ⪰ 0 with F_0 = -F_const. Equalities are
/// appended as one diagonal block holding the pairs ±(a_r^T y - rhs_r) >= 0.
/// Comment lines starting with '"' record the mapping. Throws IoError when
/// the form has no constraints.
std::string ExportSdpa(const SdpStandardForm& form);
void WriteSdpaFile(const SdpStandardForm& form, const std::string& path);

/// Inverse of ExportSdpa. Without the mapping comments every block is read
/// as a PSD block. Throws IoError on malformed input.
SdpStandardForm ParseSdpa(std::string_view text);

}  // namespace homocp
