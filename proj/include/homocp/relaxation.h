#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homocp/measure_lp.h"
#include "homocp/polynomial.h"
#include "homocp/sdp.h"

namespace homocp {

/// Bijection between the monomials of `variables` with total degree <=
/// max_degree and 0..size()-1, in graded lex order (the constant is 0).
class MomentIndex {
 public:
  MomentIndex() = default;
  MomentIndex(std::vector<Var> variables, int max_degree);

  /// All monomials over `variables` up to `degree`, graded lex.
  static std::vector<Monomial> MonomialsUpTo(const std::vector<Var>& variables, int degree);

  int size() const { return static_cast<int>(monomials_.size()); }
  int max_degree() const { return max_degree_; }
  const std::vector<Var>& variables() const { return variables_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  /// Number of monomials with degree <= d.
  int CountUpTo(int d) const;
  /// Throws OrderTooSmall if `m` is not indexed.
  int position(const Monomial& m) const;
  bool contains(const Monomial& m) const { return positions_.count(m) > 0; }

 private:
  std::vector<Var> variables_;
  int max_degree_ = 0;
  std::vector<Monomial> monomials_;
  std::map<Monomial, int> positions_;
};

/// constant + sum coef * y[index] over the global pseudo-moment vector.
struct LinearForm {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  double Evaluate(const Eigen::VectorXd& y) const;
};

/// Matrix of linear forms, stored row-major, symmetric.
struct PsdBlock {
  int measure = 0;
  std::string label;
  int side = 0;
  std::vector<LinearForm> entries;

  const LinearForm& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * side + j]; }
};

struct AffineRow {
  std::string label;
  LinearForm form;
  Relation relation = Relation::kEq;
  double rhs = 0.0;
};

struct AssemblyOptions {
  /// Affinely map every boxed t and x to [-1, 1] before assembly.
  bool rescale = true;
};

/// Order-d truncation of a MeasureLP: one moment matrix per measure, one
/// localizing block per support inequality, localizing rows fixed to zero
/// per support equality, one affine row per LP row. Mass is not normalized.
/// A measure with a single equality h gets L(h m) = 0 for all deg(h m) <= 2d,
/// and its matrices skip monomials divisible by the leading monomial of h.
struct MomentRelaxation {
  int order = 0;
  std::vector<MomentIndex> indices;
  std::vector<int> offsets;
  int num_moments = 0;
  std::vector<PsdBlock> psd_blocks;
  std::vector<AffineRow> affine_rows;
  LinearForm objective;
  MeasureLP source;
  /// Per measure: original v = offset[v] + scale[v] * v'.
  std::vector<std::array<double, kNumVars>> scale_offset;
  std::vector<std::array<double, kNumVars>> scale_factor;

  /// Pseudo-moment functional of measure i applied to a polynomial written in
  /// the original (unscaled) coordinates.
  LinearForm Functional(int measure, const Polynomial& original) const;
  /// Slice of y holding measure i's pseudo-moments (scaled coordinates).
  Eigen::VectorXd MeasureMoments(const Eigen::VectorXd& y, int measure) const;
  /// Measure i's moments in original coordinates, indexed by indices[i].
  Eigen::VectorXd OriginalMoments(const Eigen::VectorXd& y, int measure) const;
};

/// ceil(MaxConstraintDegree / 2), and at least 1.
int MinOrder(const MeasureLP& lp);

/// Throws OrderTooSmall for order < MinOrder(lp), InvalidProblem when
/// ValidateLp reports violations.
MomentRelaxation AssembleSdp(const MeasureLP& lp, int order, const AssemblyOptions& options = {});

/// Moment matrix M_d built from a moment vector indexed by `index`
/// (which must reach degree 2d).
Eigen::MatrixXd MomentMatrix(const Eigen::VectorXd& moments, const MomentIndex& index, int d);

/// Localizing matrix of g at order d: entries L(g m_p m_q) with m_p, m_q of
/// degree <= d - ceil(deg g / 2).
Eigen::MatrixXd LocalizingMatrix(const Eigen::VectorXd& moments, const MomentIndex& index,
                                 const Polynomial& g, int d);

/// Numerical rank: singular values above tol * sigma_max.
int NumericalRank(const Eigen::MatrixXd& m, double tol);

/// rank(M_d) == rank(M_{d-1}) with relative singular-value cutoff tol.
bool FlatnessCheck(const Eigen::VectorXd& moments, const MomentIndex& index, int d, double tol);

/// Lowers the relaxation to solver standard form: variables are the
/// pseudo-moments, then one slack per inequality row (kept nonnegative by a
/// 1x1 PSD block).
SdpStandardForm ToStandardForm(const MomentRelaxation& rel);

struct SolveReport {
  int order = 0;
  double lower_bound = 0.0;
  SolveStatus status = SolveStatus::kNumericalError;
  double row_residual_inf = 0.0;
  double psd_min_eig = 0.0;
  bool flat = false;
  int iterations = 0;
  double seconds = 0.0;
  /// Per measure, original coordinates, graded lex up to degree 2d.
  std::vector<Eigen::VectorXd> moments;
  /// Full pseudo-moment vector in assembly (scaled) coordinates.
  Eigen::VectorXd raw;
};

inline constexpr double kFlatnessTolerance = 1e-6;

/// Standard form, backend solve and post-processing. Backend failures are
/// reported as status kNumericalError rather than thrown; NoBackend propagates.
SolveReport SolveRelaxation(const MomentRelaxation& rel, const SolverSettings& settings = {});

}  // namespace homocp
