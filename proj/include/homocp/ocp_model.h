#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "homocp/measure_lp.h"
#include "homocp/polynomial.h"

namespace homocp {

enum class ControlSign { kFree, kNonnegative, kNonpositive };

std::string_view ControlSignName(ControlSign sign);
/// Accepts "free", "nonnegative", "nonpositive"; throws ConfigError otherwise.
ControlSign ControlSignFromName(std::string_view name);

/// Scalar calculus-of-variations problem
///
///   inf  ∫_a^b l(t, x(t), u(t)) dt
///   s.t. x(a) = x_a, x(b) = x_b, ẋ = u, x(t) ∈ [x_lo, x_hi],
///
/// with u possibly unbounded, ∫|u|^r dt < C along a minimizing sequence, and
/// homogenization exponent s.
struct OcpProblem {
  std::string label;
  double a = 0.0;
  double b = 1.0;
  double x_a = 0.0;
  double x_b = 0.0;
  double x_lo = -1.0;
  double x_hi = 1.0;
  Polynomial lagrangian;
  int r = 1;
  int s = 1;
  double C = 1.0;
  ControlSign control_sign = ControlSign::kFree;
};

/// A measure LP whose transform is problem specific and does not go through
/// the generic homogenization builder.
struct RawMeasureLpProblem {
  std::string label;
  MeasureLP lp;
};

using ProblemSource = std::variant<OcpProblem, RawMeasureLpProblem>;

/// Empty iff every invariant of OcpProblem holds. Codes: interval-degenerate,
/// box-degenerate, boundary-outside-box, foreign-variable, r-nonpositive,
/// r-below-degree, s-nonpositive, odd-r-free-control, odd-s-free-control,
/// nonpositive-C.
std::vector<Violation> Validate(const OcpProblem& p);

/// max(1, degree of l in u).
int MinimalR(const Polynomial& lagrangian);

/// Moment bound from coercivity data: l >= c2 |u|^r whenever |u| >= c1, and
/// k an upper bound on the optimal value. Returns (b - a) c1^r + k / c2.
double CoercivityMomentBound(double a, double b, int r, double c1, double c2, double k);

/// min ∫_0^1 (t - x^3)^2 u dt, x(0) = 0, x(1) = 1, ẋ = u >= 0, x ∈ [-1, 1];
/// r = s = 1, C = 5.
OcpProblem LavrentievModified();

/// Mass bound of the Brachistochrone LP: the cost of x(t) = t, 2√2.
inline constexpr double kBrachistochroneMassBound = 2.8284271247461903;

/// Brachistochrone after y = √x and dν = dμ/(w y). Variables (t, y, z, w)
/// with y stored in the x slot:
///   min ∫ 1 dν
///   s.t. ∫ (∂v/∂t · w y + ∂v/∂y · z / 2) dν = v(1, 1) - v(0, 0)
///        ∫ 1 dν <= 2√2,
///   t ∈ [0, 1], y ∈ [0, 1], z^2 + w^2 = 1, w >= 0.
/// Test monomials t^α y^β with 1 <= α + β <= test_degree.
RawMeasureLpProblem BrachistochroneMeasureLp(int test_degree);

/// Reference optimal values: "lavrentiev" -> 0, "brachistochrone" -> 2.5819.
/// Throws UnknownLabel otherwise.
double KnownOptimalValue(std::string_view label);

/// Parses a problem document of `key = value` lines ('#' starts a comment,
/// strings may be double-quoted). Either `builtin = "lavrentiev" |
/// "brachistochrone"` or the keys a, b, x_a, x_b, x_lo, x_hi, lagrangian,
/// r, s, C, control_sign. r defaults to MinimalR(lagrangian), s to r and
/// control_sign to free. Throws ConfigError.
ProblemSource ParseProblemConfig(std::string_view text);
ProblemSource LoadProblemConfig(const std::string& path);

}  // namespace homocp
