#pragma once

#include <utility>

#include "homocp/measure_lp.h"
#include "homocp/ocp_model.h"
#include "homocp/polynomial.h"

namespace homocp {

enum class SignRestriction { kNone, kZNonneg, kZNonpos };

/// The slice B_s = {z^s + w^s = 1, w >= 0}, optionally cut by a sign on z.
/// For odd s the cut is mandatory (otherwise the slice is not compact), and
/// on the z <= 0 half the sphere is written (-z)^s + w^s = 1.
struct SphereSlice {
  int s = 2;
  SignRestriction sign_restriction = SignRestriction::kNone;

  bool IsValid() const { return s >= 1 && (s % 2 == 0 || sign_restriction != SignRestriction::kNone); }
  /// Equality polynomial of the slice.
  Polynomial Equation() const;
};

/// l̃(t, x, z, w) = w^r l(t, x, z / w).
struct HomogenizedLagrangian {
  Polynomial ltilde;
  int r = 1;
};

/// u ↦ (u, 1) / (1 + u^s)^(1/s); ±∞ ↦ (±1, 0). For odd s the map is defined
/// where 1 + u^s > 0 (DomainError otherwise); ∞ with odd s maps to (1, 0),
/// -∞ to (-1, 0) on the (-z)^s + w^s = 1 half.
std::pair<double, double> MapControl(double u, int s);

/// (z, w) ↦ z / w with (±1, 0) ↦ ±∞. Throws NotOnSlice unless z^s + w^s = 1
/// (or (-z)^s + w^s = 1 for the z <= 0 half at odd s) within kSliceTolerance
/// and w >= -kSliceTolerance.
double UnmapControl(double z, double w, int s);

inline constexpr double kSliceTolerance = 1e-9;

HomogenizedLagrangian HomogenizeLagrangian(const Polynomial& l, int r);

/// Default number of test monomials' degree for a relaxation order: every
/// Liouville coefficient then has degree <= 2 * order.
int DefaultTestDegree(int order, int r);

/// Single-measure LP with polynomial data:
///   min ⟨l̃, ν⟩
///   s.t. ⟨∂v/∂t w^r + ∂v/∂x z w^(r-1), ν⟩ = v(b, x_b) - v(a, x_a)
///        for v = t^α x^β, 1 <= α + β <= test_degree (graded lex order),
///        ⟨z^r, ν⟩ <= C   ((-z)^r for odd r with nonpositive control),
///   ν supported on t ∈ [a, b], x ∈ [x_lo, x_hi], (z, w) ∈ B_s, sign cut.
/// A free-control problem with odd r or s throws OddFreeControl unless
/// `split_odd_free` is set, in which case the split builder is used.
MeasureLP BuildPolynomialLp(const OcpProblem& p, int test_degree, bool split_odd_free = false);

/// Two-measure LP for free controls: ν+ on z >= 0 and ν- on z <= 0. Rows and
/// objective sum both contributions; the mass row is ⟨z^r, ν+⟩ + ⟨(-z)^r, ν-⟩.
/// Accepts any free-control problem, odd or even.
MeasureLP BuildPolynomialLpSplit(const OcpProblem& p, int test_degree);

}  // namespace homocp
