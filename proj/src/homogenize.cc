#include "homocp/homogenize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "homocp/errors.h"

namespace homocp {

Polynomial SphereSlice::Equation() const {
  const Polynomial z = (sign_restriction == SignRestriction::kZNonpos && s % 2 == 1)
                           ? -Polynomial(Var::kZ)
                           : Polynomial(Var::kZ);
  return z.Pow(s) + Polynomial(Var::kW).Pow(s) - Polynomial(1.0);
}

std::pair<double, double> MapControl(double u, int s) {
  if (s < 1) throw DomainError("homogenization exponent must be >= 1");
  if (std::isinf(u)) return {u > 0 ? 1.0 : -1.0, 0.0};
  if (std::isnan(u)) throw DomainError("control is NaN");
  // Scale by max(1, |u|) so large |u| does not overflow u^s.
  const double m = std::max(1.0, std::abs(u));
  const double base = std::pow(1.0 / m, s) + std::pow(u / m, s);
  if (!(base > 0.0)) {
    throw DomainError("1 + u^s <= 0 for u = " + std::to_string(u) + ", s = " + std::to_string(s));
  }
  const double root = m * std::pow(base, 1.0 / s);
  return {u / root, 1.0 / root};
}

double UnmapControl(double z, double w, int s) {
  // For odd s either half of the slice is accepted.
  const double residual = std::min(std::abs(std::pow(z, s) + std::pow(w, s) - 1.0),
                                   std::abs(std::pow(-z, s) + std::pow(w, s) - 1.0));
  if (residual > kSliceTolerance || w < -kSliceTolerance) {
    throw NotOnSlice("(" + std::to_string(z) + ", " + std::to_string(w) + ") is not on B_" +
                     std::to_string(s));
  }
  if (w <= kSliceTolerance) {
    return z > 0 ? std::numeric_limits<double>::infinity()
                 : -std::numeric_limits<double>::infinity();
  }
  return z / w;
}

HomogenizedLagrangian HomogenizeLagrangian(const Polynomial& l, int r) {
  return {SubstituteRatio(l, Var::kU, Var::kZ, Var::kW, r), r};
}

int DefaultTestDegree(int order, int r) { return 2 * order - std::max(r, 1); }

namespace {

const std::vector<Var> kHomogenizedVars = {Var::kT, Var::kX, Var::kZ, Var::kW};

SupportSet MakeSupport(const OcpProblem& p, SignRestriction sign, std::string name) {
  const Polynomial t(Var::kT);
  const Polynomial x(Var::kX);
  SupportSet s;
  s.name = std::move(name);
  s.variables = kHomogenizedVars;
  s.inequalities.push_back((t - p.a) * (Polynomial(p.b) - t));
  s.inequalities.push_back((x - p.x_lo) * (Polynomial(p.x_hi) - x));
  s.inequalities.push_back(Polynomial(Var::kW));
  if (sign == SignRestriction::kZNonneg) s.inequalities.push_back(Polynomial(Var::kZ));
  if (sign == SignRestriction::kZNonpos) s.inequalities.push_back(-Polynomial(Var::kZ));
  s.equalities.push_back(SphereSlice{p.s, sign}.Equation());
  return s;
}

// Liouville rows for one problem; `pieces` lists the measure indices whose
// contributions are summed.
void AppendLiouvilleRows(const OcpProblem& p, int test_degree, const std::vector<int>& pieces,
                         MeasureLP* lp) {
  const Polynomial wr = Polynomial(Var::kW).Pow(p.r);
  const Polynomial zwr1 = Polynomial(Var::kZ) * Polynomial(Var::kW).Pow(p.r - 1);
  for (int deg = 1; deg <= test_degree; ++deg) {
    for (int alpha = deg; alpha >= 0; --alpha) {
      const int beta = deg - alpha;
      const Polynomial v(Monomial({alpha, beta, 0, 0, 0}), 1.0);
      const Polynomial coeff =
          Differentiate(v, Var::kT) * wr + Differentiate(v, Var::kX) * zwr1;
      LinearFunctionalRow row;
      row.label = "liouville t^" + std::to_string(alpha) + " x^" + std::to_string(beta);
      for (int m : pieces) row.terms.push_back({m, coeff});
      row.rhs = std::pow(p.b, alpha) * std::pow(p.x_b, beta) -
                std::pow(p.a, alpha) * std::pow(p.x_a, beta);
      lp->rows.push_back(std::move(row));
    }
  }
}

void CheckBuildable(const OcpProblem& p) {
  std::vector<Violation> violations = Validate(p);
  std::erase_if(violations, [](const Violation& v) {
    return v.code == "odd-r-free-control" || v.code == "odd-s-free-control";
  });
  if (!violations.empty()) {
    std::string msg = "invalid problem:";
    for (const auto& v : violations) msg += " [" + v.ToString() + "]";
    throw InvalidProblem(msg);
  }
}

}  // namespace

MeasureLP BuildPolynomialLp(const OcpProblem& p, int test_degree, bool split_odd_free) {
  CheckBuildable(p);
  const bool odd = p.r % 2 == 1 || p.s % 2 == 1;
  if (p.control_sign == ControlSign::kFree && odd) {
    if (split_odd_free) return BuildPolynomialLpSplit(p, test_degree);
    throw OddFreeControl("free control with r = " + std::to_string(p.r) +
                         ", s = " + std::to_string(p.s) + " needs the split construction");
  }
  const SignRestriction sign = p.control_sign == ControlSign::kNonnegative ? SignRestriction::kZNonneg
                               : p.control_sign == ControlSign::kNonpositive
                                   ? SignRestriction::kZNonpos
                                   : SignRestriction::kNone;
  MeasureLP lp;
  lp.measures.push_back(MakeSupport(p, sign, "nu"));
  lp.objective.push_back({0, HomogenizeLagrangian(p.lagrangian, p.r).ltilde});
  AppendLiouvilleRows(p, test_degree, {0}, &lp);

  const Polynomial z = sign == SignRestriction::kZNonpos ? -Polynomial(Var::kZ) : Polynomial(Var::kZ);
  // For even r, z^r = (-z)^r and the sign flip is immaterial.
  lp.rows.push_back({"mass", {{0, z.Pow(p.r)}}, Relation::kLe, p.C});
  return lp;
}

MeasureLP BuildPolynomialLpSplit(const OcpProblem& p, int test_degree) {
  CheckBuildable(p);
  if (p.control_sign != ControlSign::kFree) {
    throw InvalidProblem("split construction applies to free controls only");
  }
  MeasureLP lp;
  lp.measures.push_back(MakeSupport(p, SignRestriction::kZNonneg, "nu+"));
  lp.measures.push_back(MakeSupport(p, SignRestriction::kZNonpos, "nu-"));
  const Polynomial ltilde = HomogenizeLagrangian(p.lagrangian, p.r).ltilde;
  lp.objective.push_back({0, ltilde});
  lp.objective.push_back({1, ltilde});
  AppendLiouvilleRows(p, test_degree, {0, 1}, &lp);
  lp.rows.push_back({"mass",
                     {{0, Polynomial(Var::kZ).Pow(p.r)}, {1, (-Polynomial(Var::kZ)).Pow(p.r)}},
                     Relation::kLe,
                     p.C});
  return lp;
}

}  // namespace homocp
