#pragma once

#include <string>
#include <vector>

#include "homocp/polynomial.h"

namespace homocp {

/// A validation finding: a rule code plus the offending subject, e.g.
/// {"unbounded-variable", "z"}.
struct Violation {
  std::string code;
  std::string subject;

  std::string ToString() const { return subject.empty() ? code : code + " " + subject; }
  bool operator==(const Violation&) const = default;
};

/// Basic semialgebraic support of one measure: {g >= 0 for g in inequalities,
/// h = 0 for h in equalities} over the active variables.
struct SupportSet {
  std::string name;
  std::vector<Var> variables;
  std::vector<Polynomial> inequalities;
  std::vector<Polynomial> equalities;
};

enum class Relation { kEq, kLe };

/// One (measure, polynomial) pairing inside a linear functional.
struct MeasureTerm {
  int measure = 0;
  Polynomial poly;
};

/// sum_k <poly_k, nu_{measure_k}>  (= or <=)  rhs
struct LinearFunctionalRow {
  std::string label;
  std::vector<MeasureTerm> terms;
  Relation relation = Relation::kEq;
  double rhs = 0.0;
};

/// Linear program over moments of finitely many measures: minimize the
/// objective functional subject to the rows.
struct MeasureLP {
  std::vector<SupportSet> measures;
  std::vector<MeasureTerm> objective;
  std::vector<LinearFunctionalRow> rows;
};

/// Structural checks plus a syntactic boundedness test: every active variable
/// must be confined by a two-sided box or by a sphere-like equality whose
/// terms are all nonnegative on the support.
std::vector<Violation> ValidateLp(const MeasureLP& lp);

/// Largest total degree over objective, rows and support polynomials.
int MaxConstraintDegree(const MeasureLP& lp);

/// Human-readable dump, one line per row: "<poly, nu_i> + ... = rhs".
std::string DumpLp(const MeasureLP& lp);

/// Bounds [lo, hi] of `v` if some inequality of `support` is a univariate
/// box (v - lo)(hi - v) >= 0, or two opposite linear bounds.
bool FindBox(const SupportSet& support, Var v, double* lo, double* hi);

}  // namespace homocp
