#include "homocp/measure_lp.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace homocp {

namespace {

// The single variable `p` depends on, if any.
std::optional<Var> SoleVariable(const Polynomial& p) {
  std::optional<Var> found;
  for (const auto& [m, c] : p.terms()) {
    for (Var v : kAllVars) {
      if (m.exponent(v) == 0) continue;
      if (found && *found != v) return std::nullopt;
      found = v;
    }
  }
  return found;
}

bool IsSignBound(const SupportSet& s, Var v, double sign) {
  // sign * v >= 0 appears as a linear univariate inequality through the origin.
  for (const auto& g : s.inequalities) {
    if (SoleVariable(g) != v || g.total_degree() != 1) continue;
    if (std::abs(g.coefficient(Monomial())) > 0.0) continue;
    if (g.coefficient(Monomial::Of(v)) * sign > 0) return true;
  }
  return false;
}

// Sphere-like equality: sum_v c_v v^k_v + c_0 = 0 with c_0 < 0, one pure power
// per variable, every term nonnegative on the support. Each variable in it is
// then bounded by |c_0 / c_v|^(1/k_v).
bool BoundedBySphere(const SupportSet& s, const Polynomial& h, Var target) {
  if (h.coefficient(Monomial()) >= 0) return false;
  bool contains = false;
  std::vector<Var> seen;
  for (const auto& [m, c] : h.terms()) {
    if (m.is_constant()) continue;
    const auto v = SoleVariable(Polynomial(m, 1.0));
    if (!v || std::find(seen.begin(), seen.end(), *v) != seen.end()) return false;
    seen.push_back(*v);
    const int k = m.exponent(*v);
    const bool nonneg = (k % 2 == 0) ? c > 0 : IsSignBound(s, *v, c > 0 ? 1.0 : -1.0);
    if (!nonneg) return false;
    if (*v == target) contains = true;
  }
  return contains;
}

}  // namespace

bool FindBox(const SupportSet& support, Var v, double* lo, double* hi) {
  std::optional<double> lower;
  std::optional<double> upper;
  for (const auto& g : support.inequalities) {
    if (SoleVariable(g) != v) continue;
    const double c0 = g.coefficient(Monomial());
    const double c1 = g.coefficient(Monomial::Of(v, 1));
    const double c2 = g.coefficient(Monomial::Of(v, 2));
    if (g.total_degree() == 2 && c2 < 0) {
      const double disc = c1 * c1 - 4 * c2 * c0;
      if (disc < 0) continue;
      const double r1 = (-c1 + std::sqrt(disc)) / (2 * c2);
      const double r2 = (-c1 - std::sqrt(disc)) / (2 * c2);
      *lo = std::min(r1, r2);
      *hi = std::max(r1, r2);
      return true;
    }
    if (g.total_degree() == 1) {
      // c1 v + c0 >= 0
      const double root = -c0 / c1;
      if (c1 > 0) lower = lower ? std::max(*lower, root) : root;
      if (c1 < 0) upper = upper ? std::min(*upper, root) : root;
    }
  }
  if (lower && upper) {
    *lo = *lower;
    *hi = *upper;
    return true;
  }
  return false;
}

std::vector<Violation> ValidateLp(const MeasureLP& lp) {
  std::vector<Violation> out;
  const int n = static_cast<int>(lp.measures.size());
  if (n == 0) out.push_back({"no-measures", ""});
  if (lp.rows.empty()) out.push_back({"no-rows", ""});

  for (const auto& s : lp.measures) {
    for (const auto& p : s.inequalities) {
      if (!p.UsesOnly(s.variables)) out.push_back({"foreign-variable", s.name});
    }
    for (const auto& p : s.equalities) {
      if (!p.UsesOnly(s.variables)) out.push_back({"foreign-variable", s.name});
    }
    for (Var v : s.variables) {
      double lo = 0;
      double hi = 0;
      bool bounded = FindBox(s, v, &lo, &hi);
      for (const auto& h : s.equalities) {
        if (!bounded) bounded = BoundedBySphere(s, h, v);
      }
      if (!bounded) out.push_back({"unbounded-variable", std::string(VarName(v))});
    }
  }

  const auto check_term = [&](const MeasureTerm& term, const std::string& where) {
    if (term.measure < 0 || term.measure >= n) {
      out.push_back({"bad-measure-index", where});
    } else if (!term.poly.UsesOnly(lp.measures[term.measure].variables)) {
      out.push_back({"foreign-variable", where});
    }
  };
  for (const auto& term : lp.objective) check_term(term, "objective");
  for (const auto& row : lp.rows) {
    if (row.terms.empty()) out.push_back({"empty-row", row.label});
    for (const auto& term : row.terms) check_term(term, row.label);
  }
  return out;
}

int MaxConstraintDegree(const MeasureLP& lp) {
  int d = 0;
  for (const auto& term : lp.objective) d = std::max(d, term.poly.total_degree());
  for (const auto& row : lp.rows) {
    for (const auto& term : row.terms) d = std::max(d, term.poly.total_degree());
  }
  for (const auto& s : lp.measures) {
    for (const auto& g : s.inequalities) d = std::max(d, g.total_degree());
    for (const auto& h : s.equalities) d = std::max(d, h.total_degree());
  }
  return d;
}

std::string DumpLp(const MeasureLP& lp) {
  std::ostringstream out;
  out.precision(12);
  const auto functional = [&](const std::vector<MeasureTerm>& terms) {
    std::string s;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (k > 0) s += " + ";
      s += "⟨" + terms[k].poly.ToString() + ", ν" + std::to_string(terms[k].measure) + "⟩";
    }
    return s.empty() ? std::string("0") : s;
  };
  for (std::size_t i = 0; i < lp.measures.size(); ++i) {
    const auto& s = lp.measures[i];
    out << "measure ν" << i << " (" << s.name << ") over";
    for (Var v : s.variables) out << ' ' << VarName(v);
    out << '\n';
    for (const auto& g : s.inequalities) out << "  support: " << g.ToString() << " ≥ 0\n";
    for (const auto& h : s.equalities) out << "  support: " << h.ToString() << " = 0\n";
  }
  out << "minimize " << functional(lp.objective) << '\n';
  for (const auto& row : lp.rows) {
    out << functional(row.terms) << (row.relation == Relation::kEq ? " = " : " ≤ ") << row.rhs
        << "    [" << row.label << "]\n";
  }
  return out.str();
}

}  // namespace homocp
