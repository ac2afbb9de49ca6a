#pragma once

#include <cmath>
#include <random>

#include "homocp/polynomial.h"

namespace homocp {
namespace test {

// Random polynomial over `vars` with integer coefficients in [-10, 10] and
// per-variable exponents up to max_exp.
inline Polynomial RandomPolynomial(std::mt19937_64& rng, const std::vector<Var>& vars,
                                   int num_terms, int max_exp) {
  std::uniform_int_distribution<int> coef(-10, 10);
  std::uniform_int_distribution<int> expo(0, max_exp);
  Polynomial p;
  for (int k = 0; k < num_terms; ++k) {
    std::array<int, kNumVars> e{};
    for (Var v : vars) e[static_cast<int>(v)] = expo(rng);
    p += Polynomial(Monomial(e), coef(rng));
  }
  return p;
}

inline Point RandomPoint(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Point pt;
  for (Var v : kAllVars) pt[v] = d(rng);
  return pt;
}

inline double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace test
}  // namespace homocp
