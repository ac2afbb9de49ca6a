#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace homocp {

/// The fixed variable universe, in canonical order.
enum class Var : int { kT = 0, kX = 1, kU = 2, kZ = 3, kW = 4 };

inline constexpr int kNumVars = 5;
inline constexpr std::array<Var, kNumVars> kAllVars = {Var::kT, Var::kX, Var::kU,
                                                      Var::kZ, Var::kW};

std::string_view VarName(Var v);
/// Throws ParseError for names outside {t, x, u, z, w}.
Var VarFromName(std::string_view name);

/// Coefficients with magnitude below this are dropped after arithmetic.
inline constexpr double kDropTolerance = 1e-14;

/// Exponent vector over (t, x, u, z, w).
///
/// Ordering is graded lexicographic: lower total degree first, and within a
/// degree the monomial with the larger exponent on the earlier variable comes
/// first (1, t, x, u, z, w, t^2, t*x, ...).
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(const std::array<int, kNumVars>& exponents);
  static Monomial Of(Var v, int power = 1);

  int exponent(Var v) const { return exponents_[static_cast<int>(v)]; }
  const std::array<int, kNumVars>& exponents() const { return exponents_; }
  int total_degree() const;
  bool is_constant() const { return total_degree() == 0; }

  Monomial operator*(const Monomial& other) const;

  bool operator==(const Monomial& other) const = default;
  std::strong_ordering operator<=>(const Monomial& other) const;

  std::string ToString() const;

 private:
  std::array<int, kNumVars> exponents_{};
};

/// Assignment of real values to (some of) the variables.
using Point = std::map<Var, double>;

/// Sparse real polynomial over the fixed universe. Never stores a zero
/// coefficient.
class Polynomial {
 public:
  using Terms = std::map<Monomial, double>;

  Polynomial() = default;
  /* implicit */ Polynomial(double constant);
  /* implicit */ Polynomial(Var v);
  Polynomial(const Monomial& m, double coefficient);
  explicit Polynomial(Terms terms);

  /// Parses "(t - x^3)^2 * u" style text. Grammar: + - * ^ (non-negative
  /// integer powers), parentheses, decimal constants, names t x u z w.
  static Polynomial Parse(std::string_view text);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  int degree_in(Var v) const;
  double coefficient(const Monomial& m) const;
  /// True iff every variable with a nonzero exponent is in `vars`.
  bool UsesOnly(const std::vector<Var>& vars) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  Polynomial& operator*=(const Polynomial& q);
  Polynomial Pow(int k) const;

  bool operator==(const Polynomial& q) const = default;

  std::string ToString() const;

 private:
  void Normalize();
  Terms terms_;
};

Polynomial operator+(Polynomial p, const Polynomial& q);
Polynomial operator-(Polynomial p, const Polynomial& q);
Polynomial operator*(const Polynomial& p, const Polynomial& q);

Polynomial Add(const Polynomial& p, const Polynomial& q);
Polynomial Mul(const Polynomial& p, const Polynomial& q);
Polynomial Negate(const Polynomial& p);

/// Formal partial derivative.
Polynomial Differentiate(const Polynomial& p, Var var);

/// Returns den^clear * p(var := num/den). Requires clear >= degree_in(p, var)
/// (ClearTooSmall otherwise) and num, den distinct from var.
Polynomial SubstituteRatio(const Polynomial& p, Var var, Var num, Var den, int clear);

/// Replaces every occurrence of `var` with the polynomial `replacement`.
Polynomial Substitute(const Polynomial& p, Var var, const Polynomial& replacement);

/// Direct summation of all terms. Throws MissingAssignment when a variable
/// with a nonzero exponent is unassigned.
double Evaluate(const Polynomial& p, const Point& point);

}  // namespace homocp
