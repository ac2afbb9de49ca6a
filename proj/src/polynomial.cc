#include "homocp/polynomial.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "homocp/errors.h"

namespace homocp {

namespace {
constexpr std::array<std::string_view, kNumVars> kNames = {"t", "x", "u", "z", "w"};
}  // namespace

std::string_view VarName(Var v) { return kNames[static_cast<int>(v)]; }

Var VarFromName(std::string_view name) {
  for (int i = 0; i < kNumVars; ++i) {
    if (kNames[i] == name) return static_cast<Var>(i);
  }
  throw ParseError("unknown variable '" + std::string(name) + "'");
}

Monomial::Monomial(const std::array<int, kNumVars>& exponents) : exponents_(exponents) {
  for (int e : exponents_) {
    if (e < 0) throw DomainError("negative exponent in monomial");
  }
}

Monomial Monomial::Of(Var v, int power) {
  std::array<int, kNumVars> e{};
  e[static_cast<int>(v)] = power;
  return Monomial(e);
}

int Monomial::total_degree() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

Monomial Monomial::operator*(const Monomial& other) const {
  std::array<int, kNumVars> e{};
  for (int i = 0; i < kNumVars; ++i) e[i] = exponents_[i] + other.exponents_[i];
  return Monomial(e);
}

std::strong_ordering Monomial::operator<=>(const Monomial& other) const {
  const int da = total_degree();
  const int db = other.total_degree();
  if (da != db) return da <=> db;
  // Larger exponent on an earlier variable sorts first.
  for (int i = 0; i < kNumVars; ++i) {
    if (exponents_[i] != other.exponents_[i]) return other.exponents_[i] <=> exponents_[i];
  }
  return std::strong_ordering::equal;
}

std::string Monomial::ToString() const {
  std::string out;
  for (int i = 0; i < kNumVars; ++i) {
    if (exponents_[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += kNames[i];
    if (exponents_[i] > 1) out += '^' + std::to_string(exponents_[i]);
  }
  return out.empty() ? "1" : out;
}

Polynomial::Polynomial(double constant) {
  if (std::abs(constant) >= kDropTolerance) terms_.emplace(Monomial(), constant);
}

Polynomial::Polynomial(Var v) { terms_.emplace(Monomial::Of(v), 1.0); }

Polynomial::Polynomial(const Monomial& m, double coefficient) {
  if (std::abs(coefficient) >= kDropTolerance) terms_.emplace(m, coefficient);
}

Polynomial::Polynomial(Terms terms) : terms_(std::move(terms)) { Normalize(); }

void Polynomial::Normalize() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
}

int Polynomial::total_degree() const {
  // Graded order: the last term has the largest degree.
  return terms_.empty() ? 0 : terms_.rbegin()->first.total_degree();
}

int Polynomial::degree_in(Var v) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(v));
  return d;
}

double Polynomial::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

bool Polynomial::UsesOnly(const std::vector<Var>& vars) const {
  for (const auto& [m, c] : terms_) {
    for (Var v : kAllVars) {
      if (m.exponent(v) > 0 && std::find(vars.begin(), vars.end(), v) == vars.end()) {
        return false;
      }
    }
  }
  return true;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& q) {
  for (const auto& [m, c] : q.terms_) terms_[m] += c;
  Normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
  for (const auto& [m, c] : q.terms_) terms_[m] -= c;
  Normalize();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& q) {
  Terms product;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : q.terms_) product[ma * mb] += ca * cb;
  }
  terms_ = std::move(product);
  Normalize();
  return *this;
}

Polynomial Polynomial::Pow(int k) const {
  if (k < 0) throw DomainError("negative polynomial power");
  Polynomial result(1.0);
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

std::string Polynomial::ToString() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (const auto& [m, c] : terms_) {
    double mag = c;
    if (first) {
      if (c < 0) {
        out << "-";
        mag = -c;
      }
    } else {
      out << (c < 0 ? " - " : " + ");
      mag = std::abs(c);
    }
    first = false;
    if (m.is_constant()) {
      out << mag;
    } else if (mag == 1.0) {
      out << m.ToString();
    } else {
      out << mag << "*" << m.ToString();
    }
  }
  return out.str();
}

Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  Polynomial out = p;
  out *= q;
  return out;
}

Polynomial Add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial Mul(const Polynomial& p, const Polynomial& q) { return p * q; }
Polynomial Negate(const Polynomial& p) { return -p; }

Polynomial Differentiate(const Polynomial& p, Var var) {
  Polynomial::Terms out;
  const int idx = static_cast<int>(var);
  for (const auto& [m, c] : p.terms()) {
    const int e = m.exponent(var);
    if (e == 0) continue;
    auto exps = m.exponents();
    exps[idx] = e - 1;
    out[Monomial(exps)] += c * e;
  }
  return Polynomial(std::move(out));
}

Polynomial SubstituteRatio(const Polynomial& p, Var var, Var num, Var den, int clear) {
  if (var == num || var == den) {
    throw DomainError("substituted variable must differ from numerator and denominator");
  }
  const int k = p.degree_in(var);
  if (clear < k) {
    throw ClearTooSmall("clear=" + std::to_string(clear) + " is below degree " +
                        std::to_string(k) + " in " + std::string(VarName(var)));
  }
  // Each term c * m * var^e becomes c * m * num^e * den^(clear - e).
  Polynomial::Terms out;
  const int vi = static_cast<int>(var);
  for (const auto& [m, c] : p.terms()) {
    auto exps = m.exponents();
    const int e = exps[vi];
    exps[vi] = 0;
    exps[static_cast<int>(num)] += e;
    exps[static_cast<int>(den)] += clear - e;
    out[Monomial(exps)] += c;
  }
  return Polynomial(std::move(out));
}

Polynomial Substitute(const Polynomial& p, Var var, const Polynomial& replacement) {
  const int k = p.degree_in(var);
  std::vector<Polynomial> powers{Polynomial(1.0)};
  for (int i = 1; i <= k; ++i) powers.push_back(powers.back() * replacement);
  Polynomial out;
  const int vi = static_cast<int>(var);
  for (const auto& [m, c] : p.terms()) {
    auto exps = m.exponents();
    const int e = exps[vi];
    exps[vi] = 0;
    out += Polynomial(Monomial(exps), c) * powers[e];
  }
  return out;
}

double Evaluate(const Polynomial& p, const Point& point) {
  double sum = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double term = c;
    for (Var v : kAllVars) {
      const int e = m.exponent(v);
      if (e == 0) continue;
      const auto it = point.find(v);
      if (it == point.end()) {
        throw MissingAssignment("no value for variable " + std::string(VarName(v)));
      }
      term *= std::pow(it->second, e);
    }
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Parser: expr := term (('+'|'-') term)*
//         term := unary ('*' unary)*
//         unary := '-' unary | power
//         power := atom ('^' integer)?
//         atom := number | name | '(' expr ')'
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Polynomial ParseAll() {
    Polynomial p = ParseExpr();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" +
                     std::string(text_) + "'");
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool Accept(char c) {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial ParseExpr() {
    Polynomial p = ParseTerm();
    while (true) {
      if (Accept('+')) {
        p += ParseTerm();
      } else if (Accept('-')) {
        p -= ParseTerm();
      } else {
        return p;
      }
    }
  }

  Polynomial ParseTerm() {
    Polynomial p = ParseUnary();
    while (Accept('*')) p *= ParseUnary();
    return p;
  }

  Polynomial ParseUnary() {
    if (Accept('-')) return -ParseUnary();
    if (Accept('+')) return ParseUnary();
    return ParsePower();
  }

  Polynomial ParsePower() {
    Polynomial base = ParseAtom();
    if (Accept('^')) {
      SkipSpace();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) Fail("expected non-negative integer exponent");
      base = base.Pow(std::stoi(std::string(text_.substr(start, pos_ - start))));
    }
    return base;
  }

  Polynomial ParseAtom() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = ParseExpr();
      if (!Accept(')')) Fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(text_.substr(pos_));
      std::size_t used = 0;
      const double value = std::stod(rest, &used);
      pos_ += used;
      return Polynomial(value);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Polynomial(VarFromName(text_.substr(start, pos_ - start)));
    }
    Fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::Parse(std::string_view text) { return Parser(text).ParseAll(); }

}  // namespace homocp
