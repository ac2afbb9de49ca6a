#include "homocp/ocp_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "homocp/errors.h"

namespace homocp {

std::string_view ControlSignName(ControlSign sign) {
  switch (sign) {
    case ControlSign::kFree:
      return "free";
    case ControlSign::kNonnegative:
      return "nonnegative";
    case ControlSign::kNonpositive:
      return "nonpositive";
  }
  return "free";
}

ControlSign ControlSignFromName(std::string_view name) {
  if (name == "free") return ControlSign::kFree;
  if (name == "nonnegative") return ControlSign::kNonnegative;
  if (name == "nonpositive") return ControlSign::kNonpositive;
  throw ConfigError("unknown control_sign '" + std::string(name) + "'");
}

int MinimalR(const Polynomial& lagrangian) { return std::max(1, lagrangian.degree_in(Var::kU)); }

std::vector<Violation> Validate(const OcpProblem& p) {
  std::vector<Violation> out;
  if (!(p.a < p.b)) out.push_back({"interval-degenerate", "a,b"});
  if (!(p.x_lo <= p.x_hi)) out.push_back({"box-degenerate", "x_lo,x_hi"});
  if (!(p.x_lo <= p.x_a && p.x_a <= p.x_hi)) out.push_back({"boundary-outside-box", "x_a"});
  if (!(p.x_lo <= p.x_b && p.x_b <= p.x_hi)) out.push_back({"boundary-outside-box", "x_b"});
  if (!p.lagrangian.UsesOnly({Var::kT, Var::kX, Var::kU})) {
    out.push_back({"foreign-variable", "lagrangian"});
  }
  if (p.r < 1) {
    out.push_back({"r-nonpositive", "r"});
  } else if (p.r < MinimalR(p.lagrangian)) {
    out.push_back({"r-below-degree", "r"});
  }
  if (p.s < 1) out.push_back({"s-nonpositive", "s"});
  if (p.control_sign == ControlSign::kFree) {
    if (p.r % 2 != 0) out.push_back({"odd-r-free-control", "r"});
    if (p.s % 2 != 0) out.push_back({"odd-s-free-control", "s"});
  }
  if (!(p.C > 0)) out.push_back({"nonpositive-C", "C"});
  return out;
}

double CoercivityMomentBound(double a, double b, int r, double c1, double c2, double k) {
  if (!(c2 > 0)) throw DomainError("coercivity constant C2 must be positive");
  return (b - a) * std::pow(c1, r) + k / c2;
}

OcpProblem LavrentievModified() {
  OcpProblem p;
  p.label = "lavrentiev";
  p.a = 0.0;
  p.b = 1.0;
  p.x_a = 0.0;
  p.x_b = 1.0;
  p.x_lo = -1.0;
  p.x_hi = 1.0;
  const Polynomial t(Var::kT);
  const Polynomial x(Var::kX);
  p.lagrangian = (t - x.Pow(3)).Pow(2) * Polynomial(Var::kU);
  p.r = 1;
  p.s = 1;
  p.C = 5.0;
  p.control_sign = ControlSign::kNonnegative;
  return p;
}

RawMeasureLpProblem BrachistochroneMeasureLp(int test_degree) {
  const Polynomial t(Var::kT);
  const Polynomial y(Var::kX);
  const Polynomial z(Var::kZ);
  const Polynomial w(Var::kW);

  RawMeasureLpProblem out;
  out.label = "brachistochrone";
  MeasureLP& lp = out.lp;
  SupportSet support;
  support.name = "nu";
  support.variables = {Var::kT, Var::kX, Var::kZ, Var::kW};
  // Boxes as separate linear bounds: the quadratic form t(1-t) >= 0 gives
  // strictly weaker localizing constraints at order 1 (2.236 instead of 2).
  support.inequalities = {t, Polynomial(1.0) - t, y, Polynomial(1.0) - y, w};
  support.equalities = {z.Pow(2) + w.Pow(2) - Polynomial(1.0)};
  lp.measures.push_back(std::move(support));
  lp.objective.push_back({0, Polynomial(1.0)});

  const Polynomial wy = w * y;
  const Polynomial half_z = 0.5 * z;
  for (int deg = 1; deg <= test_degree; ++deg) {
    for (int alpha = deg; alpha >= 0; --alpha) {
      const int beta = deg - alpha;
      const Polynomial v(Monomial({alpha, beta, 0, 0, 0}), 1.0);
      const Polynomial coeff = Differentiate(v, Var::kT) * wy + Differentiate(v, Var::kX) * half_z;
      // v(1, 1) - v(0, 0) = 1 for every non-constant monomial.
      lp.rows.push_back({"liouville t^" + std::to_string(alpha) + " y^" + std::to_string(beta),
                         {{0, coeff}},
                         Relation::kEq,
                         1.0});
    }
  }
  lp.rows.push_back({"mass", {{0, Polynomial(1.0)}}, Relation::kLe, kBrachistochroneMassBound});
  return out;
}

double KnownOptimalValue(std::string_view label) {
  if (label == "lavrentiev") return 0.0;
  if (label == "brachistochrone") return 2.5819;
  throw UnknownLabel("no reference value for '" + std::string(label) + "'");
}

namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double ToDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + value + "' is not a number");
  }
}

int ToInt(const std::string& key, const std::string& value) {
  const double d = ToDouble(key, value);
  if (d != std::floor(d)) throw ConfigError("key '" + key + "' must be an integer");
  return static_cast<int>(d);
}

}  // namespace

ProblemSource ParseProblemConfig(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // '#' inside a quoted string is kept.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const std::string body = Trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = Trim(body.substr(0, eq));
    std::string value = Trim(body.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }

  if (const auto it = kv.find("builtin"); it != kv.end()) {
    if (kv.size() != 1) throw ConfigError("'builtin' cannot be combined with other keys");
    if (it->second == "lavrentiev") return LavrentievModified();
    if (it->second == "brachistochrone") return BrachistochroneMeasureLp(1);
    throw ConfigError("unknown builtin '" + it->second + "'");
  }

  static const std::vector<std::string> kKnown = {"label", "a",  "b", "x_a", "x_b", "x_lo",
                                                  "x_hi",  "lagrangian", "r", "s", "C",
                                                  "control_sign"};
  for (const auto& [key, value] : kv) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  for (const char* required : {"a", "b", "x_a", "x_b", "x_lo", "x_hi", "lagrangian", "C"}) {
    if (!kv.count(required)) throw ConfigError(std::string("missing key '") + required + "'");
  }

  OcpProblem p;
  p.label = kv.count("label") ? kv["label"] : "custom";
  p.a = ToDouble("a", kv["a"]);
  p.b = ToDouble("b", kv["b"]);
  p.x_a = ToDouble("x_a", kv["x_a"]);
  p.x_b = ToDouble("x_b", kv["x_b"]);
  p.x_lo = ToDouble("x_lo", kv["x_lo"]);
  p.x_hi = ToDouble("x_hi", kv["x_hi"]);
  try {
    p.lagrangian = Polynomial::Parse(kv["lagrangian"]);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("key 'lagrangian': ") + e.what());
  }
  p.r = kv.count("r") ? ToInt("r", kv["r"]) : MinimalR(p.lagrangian);
  p.s = kv.count("s") ? ToInt("s", kv["s"]) : p.r;
  p.C = ToDouble("C", kv["C"]);
  p.control_sign = kv.count("control_sign") ? ControlSignFromName(kv["control_sign"])
                                            : ControlSign::kFree;
  return p;
}

ProblemSource LoadProblemConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseProblemConfig(buf.str());
}

}  // namespace homocp
