#include "homocp/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homocp/errors.h"

namespace homocp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double IntPow(double base, int e) {
  double out = 1.0;
  for (; e > 0; --e) out *= base;
  return out;
}

// Polynomial in (t, x, u) flattened for fast repeated evaluation.
struct CompiledTerm {
  double coef;
  int et, ex, eu;
};

double Simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
  const int n = 2 * panels;
  const double h = (hi - lo) / n;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return sum * h / 3.0;
}

}  // namespace

TrajectoryProblem ToTrajectoryProblem(const OcpProblem& p) {
  if (!p.lagrangian.UsesOnly({Var::kT, Var::kX, Var::kU})) {
    throw InvalidProblem("lagrangian of '" + p.label + "' uses variables other than t, x, u");
  }
  std::vector<CompiledTerm> terms;
  for (const auto& [mono, coef] : p.lagrangian.terms()) {
    terms.push_back({coef, mono.exponent(Var::kT), mono.exponent(Var::kX), mono.exponent(Var::kU)});
  }
  TrajectoryProblem out;
  out.label = p.label;
  out.a = p.a;
  out.b = p.b;
  out.x_a = p.x_a;
  out.x_b = p.x_b;
  out.x_lo = p.x_lo;
  out.x_hi = p.x_hi;
  out.control_sign = p.control_sign;
  out.integrand = [terms](double t, double x, double u) {
    double v = 0.0;
    for (const auto& c : terms) v += c.coef * IntPow(t, c.et) * IntPow(x, c.ex) * IntPow(u, c.eu);
    return v;
  };
  return out;
}

TrajectoryProblem BrachistochroneTrajectoryProblem() {
  TrajectoryProblem out;
  out.label = "brachistochrone";
  out.a = 0.0;
  out.b = 1.0;
  out.x_a = 0.0;
  out.x_b = 1.0;
  out.x_lo = 0.0;
  out.x_hi = 1.0;
  out.integrand = [](double, double x, double u) { return std::sqrt((1.0 + u * u) / x); };
  out.singular_at_zero = true;
  return out;
}

TrajectoryProblem ToTrajectoryProblem(const ProblemSource& source) {
  if (const auto* ocp = std::get_if<OcpProblem>(&source)) return ToTrajectoryProblem(*ocp);
  const auto& raw = std::get<RawMeasureLpProblem>(source);
  if (raw.label == "brachistochrone") return BrachistochroneTrajectoryProblem();
  throw UnknownLabel("no trajectory form known for '" + raw.label + "'");
}

SampledTrajectory MakeTrajectory(const TrajectoryProblem& p, std::vector<double> t,
                                 std::vector<double> x) {
  if (t.size() != x.size() || t.size() < 2) {
    throw InvalidProblem("trajectory needs matching t and x with at least two nodes");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i - 1] < t[i])) throw InvalidProblem("trajectory times must increase strictly");
  }
  constexpr double kTol = 1e-12;
  if (std::abs(t.front() - p.a) > kTol || std::abs(t.back() - p.b) > kTol) {
    throw InvalidProblem("trajectory must span [a, b]");
  }
  if (std::abs(x.front() - p.x_a) > kTol || std::abs(x.back() - p.x_b) > kTol) {
    throw InvalidProblem("trajectory must start at x_a and end at x_b");
  }
  for (double xi : x) {
    if (xi < p.x_lo - kTol || xi > p.x_hi + kTol) {
      throw InvalidProblem("trajectory leaves [x_lo, x_hi]");
    }
  }
  return {std::move(t), std::move(x)};
}

double SegmentCost(const TrajectoryProblem& p, double t0, double x0, double t1, double x1,
                   int panels) {
  if (panels < 1) throw DomainError("panels must be >= 1");
  const double h = t1 - t0;
  const double u = (x1 - x0) / h;
  const auto g = [&](double t) { return p.integrand(t, x0 + u * (t - t0), u); };
  double value = 0.0;
  if (p.singular_at_zero && (x0 == 0.0 || x1 == 0.0)) {
    if (x0 == 0.0 && x1 == 0.0) {
      throw SingularIntegrand("integrand is not integrable on a segment resting on x = 0");
    }
    // σ = distance from the endpoint at x = 0; σ = h s² removes the 1/√σ
    // singularity. Open midpoint rule in s.
    const double start = x0 == 0.0 ? t0 : t1;
    const double dir = x0 == 0.0 ? 1.0 : -1.0;
    const int n = 2 * panels;
    for (int k = 0; k < n; ++k) {
      const double s = (k + 0.5) / n;
      value += 2.0 * h * s * g(start + dir * h * s * s);
    }
    value /= n;
  } else {
    value = Simpson(g, t0, t1, panels);
  }
  if (!std::isfinite(value)) {
    throw SingularIntegrand("integrand is not finite on segment [" + std::to_string(t0) + ", " +
                            std::to_string(t1) + "]");
  }
  return value;
}

double QuadratureObjective(const TrajectoryProblem& p, const SampledTrajectory& traj, int panels) {
  double total = 0.0;
  for (int i = 0; i < traj.segments(); ++i) {
    total += SegmentCost(p, traj.t[i], traj.x[i], traj.t[i + 1], traj.x[i + 1], panels);
  }
  return total;
}

std::pair<double, SampledTrajectory> GridSearchUpperBound(const TrajectoryProblem& p, int N,
                                                          int levels, int panels) {
  if (N < 1 || levels < 1) throw DomainError("grid search needs N >= 1 and levels >= 1");
  const long long L = levels;
  const long long transitions = N == 1 ? 1 : 2 * L + static_cast<long long>(N - 2) * L * L;
  if (transitions > kGridBudget) {
    throw BudgetExceeded("grid search with N=" + std::to_string(N) + ", levels=" +
                         std::to_string(levels) + " needs " + std::to_string(transitions) +
                         " transitions");
  }
  std::vector<double> times(N + 1);
  for (int j = 0; j <= N; ++j) times[j] = p.a + (p.b - p.a) * j / N;
  times[N] = p.b;
  std::vector<double> grid(levels);
  for (int k = 0; k < levels; ++k) grid[k] = p.x_lo + (p.x_hi - p.x_lo) * k / levels;

  const auto states = [&](int j) -> std::vector<double> {
    if (j == 0) return {p.x_a};
    if (j == N) return {p.x_b};
    return grid;
  };
  const auto edge = [&](int j, double x0, double x1) {
    if (p.control_sign == ControlSign::kNonnegative && x1 < x0) return kInf;
    if (p.control_sign == ControlSign::kNonpositive && x1 > x0) return kInf;
    try {
      return SegmentCost(p, times[j], x0, times[j + 1], x1, panels);
    } catch (const SingularIntegrand&) {
      return kInf;
    }
  };

  std::vector<std::vector<double>> cost(N + 1);
  std::vector<std::vector<int>> parent(N + 1);
  cost[0] = {0.0};
  parent[0] = {-1};
  for (int j = 0; j < N; ++j) {
    const auto from = states(j);
    const auto to = states(j + 1);
    cost[j + 1].assign(to.size(), kInf);
    parent[j + 1].assign(to.size(), -1);
    for (std::size_t q = 0; q < to.size(); ++q) {
      for (std::size_t k = 0; k < from.size(); ++k) {
        if (cost[j][k] == kInf) continue;
        const double c = cost[j][k] + edge(j, from[k], to[q]);
        if (c < cost[j + 1][q]) {
          cost[j + 1][q] = c;
          parent[j + 1][q] = static_cast<int>(k);
        }
      }
    }
  }
  if (cost[N][0] == kInf) throw InvalidProblem("grid search found no admissible path");

  SampledTrajectory traj;
  traj.t = times;
  traj.x.resize(N + 1);
  int idx = 0;
  for (int j = N; j >= 0; --j) {
    traj.x[j] = states(j)[idx];
    idx = parent[j][idx];
  }
  return {cost[N][0], traj};
}

}  // namespace homocp
