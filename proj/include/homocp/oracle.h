#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "homocp/ocp_model.h"

namespace homocp {

/// Piecewise-linear trajectory: x(t) interpolates (t_i, x_i), u is constant
/// per segment.
struct SampledTrajectory {
  std::vector<double> t;
  std::vector<double> x;

  int segments() const { return static_cast<int>(t.size()) - 1; }
};

/// What the oracle needs from a problem: the data of the original
/// (un-homogenized) calculus-of-variations problem with a pointwise integrand.
struct TrajectoryProblem {
  std::string label;
  double a = 0.0;
  double b = 1.0;
  double x_a = 0.0;
  double x_b = 0.0;
  double x_lo = -1.0;
  double x_hi = 1.0;
  ControlSign control_sign = ControlSign::kFree;
  std::function<double(double t, double x, double u)> integrand;
  /// Integrand blows up like 1/√x at x = 0 (Brachistochrone).
  bool singular_at_zero = false;
};

TrajectoryProblem ToTrajectoryProblem(const OcpProblem& p);
/// min ∫_0^1 √((1 + u²) / x) dt, x(0) = 0, x(1) = 1, x ∈ [0, 1].
TrajectoryProblem BrachistochroneTrajectoryProblem();
/// OcpProblem, or a raw LP whose label has a known original form
/// ("brachistochrone"); UnknownLabel otherwise.
TrajectoryProblem ToTrajectoryProblem(const ProblemSource& source);

inline constexpr int kDefaultPanels = 129;

/// Straight segments through the given nodes; checks ordering, endpoints and
/// the box. Throws InvalidProblem.
SampledTrajectory MakeTrajectory(const TrajectoryProblem& p, std::vector<double> t,
                                 std::vector<double> x);

/// Cost of one straight segment (t0, x0) -> (t1, x1). Composite Simpson with
/// `panels` panels; for singular integrands a segment touching x = 0 is
/// integrated after t - t_0 = h σ² with an open midpoint rule. Throws
/// SingularIntegrand when the integrand is not integrable on the segment.
double SegmentCost(const TrajectoryProblem& p, double t0, double x0, double t1, double x1,
                   int panels = kDefaultPanels);

/// Sum of SegmentCost over the trajectory.
double QuadratureObjective(const TrajectoryProblem& p, const SampledTrajectory& traj,
                           int panels = kDefaultPanels);

inline constexpr long long kGridBudget = 10'000'000;

/// Dynamic program over N equal time steps. Interior nodes take the states
/// x_lo + k (x_hi - x_lo) / levels, k = 0..levels-1 (so doubling levels
/// refines the grid); the endpoints are pinned to x_a and x_b. Sign-restricted
/// problems only use monotone edges. Throws BudgetExceeded beyond kGridBudget
/// transitions, InvalidProblem if no finite path exists.
std::pair<double, SampledTrajectory> GridSearchUpperBound(const TrajectoryProblem& p, int N,
                                                          int levels,
                                                          int panels = kDefaultPanels);

}  // namespace homocp
