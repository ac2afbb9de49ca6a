#pragma once

// Moments of finitely-atomic measures, used to check that relaxations accept
// every genuine measure on the support.

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "homocp/homogenize.h"
#include "homocp/measure_lp.h"
#include "homocp/relaxation.h"

namespace homocp {
namespace test {

struct Atom {
  Point point;
  double weight = 1.0;
};

inline Eigen::VectorXd AtomicMoments(const std::vector<Atom>& atoms, const MomentIndex& index) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(index.size());
  for (int k = 0; k < index.size(); ++k) {
    const Polynomial m(index.monomials()[k], 1.0);
    for (const auto& a : atoms) y(k) += a.weight * Evaluate(m, a.point);
  }
  return y;
}

// Random point of a support made of a t/x box and a (z, w) slice.
struct BoxSlice {
  double t_lo, t_hi, x_lo, x_hi;
  SphereSlice slice;
};

inline Point RandomSupportPoint(std::mt19937_64& rng, const BoxSlice& s) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> ud(-20.0, 20.0);
  Point p;
  p[Var::kT] = s.t_lo + (s.t_hi - s.t_lo) * unit(rng);
  p[Var::kX] = s.x_lo + (s.x_hi - s.x_lo) * unit(rng);
  double u = ud(rng);
  if (s.slice.sign_restriction == SignRestriction::kZNonneg) u = std::abs(u);
  if (s.slice.sign_restriction == SignRestriction::kZNonpos) u = -std::abs(u);
  // Occasionally put mass at infinity, or on the box boundary.
  const double roll = unit(rng);
  if (roll < 0.1) u = u >= 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  if (roll > 0.95) p[Var::kT] = s.t_hi;
  // Odd s: negative controls live on the (-z)^s + w^s = 1 half.
  const bool odd = s.slice.s % 2 == 1;
  auto [z, w] = MapControl(odd ? std::abs(u) : u, s.slice.s);
  if (odd && u < 0) z = -z;
  p[Var::kZ] = z;
  p[Var::kW] = w;
  p[Var::kU] = 0.0;
  return p;
}

inline std::vector<Atom> RandomAtoms(std::mt19937_64& rng, const BoxSlice& s, int count) {
  std::uniform_real_distribution<double> wd(0.05, 2.0);
  std::vector<Atom> atoms;
  for (int i = 0; i < count; ++i) atoms.push_back({RandomSupportPoint(rng, s), wd(rng)});
  return atoms;
}

inline double MinEig(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// Worst violations of the order-d moment/localizing conditions of `support`
// by the given moments (original coordinates, indexed by `index`).
struct DiscreteCheck {
  double min_eig = 0.0;        // min over M_d and every localizing matrix
  double max_equality = 0.0;   // max |L(h m)| over equality localizing entries
};

inline DiscreteCheck CheckDiscrete(const Eigen::VectorXd& y, const MomentIndex& index,
                                   const SupportSet& support, int d) {
  DiscreteCheck c;
  c.min_eig = MinEig(MomentMatrix(y, index, d));
  for (const auto& g : support.inequalities) {
    c.min_eig = std::min(c.min_eig, MinEig(LocalizingMatrix(y, index, g, d)));
  }
  for (const auto& h : support.equalities) {
    const Eigen::MatrixXd m = LocalizingMatrix(y, index, h, d);
    if (m.size()) c.max_equality = std::max(c.max_equality, m.cwiseAbs().maxCoeff());
  }
  return c;
}

}  // namespace test
}  // namespace homocp
