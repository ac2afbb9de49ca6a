#include "homocp/homogenize.h"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "homocp/errors.h"
#include "test_util.h"

namespace homocp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Polynomial t(Var::kT);
const Polynomial x(Var::kX);
const Polynomial u(Var::kU);
const Polynomial z(Var::kZ);
const Polynomial w(Var::kW);

const LinearFunctionalRow* FindRow(const MeasureLP& lp, const std::string& label) {
  for (const auto& row : lp.rows) {
    if (row.label == label) return &row;
  }
  return nullptr;
}

TEST(HomogenizeTest, MapControl) {
  auto [z0, w0] = MapControl(0, 2);
  EXPECT_EQ(z0, 0.0);
  EXPECT_EQ(w0, 1.0);
  auto [zi, wi] = MapControl(kInf, 2);
  EXPECT_EQ(zi, 1.0);
  EXPECT_EQ(wi, 0.0);
  auto [zm, wm] = MapControl(-kInf, 2);
  EXPECT_EQ(zm, -1.0);
  EXPECT_EQ(wm, 0.0);
  auto [z1, w1] = MapControl(1, 2);
  EXPECT_NEAR(z1, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(w1, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(MapControl(-2, 1), DomainError);
  EXPECT_THROW(MapControl(-1, 3), DomainError);
  // Huge values do not overflow.
  auto [zh, wh] = MapControl(1e200, 4);
  EXPECT_NEAR(zh, 1.0, 1e-12);
  EXPECT_GE(wh, 0.0);
}

TEST(HomogenizeTest, UnmapControl) {
  EXPECT_EQ(UnmapControl(0, 1, 2), 0.0);
  EXPECT_EQ(UnmapControl(1, 0, 2), kInf);
  EXPECT_EQ(UnmapControl(-1, 0, 2), -kInf);
  const auto [z, w] = MapControl(3.7, 4);
  EXPECT_NEAR(UnmapControl(z, w, 4), 3.7, 3.7e-9);
  EXPECT_THROW(UnmapControl(0.5, 0.5, 2), NotOnSlice);
  EXPECT_THROW(UnmapControl(0, -1, 2), NotOnSlice);
}

TEST(HomogenizeTest, SphereSlice) {
  EXPECT_TRUE((SphereSlice{2, SignRestriction::kNone}).IsValid());
  EXPECT_FALSE((SphereSlice{1, SignRestriction::kNone}).IsValid());
  EXPECT_TRUE((SphereSlice{1, SignRestriction::kZNonneg}).IsValid());
  EXPECT_EQ((SphereSlice{2, SignRestriction::kNone}).Equation(), z.Pow(2) + w.Pow(2) - 1.0);
  EXPECT_EQ((SphereSlice{1, SignRestriction::kZNonpos}).Equation(), -z + w - 1.0);
}

TEST(HomogenizeTest, HomogenizeLagrangian) {
  EXPECT_EQ(HomogenizeLagrangian((t - x.Pow(3)).Pow(2) * u, 1).ltilde, (t - x.Pow(3)).Pow(2) * z);
  EXPECT_EQ(HomogenizeLagrangian(u.Pow(2), 2).ltilde, z.Pow(2));
  EXPECT_EQ(HomogenizeLagrangian(t * u.Pow(2) + x, 2).ltilde, t * z.Pow(2) + x * w.Pow(2));
  EXPECT_THROW(HomogenizeLagrangian(u.Pow(3), 2), ClearTooSmall);
}

TEST(HomogenizeTest, DefaultTestDegree) {
  EXPECT_EQ(DefaultTestDegree(4, 1), 7);
  EXPECT_EQ(DefaultTestDegree(2, 2), 2);
}

TEST(HomogenizeTest, LavrentievLp) {
  const OcpProblem p = LavrentievModified();
  const MeasureLP lp = BuildPolynomialLp(p, 7);
  EXPECT_TRUE(ValidateLp(lp).empty());
  EXPECT_EQ(MaxConstraintDegree(lp), 7);
  ASSERT_EQ(lp.measures.size(), 1u);
  // 2 + 3 + ... + 8 Liouville rows, then mass.
  EXPECT_EQ(lp.rows.size(), 35u + 1u);
  const auto* vx = FindRow(lp, "liouville t^0 x^1");
  ASSERT_NE(vx, nullptr);
  EXPECT_EQ(vx->terms[0].poly, z);
  EXPECT_EQ(vx->rhs, 1.0);
  const auto* vt = FindRow(lp, "liouville t^1 x^0");
  ASSERT_NE(vt, nullptr);
  EXPECT_EQ(vt->terms[0].poly, w);
  EXPECT_EQ(vt->rhs, 1.0);
  const auto* mass = FindRow(lp, "mass");
  ASSERT_NE(mass, nullptr);
  EXPECT_EQ(mass->relation, Relation::kLe);
  EXPECT_EQ(mass->terms[0].poly, z);
  EXPECT_EQ(mass->rhs, 5.0);
  EXPECT_EQ(lp.objective[0].poly, (t - x.Pow(3)).Pow(2) * z);
  // z >= 0 cut is present for the sign-restricted control.
  bool has_cut = false;
  for (const auto& g : lp.measures[0].inequalities) has_cut |= (g == z);
  EXPECT_TRUE(has_cut);
}

TEST(HomogenizeTest, EvenMassRowAndRowCoefficients) {
  OcpProblem p;
  p.a = 0.5;
  p.b = 2;
  p.x_a = 0.25;
  p.x_b = -0.5;
  p.lagrangian = u.Pow(2) + x.Pow(2);
  p.r = 2;
  p.s = 2;
  p.C = 3;
  const MeasureLP lp = BuildPolynomialLp(p, 3);
  EXPECT_EQ(FindRow(lp, "mass")->terms[0].poly, z.Pow(2));
  // v = t^2 x: 2 t x w^2 + t^2 z w, rhs b^2 x_b - a^2 x_a.
  const auto* row = FindRow(lp, "liouville t^2 x^1");
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(row->terms[0].poly, 2.0 * t * x * w.Pow(2) + t.Pow(2) * z * w);
  EXPECT_DOUBLE_EQ(row->rhs, 4 * -0.5 - 0.25 * 0.25);
}

TEST(HomogenizeTest, OddFreeControl) {
  OcpProblem p = LavrentievModified();
  p.control_sign = ControlSign::kFree;
  EXPECT_THROW(BuildPolynomialLp(p, 3), OddFreeControl);
  const MeasureLP split = BuildPolynomialLp(p, 3, /*split_odd_free=*/true);
  EXPECT_EQ(split.measures.size(), 2u);
}

TEST(HomogenizeTest, SplitBuilder) {
  OcpProblem p;
  p.lagrangian = u;
  p.r = 1;
  p.s = 1;
  p.x_b = 0.5;
  p.C = 2;
  const MeasureLP lp = BuildPolynomialLpSplit(p, 2);
  ASSERT_EQ(lp.measures.size(), 2u);
  EXPECT_TRUE(ValidateLp(lp).empty());
  ASSERT_EQ(lp.objective.size(), 2u);
  EXPECT_EQ(lp.objective[0].poly, z);
  EXPECT_EQ(lp.objective[1].poly, z);
  const auto* vt = FindRow(lp, "liouville t^1 x^0");
  ASSERT_NE(vt, nullptr);
  ASSERT_EQ(vt->terms.size(), 2u);
  EXPECT_EQ(vt->terms[0].poly, w);
  EXPECT_EQ(vt->terms[1].poly, w);
  EXPECT_EQ(vt->rhs, 1.0);
  const auto* mass = FindRow(lp, "mass");
  ASSERT_EQ(mass->terms.size(), 2u);
  EXPECT_EQ(mass->terms[0].poly, z);
  EXPECT_EQ(mass->terms[1].poly, -z);
  // The z <= 0 half of the odd slice.
  EXPECT_EQ(lp.measures[1].equalities[0], -z + w - 1.0);
}

// ---- properties -------------------------------------------------------------

TEST(HomogenizePropertyTest, LtildeIdentity) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> wdist(0.05, 1.0);
  for (int i = 0; i < 300; ++i) {
    const Polynomial l = test::RandomPolynomial(rng, {Var::kT, Var::kX, Var::kU}, 4, 3);
    const int r = std::max(1, l.degree_in(Var::kU)) + i % 2;
    const Polynomial lt = HomogenizeLagrangian(l, r).ltilde;
    Point pt = test::RandomPoint(rng);
    pt[Var::kW] = wdist(rng);
    Point orig = pt;
    orig[Var::kU] = pt[Var::kZ] / pt[Var::kW];
    const double want = std::pow(pt[Var::kW], r) * Evaluate(l, orig);
    EXPECT_LE(std::abs(Evaluate(lt, pt) - want), 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST(HomogenizePropertyTest, MapUnmapRoundTrip) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ud(-50, 50);
  for (int s : {1, 2, 3, 4, 6}) {
    for (int i = 0; i < 200; ++i) {
      double u0 = ud(rng);
      if (s % 2 == 1 && 1 + std::pow(u0, s) <= 0) u0 = std::abs(u0);
      const auto [zz, ww] = MapControl(u0, s);
      const double lhs = std::pow(zz, s) + std::pow(ww, s);
      EXPECT_LE(std::abs(lhs - 1.0), 1e-12);
      EXPECT_GE(ww, 0.0);
      EXPECT_LE(test::RelErr(UnmapControl(zz, ww, s), u0), 1e-9) << "s=" << s << " u=" << u0;
    }
  }
}

// Pushforward of a straight trajectory: ⟨φ, ν⟩ = ∫ φ(t, x(t), g(u)) w^-r dt.
double TrajectoryFunctional(const Polynomial& phi, const OcpProblem& p) {
  const double u0 = (p.x_b - p.x_a) / (p.b - p.a);
  const auto [zz, ww] = MapControl(u0, p.s);
  const int n = 400;
  const double h = (p.b - p.a) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double tt = p.a + i * h;
    const double xx = p.x_a + u0 * (tt - p.a);
    const double f = Evaluate(phi, {{Var::kT, tt}, {Var::kX, xx}, {Var::kZ, zz}, {Var::kW, ww}});
    sum += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * f;
  }
  return sum * h / 3.0 / std::pow(ww, p.r);
}

TEST(HomogenizePropertyTest, StraightTrajectorySatisfiesLiouvilleRows) {
  std::vector<OcpProblem> problems = {LavrentievModified()};
  OcpProblem even;
  even.a = 0.5;
  even.b = 2;
  even.x_a = 0.2;
  even.x_b = -0.4;
  even.lagrangian = u.Pow(2);
  even.r = 2;
  even.s = 2;
  even.C = 3;
  problems.push_back(even);
  OcpProblem quartic = even;
  quartic.lagrangian = u.Pow(4) + t * x;
  quartic.r = 4;
  quartic.s = 4;
  problems.push_back(quartic);
  for (const auto& p : problems) {
    const MeasureLP lp = BuildPolynomialLp(p, 5);
    for (const auto& row : lp.rows) {
      if (row.relation != Relation::kEq) continue;
      EXPECT_NEAR(TrajectoryFunctional(row.terms[0].poly, p), row.rhs, 1e-8) << row.label;
    }
  }
}

}  // namespace
}  // namespace homocp
