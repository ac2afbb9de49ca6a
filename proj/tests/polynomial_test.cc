#include "homocp/polynomial.h"

#include <random>

#include <gtest/gtest.h>

#include "homocp/errors.h"
#include "test_util.h"

namespace homocp {
namespace {

const Polynomial t(Var::kT);
const Polynomial x(Var::kX);
const Polynomial u(Var::kU);
const Polynomial z(Var::kZ);
const Polynomial w(Var::kW);

TEST(PolynomialTest, AddCancelsAndMerges) {
  EXPECT_EQ(Add(t + x, -t), x);
  EXPECT_EQ((t + x) + Polynomial(), t + x);
  const Polynomial tx = t * x;
  EXPECT_EQ(tx + tx, 2.0 * tx);
  EXPECT_EQ((tx + tx).coefficient(Monomial({1, 1, 0, 0, 0})), 2.0);
}

TEST(PolynomialTest, NegateNormalizesToZero) {
  const Polynomial p = Polynomial::Parse("3*t^2*x - 0.5*z*w + 7");
  EXPECT_TRUE(Add(p, Negate(p)).is_zero());
  EXPECT_TRUE(Add(p, Negate(p)).terms().empty());
}

TEST(PolynomialTest, DropsTinyCoefficients) {
  const Polynomial p = t + Polynomial(1e-15) * x;
  EXPECT_EQ(p, t);
}

TEST(PolynomialTest, MulExpandsSquare) {
  const Polynomial p = t - x.Pow(3);
  const Polynomial want = t.Pow(2) - 2.0 * t * x.Pow(3) + x.Pow(6);
  EXPECT_EQ(Mul(p, p), want);
  EXPECT_EQ(p * Polynomial(1.0), p);
  EXPECT_TRUE((p * Polynomial(0.0)).is_zero());

  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) {
    const Point pt = test::RandomPoint(rng);
    const double v = pt.at(Var::kT) - std::pow(pt.at(Var::kX), 3);
    EXPECT_NEAR(Evaluate(want, pt), v * v, 1e-12);
  }
}

TEST(PolynomialTest, Differentiate) {
  EXPECT_EQ(Differentiate(t.Pow(2) * x, Var::kT), 2.0 * t * x);
  EXPECT_TRUE(Differentiate(t.Pow(2), Var::kX).is_zero());
  const Polynomial p = (t - x.Pow(3)).Pow(2);
  EXPECT_EQ(Differentiate(p, Var::kX), -6.0 * x.Pow(2) * (t - x.Pow(3)));
}

TEST(PolynomialTest, SubstituteRatioExamples) {
  EXPECT_EQ(SubstituteRatio(u.Pow(2), Var::kU, Var::kZ, Var::kW, 2), z.Pow(2));
  const Polynomial lav = (t - x.Pow(3)).Pow(2) * u;
  EXPECT_EQ(SubstituteRatio(lav, Var::kU, Var::kZ, Var::kW, 1), (t - x.Pow(3)).Pow(2) * z);
  EXPECT_EQ(SubstituteRatio(1.0 + u, Var::kU, Var::kZ, Var::kW, 2), w.Pow(2) + z * w);
}

TEST(PolynomialTest, SubstituteRatioClearTooSmall) {
  EXPECT_THROW(SubstituteRatio(u.Pow(3), Var::kU, Var::kZ, Var::kW, 2), ClearTooSmall);
}

TEST(PolynomialTest, Evaluate) {
  EXPECT_EQ(Evaluate(t - x.Pow(3), {{Var::kT, 1}, {Var::kX, 1}}), 0.0);
  EXPECT_NEAR(Evaluate(z.Pow(2) + w.Pow(2) - 1.0, {{Var::kZ, 0.6}, {Var::kW, 0.8}}), 0.0, 1e-15);
  EXPECT_NEAR(Evaluate((t - x.Pow(3)).Pow(2) * z, {{Var::kT, 0.5}, {Var::kX, 0.7}, {Var::kZ, 0.3}}),
              0.3 * (0.5 - 0.343) * (0.5 - 0.343), 1e-15);
  EXPECT_THROW(Evaluate(t * x, {{Var::kT, 1}}), MissingAssignment);
  // Unused variables need no value.
  EXPECT_EQ(Evaluate(Polynomial(2.5), {}), 2.5);
}

TEST(PolynomialTest, GradedLexOrder) {
  const Monomial one;
  const Monomial mt = Monomial::Of(Var::kT);
  const Monomial mx = Monomial::Of(Var::kX);
  const Monomial tt = Monomial::Of(Var::kT, 2);
  const Monomial tx = mt * mx;
  const Monomial xx = Monomial::Of(Var::kX, 2);
  EXPECT_LT(one, mt);
  EXPECT_LT(mt, mx);
  EXPECT_LT(mx, tt);
  EXPECT_LT(tt, tx);
  EXPECT_LT(tx, xx);
  EXPECT_EQ(tx.total_degree(), 2);
}

TEST(PolynomialTest, ParseAndPrint) {
  const Polynomial p = Polynomial::Parse("(t - x^3)^2 * u");
  EXPECT_EQ(p, (t - x.Pow(3)).Pow(2) * u);
  EXPECT_EQ(Polynomial::Parse(p.ToString()), p);
  EXPECT_EQ(Polynomial::Parse("-2.5*z*w + 1e-1"), -2.5 * z * w + 0.1);
  EXPECT_EQ(Polynomial::Parse("-(t)^2"), -(t.Pow(2)));
  EXPECT_THROW(Polynomial::Parse("t + y"), ParseError);
  EXPECT_THROW(Polynomial::Parse("t^"), ParseError);
  EXPECT_THROW(Polynomial::Parse("(t + x"), ParseError);
  EXPECT_THROW(Polynomial::Parse("t^-1"), ParseError);
}

TEST(PolynomialTest, Degrees) {
  const Polynomial p = t.Pow(2) * u.Pow(3) + x;
  EXPECT_EQ(p.total_degree(), 5);
  EXPECT_EQ(p.degree_in(Var::kU), 3);
  EXPECT_EQ(p.degree_in(Var::kZ), 0);
  EXPECT_TRUE(p.UsesOnly({Var::kT, Var::kX, Var::kU}));
  EXPECT_FALSE(p.UsesOnly({Var::kT, Var::kX}));
}

// ---- properties -------------------------------------------------------------

TEST(PolynomialPropertyTest, RingOperationsCommuteWithEvaluation) {
  std::mt19937_64 rng(11);
  const std::vector<Var> vars(kAllVars.begin(), kAllVars.end());
  for (int i = 0; i < 300; ++i) {
    const Polynomial p = test::RandomPolynomial(rng, vars, 5, 3);
    const Polynomial q = test::RandomPolynomial(rng, vars, 5, 3);
    const Point pt = test::RandomPoint(rng);
    const double pv = Evaluate(p, pt);
    const double qv = Evaluate(q, pt);
    EXPECT_LE(test::RelErr(Evaluate(p + q, pt), pv + qv), 1e-12);
    EXPECT_LE(test::RelErr(Evaluate(p * q, pt), pv * qv), 1e-12);
    EXPECT_EQ(p + q, q + p);
    EXPECT_EQ(p * q, q * p);
  }
}

TEST(PolynomialPropertyTest, SubstituteRatioIdentity) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> extra(0, 2);
  std::uniform_real_distribution<double> wdist(0.1, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Polynomial p = test::RandomPolynomial(rng, {Var::kT, Var::kX, Var::kU}, 4, 4);
    const int clear = p.degree_in(Var::kU) + extra(rng);
    const Polynomial q = SubstituteRatio(p, Var::kU, Var::kZ, Var::kW, clear);
    ASSERT_EQ(q.degree_in(Var::kU), 0);
    Point pt = test::RandomPoint(rng);
    pt[Var::kW] = (i % 2 ? 1.0 : -1.0) * wdist(rng);
    Point orig = pt;
    orig[Var::kU] = pt[Var::kZ] / pt[Var::kW];
    const double want = std::pow(pt[Var::kW], clear) * Evaluate(p, orig);
    EXPECT_LE(std::abs(Evaluate(q, pt) - want), 1e-10 * std::max(1.0, std::abs(want)))
        << p.ToString() << " clear " << clear;
  }
}

TEST(PolynomialPropertyTest, DerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(13);
  const std::vector<Var> vars(kAllVars.begin(), kAllVars.end());
  const double h = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const Polynomial p = test::RandomPolynomial(rng, vars, 5, 3);
    for (Var v : vars) {
      const Point pt = test::RandomPoint(rng);
      Point lo = pt;
      Point hi = pt;
      lo[v] -= h;
      hi[v] += h;
      const double fd = (Evaluate(p, hi) - Evaluate(p, lo)) / (2 * h);
      const double exact = Evaluate(Differentiate(p, v), pt);
      EXPECT_LE(std::abs(fd - exact), 1e-5 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST(PolynomialPropertyTest, SubstituteMatchesEvaluation) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 200; ++i) {
    const Polynomial p = test::RandomPolynomial(rng, {Var::kT, Var::kX}, 4, 3);
    const Polynomial rep = test::RandomPolynomial(rng, {Var::kZ, Var::kW}, 3, 2);
    const Point pt = test::RandomPoint(rng);
    Point orig = pt;
    orig[Var::kX] = Evaluate(rep, pt);
    EXPECT_LE(test::RelErr(Evaluate(Substitute(p, Var::kX, rep), pt), Evaluate(p, orig)), 1e-10);
  }
}

}  // namespace
}  // namespace homocp
