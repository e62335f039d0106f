#include <gtest/gtest.h>

#include <random>

#include "sharpcert/interval.hpp"
#include "sharpcert/polys.hpp"

using namespace sharpcert;

namespace {

ExactPoly upoly(std::vector<mpq_class> c, Grade g = {}) { return ExactPoly(g, std::move(c), VarDomain::WeightU); }
ExactPoly tpoly(std::vector<mpq_class> c, Grade g = {}) { return ExactPoly(g, std::move(c), VarDomain::KernelT); }

const mpq_class kLo{0}, kHi{16};

}  // namespace

TEST(ExactPoly, Evaluation) {
  EXPECT_EQ(upoly({0, -4, 1}).evalAt(ExactScalar(mpq_class(2))), ExactScalar(mpq_class(-4)));
  EXPECT_EQ(ExactPoly().evalAt(mpq_class(5)), ExactScalar());
  EXPECT_EQ(tpoly({mpq_class(-1, 2), 0, mpq_class(3, 2)}).evalAt(mpq_class(1)), ExactScalar(mpq_class(1)));
  EXPECT_THROW(upoly({1, 1}).evalAt(ExactScalar(mpq_class(1), {0, 1})), GradeMismatch);
  EXPECT_EQ(upoly({1, 1}, {0, 2}).evalAt(mpq_class(3)), ExactScalar(mpq_class(4), {0, 2}));
}

TEST(ExactPoly, Arithmetic) {
  EXPECT_EQ(tpoly({1, 1}) * tpoly({1, -1}), tpoly({1, 0, -1}));
  EXPECT_EQ(upoly({0, 0, 0, 1}).derivative(), upoly({0, 0, 3}));
  const ExactPoly s = tpoly({1, 1}).scale(ExactScalar(mpq_class(1), {0, 1}));
  EXPECT_EQ(s.grade(), (Grade{0, 1}));
  EXPECT_EQ(s.coefficient(1), ExactScalar(mpq_class(1), {0, 1}));
  EXPECT_THROW(tpoly({1}) + tpoly({1}, {0, 1}), GradeMismatch);
  EXPECT_EQ((tpoly({1, 2, 3}) * tpoly({0, 5})).degree(), 3);
  EXPECT_TRUE((tpoly({1, 2}) - tpoly({1, 2})).isZero());
}

TEST(ExactPoly, MixedGradeConstructionRejected) {
  EXPECT_THROW(ExactPoly::fromScalars({ExactScalar(mpq_class(1)), ExactScalar(mpq_class(1), {0, 2})}), GradeMismatch);
  const ExactPoly p = ExactPoly::fromScalars({ExactScalar(), ExactScalar(mpq_class(3), {0, 2})});
  EXPECT_EQ(p.grade(), (Grade{0, 2}));
  EXPECT_EQ(p.degree(), 1);
}

TEST(ExactPoly, TrailingZerosTrimmed) {
  const ExactPoly p = tpoly({1, 2, 0, 0});
  EXPECT_EQ(p.degree(), 1);
  EXPECT_TRUE(tpoly({0, 0}).isZero());
}

TEST(Sturm, NonnegativeSquare) {
  const auto c = sturmNonnegOn(upoly({256, -32, 1}), kLo, kHi);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.lowerBound, 0);
}

TEST(Sturm, LinearFailsNearZero) {
  const auto c = sturmNonnegOn(upoly({-1, 1}), kLo, kHi);
  ASSERT_FALSE(c.holds);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_GE(c.witness->lo, 0);
  EXPECT_LT(c.witness->hi, 1);
}

TEST(Sturm, ShiftedParabola) {
  const ExactPoly p = upoly({0, -4, 1});
  EXPECT_FALSE(sturmNonnegOn(p, kLo, kHi).holds);
  const auto c = sturmNonnegOn(p.plusConstant(4), kLo, kHi);
  EXPECT_TRUE(c.holds);
  EXPECT_LE(c.lowerBound, 0);
  EXPECT_EQ(p.plusConstant(4).evalAt(mpq_class(2)), ExactScalar());
}

TEST(Sturm, TouchingRootInsideStillHolds) {
  // (u-3)^2 (u-5)^2 touches zero twice
  const ExactPoly p = upoly({225, -240, 94, -16, 1});
  EXPECT_TRUE(sturmNonnegOn(p, kLo, kHi).holds);
  EXPECT_FALSE(sturmNonnegOn(p.plusConstant(mpq_class(-1, 1000000)), kLo, kHi).holds);
}

TEST(Sturm, ZeroPolynomialHolds) {
  const auto c = sturmNonnegOn(ExactPoly({}, {}, VarDomain::WeightU), kLo, kHi);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.lowerBound, 0);
  EXPECT_THROW(sturmNonnegOn(upoly({1}), kHi, kLo), std::invalid_argument);
}

TEST(Sturm, AgreesWithDenseSampling) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> deg(0, 12);
  std::uniform_int_distribution<long> num(-40, 40), den(1, 9);
  int held = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<mpq_class> c(static_cast<std::size_t>(deg(rng) + 1));
    for (auto& x : c) x = mpq_class(num(rng), den(rng));
    // bias towards nonnegative candidates by squaring half of them
    ExactPoly p = upoly(c, {});
    if (trial % 2 == 0) p = p * p;
    p = ExactPoly({}, p.coeffs(), VarDomain::WeightU);
    const mpq_class lo(-1), hi(1);
    const auto cert = sturmNonnegOn(p, lo, hi);
    bool sampledNegative = false;
    for (int i = 0; i <= 10000 && !sampledNegative; ++i) {
      const mpq_class x = lo + (hi - lo) * mpq_class(i, 10000);
      sampledNegative = rpoly::signAt(p.coeffs(), x) < 0;
    }
    if (cert.holds) {
      ++held;
      EXPECT_FALSE(sampledNegative) << "trial " << trial;
    } else {
      ASSERT_TRUE(cert.witness.has_value());
      EXPECT_LT(rpoly::signAt(p.coeffs(), cert.witness->lo), 0);
    }
  }
  EXPECT_GT(held, 100);
}

TEST(Sturm, LowerBoundIsValid) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> num(-20, 20);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<mpq_class> c(6);
    for (auto& x : c) x = num(rng);
    ExactPoly p = upoly(c);
    p = (p * p).plusConstant(mpq_class(trial, 7));
    p = ExactPoly({}, p.coeffs(), VarDomain::WeightU);
    const auto cert = sturmNonnegOn(p, mpq_class(-2), mpq_class(2));
    ASSERT_TRUE(cert.holds);
    EXPECT_TRUE(sturmNonnegOn(p.plusConstant(-cert.lowerBound), mpq_class(-2), mpq_class(2)).holds);
  }
}

TEST(MinimalShift, Examples) {
  const mpq_class tol(1, 1000000);
  EXPECT_EQ(minimalShift(upoly({0, 1}), kLo, kHi, tol), 0);
  const mpq_class a = minimalShift(upoly({-1}), kLo, kHi, tol);
  EXPECT_GE(a, 1);
  EXPECT_LE(a, 1 + tol);
  const mpq_class b = minimalShift(upoly({0, -4, 1}), kLo, kHi, tol);
  EXPECT_GE(b, 4);
  EXPECT_LE(b, 4 + tol);
  EXPECT_THROW(minimalShift(upoly({1}), kLo, kHi, mpq_class(0)), std::invalid_argument);
}

TEST(MinimalShift, IrrationalMinimumIsTight) {
  // u^3 - 6u has its minimum at u = sqrt(2)
  const mpq_class tol(1, 1000000);
  const ExactPoly p = upoly({0, -6, 0, 1});
  const mpq_class c = minimalShift(p, kLo, kHi, tol);
  const double exact = 4 * std::sqrt(2.0);
  EXPECT_GE(c.get_d(), exact - 1e-12);
  EXPECT_LE(c.get_d(), exact + tol.get_d() + 1e-12);
}

TEST(MinimalShift, MonotoneInTolerance) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-30, 30);
  const mpq_class tol(1, 1000);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<mpq_class> c(static_cast<std::size_t>(2 + trial % 6));
    for (auto& x : c) x = mpq_class(num(rng), 16);
    const ExactPoly p = upoly(c);
    const mpq_class s = minimalShift(p, kLo, kHi, tol);
    EXPECT_TRUE(sturmNonnegOn(p.plusConstant(s), kLo, kHi).holds);
    if (s > 2 * tol) {
      EXPECT_FALSE(sturmNonnegOn(p.plusConstant(s - 2 * tol), kLo, kHi).holds);
    }
  }
}

TEST(ExactPoly, DerivativeMatchesFiniteDifferences) {
  const ExactPoly p = tpoly({3, -1, 4, -1, 5, -9, 2, 6});
  const ExactPoly dp = p.derivative();
  const mpq_class h(1, 1000000);
  for (int i = -5; i <= 5; ++i) {
    const mpq_class x(i, 5);
    const mpq_class fd = (p.evalAt(x + h).coeff() - p.evalAt(x - h).coeff()) / (2 * h);
    const IntervalScalar diff = IntervalScalar::fromRational(fd - dp.evalAt(x).coeff(), 128);
    EXPECT_LT(std::abs(diff.midDouble()), 1e-9);
  }
}
