#include <gtest/gtest.h>

#include "sharpcert/scheme.hpp"

using namespace sharpcert;

namespace {

ExactScalar piHalfPower(const mpq_class& q, int piHalf) { return ExactScalar(q, {0, piHalf}); }

const Certificate& cert8() {
  static const Certificate c = computeAStar(8);
  return c;
}

}  // namespace

TEST(Layout, EllStar) {
  EXPECT_EQ(ellStar(3), 0);
  EXPECT_EQ(ellStar(4), 0);
  EXPECT_EQ(ellStar(5), 1);
  EXPECT_EQ(ellStar(6), 1);
  EXPECT_EQ(ellStar(7), 2);
  EXPECT_EQ(ellStar(8), 2);
  EXPECT_EQ(ellStar(9), 3);
  EXPECT_EQ(ellStar(12), 4);
  EXPECT_EQ(ellStar(24), 10);
  EXPECT_THROW(ellStar(2), std::invalid_argument);
}

TEST(Layout, TopDegreesEightDimensions) {
  std::vector<int> tops;
  for (const auto& r : cert8().weights) tops.push_back(r.spec.topDegree);
  EXPECT_EQ(tops, (std::vector<int>{6, 6, 4, 2}));
}

TEST(Layout, IdentitiesAndDelta) {
  for (const auto& r : cert8().weights) {
    EXPECT_EQ(r.spec.identity, r.spec.n % 2 ? Identity::Magical : Identity::Nonmagical);
    EXPECT_EQ(r.spec.hasDelta, r.spec.n == 1);
  }
}

TEST(Layout, InvalidInputs) {
  EXPECT_THROW(constructWeights(6, mpq_class(1, 1000), 5), std::invalid_argument);
  EXPECT_THROW(constructWeights(8, mpq_class(0), 5), std::invalid_argument);
  EXPECT_THROW(computeAStar(2), std::invalid_argument);
  SchemeOptions bad;
  bad.tailDepth = -1;
  EXPECT_THROW(computeAStar(8, bad), std::invalid_argument);
}

TEST(AStar, EightDimensions) {
  const Certificate& c = cert8();
  EXPECT_EQ(c.N, 2);
  EXPECT_EQ(c.aStar, piHalfPower(mpq_class(131072, 13475), -12));
  EXPECT_EQ(c.aStarDecimal.substr(0, 22), "0.01011770275531235266");
  ASSERT_TRUE(c.paperBaselineDecimal.has_value());
  // Scaling by (2 pi)^8 recovers the published constant.
  EXPECT_EQ(c.aStar * pow(ExactScalar(mpq_class(2), {0, 2}), 8), eightDimensionalBaseline());
  EXPECT_EQ(c.weights[0].spec.c0, mpq_class(131072, 13475));
  for (std::size_t i = 1; i < c.weights.size(); ++i) EXPECT_EQ(c.weights[i].spec.c0, 0);
  EXPECT_TRUE(verifyCertificate(c).valid);
}

TEST(AStar, FrozenValues) {
  EXPECT_EQ(computeAStar(9).aStar, piHalfPower(mpq_class(564480, 96577), -8));
  EXPECT_EQ(computeAStar(12).aStar, piHalfPower(mpq_class(4294967296, 1684683), -16));
  EXPECT_EQ(computeAStar(16).aStar,
            piHalfPower(mpq_class(mpz_class("121028261391106048"), mpz_class("426123316905")), -20));
}

TEST(AStar, SevenDimensionsIsZero) {
  const Certificate c = computeAStar(7);
  EXPECT_EQ(c.weights.size(), 4u);
  EXPECT_TRUE(c.aStar.isZero());
  EXPECT_TRUE(verifyCertificate(c).valid);
}

TEST(AStar, LowDimensionsCarryNote) {
  for (int d : {3, 4, 5, 6}) {
    const Certificate c = computeAStar(d);
    EXPECT_TRUE(c.weights.empty());
    EXPECT_TRUE(c.aStar.isZero());
    EXPECT_EQ(c.aStarDecimal, "0");
    ASSERT_FALSE(c.notes.empty());
    EXPECT_NE(c.notes.front().find("d <= 6"), std::string::npos);
    EXPECT_FALSE(c.paperBaselineDecimal.has_value());
    EXPECT_TRUE(verifyCertificate(c).valid);
  }
}

TEST(Weights, TransferredTopCoefficient) {
  for (int d : {8, 11, 14}) {
    const WeightConstruction wc = constructWeights(d, mpq_class(1, 1000000), 5);
    const int N = wc.N;
    EXPECT_EQ(wc.weights[1].coefficient(4 * N - 2), wc.weights[0].coefficient(4 * N - 2));
    for (std::size_t n = 1; n < wc.weights.size(); ++n) {
      const auto& w = wc.weights[n];
      ExactScalar transfer;
      for (std::size_t i = 0; i < n; ++i) transfer += wc.weights[i].coefficient(w.topDegree);
      EXPECT_EQ(w.coefficient(w.topDegree), transfer);
    }
  }
}

TEST(Weights, EigenvaluesBeyondCutoff) {
  for (int d : {8, 9, 13}) {
    const WeightConstruction wc = constructWeights(d, mpq_class(1, 1000000), 8);
    for (int ell = wc.N + 1; ell <= wc.N + 8; ++ell) {
      EXPECT_EQ(weightEigen(wc.weights[0], wc.table, ell), wc.table.delta(2 * ell));
      for (std::size_t n = 1; n < wc.weights.size(); ++n)
        EXPECT_TRUE(weightEigen(wc.weights[n], wc.table, ell).isZero()) << d << " " << n << " " << ell;
    }
  }
}

TEST(Weights, ClippingMatchesEigenvalueAtEachLevel) {
  // The coefficient chosen at level (q, k) cancels the eigenvalue at l = k/2
  // unless it was clipped to zero, in which case that eigenvalue stays <= 0.
  for (int d : {8, 10, 15, 20}) {
    const WeightConstruction wc = constructWeights(d, mpq_class(1, 1000000), 2);
    for (const auto& w : wc.weights) {
      const int levels = structuralCutoff(wc.N, w.n);
      const int first = w.n == 1 ? w.topDegree : w.topDegree - 2;
      for (int j = 0; j < levels; ++j) {
        const int q = first - 4 * j;
        const int ell = levels - j;
        const ExactScalar v = weightEigen(w, wc.table, ell);
        if (w.coefficient(q).sign() > 0)
          EXPECT_TRUE(v.isZero()) << d << " n=" << w.n << " q=" << q;
        else
          EXPECT_LE(v.sign(), 0) << d << " n=" << w.n << " q=" << q;
      }
    }
  }
}

TEST(Weights, SumCondition) {
  const WeightConstruction wc = constructWeights(10, mpq_class(1, 1000000), 2);
  EXPECT_TRUE(sumConditionHolds(wc.weights, wc.weightGrade));
  auto broken = wc.weights;
  broken.pop_back();
  EXPECT_FALSE(sumConditionHolds(broken, wc.weightGrade));
  auto twoDeltas = wc.weights;
  twoDeltas[1].hasDelta = true;
  EXPECT_FALSE(sumConditionHolds(twoDeltas, wc.weightGrade));
}

TEST(Weights, GradeMismatchRejected) {
  WeightSpec w = cert8().weights[0].spec;
  w.setCoefficient(2, ExactScalar(mpq_class(1), {1, 0}));
  EXPECT_THROW(weightPolynomial(w, cert8().weightGrade), GradeMismatch);
  EXPECT_THROW(w.setCoefficient(3, ExactScalar()), std::out_of_range);
}

TEST(Weights, ShiftIsNearMinimal) {
  const SchemeOptions opts;
  for (int d : {8, 9, 12}) {
    const WeightConstruction wc = constructWeights(d, opts.tol, 2);
    for (const auto& w : wc.weights) {
      const ExactPoly p = weightPolynomial(w, wc.weightGrade);
      EXPECT_TRUE(sturmNonnegOn(p.plusConstant(w.c0), kAdmLo, kAdmHi).holds);
      if (sgn(w.c0) > 0) {
        EXPECT_FALSE(sturmNonnegOn(p.plusConstant(w.c0 - opts.tol), kAdmLo, kAdmHi).holds);
      }
    }
  }
}

TEST(Verify, DetectsTampering) {
  {
    Certificate c = cert8();
    auto& w = c.weights[0].spec;
    w.setCoefficient(2, w.coefficient(2) + ExactScalar(mpq_class(1), c.weightGrade));
    EXPECT_FALSE(verifyCertificate(c).valid);
  }
  {
    Certificate c = cert8();
    c.weights[2].spec.c0 += 1;
    const auto r = verifyCertificate(c);
    EXPECT_FALSE(r.valid);
    EXPECT_NE(r.failures.front().find("a_star"), std::string::npos);
  }
  {
    Certificate c = cert8();
    c.weights[1].eig[0].value = ExactScalar(mpq_class(-1), c.weightGrade);
    const auto r = verifyCertificate(c);
    EXPECT_FALSE(r.valid);
    EXPECT_NE(r.failures.front().find("Eig"), std::string::npos);
  }
  {
    Certificate c = cert8();
    c.deltaEigen[3].nonpositive = !c.deltaEigen[3].nonpositive;
    EXPECT_FALSE(verifyCertificate(c).valid);
  }
  {
    Certificate c = cert8();
    c.weights[0].spec.terms[0].sign = 1;
    EXPECT_FALSE(verifyCertificate(c).valid);
  }
}

TEST(Verify, ShiftBelowMinimumFailsAdm) {
  Certificate c = cert8();
  const mpq_class drop = 2 * SchemeOptions{}.tol;
  c.weights[0].spec.c0 -= drop;
  c.aStar = ExactScalar(c.aStar.coeff() - drop, c.aStar.grade());
  const auto r = verifyCertificate(c);
  ASSERT_FALSE(r.valid);
  bool sawAdm = false;
  for (const auto& f : r.failures) sawAdm = sawAdm || f.rfind("Adm:", 0) == 0;
  EXPECT_TRUE(sawAdm);
}

TEST(Verify, LargerShiftsStayValid) {
  for (int d : {8, 9}) {
    Certificate c = computeAStar(d);
    mpq_class total = 0;
    for (auto& rec : c.weights) {
      rec.spec.c0 += 1;
      total += rec.spec.c0;
    }
    c.aStar = ExactScalar(total, c.weightGrade);
    EXPECT_TRUE(verifyCertificate(c).valid) << d;
  }
}

TEST(Verify, EigNonpositiveAcrossDimensions) {
  for (int d = 8; d <= 24; ++d) {
    const Certificate c = computeAStar(d);
    EXPECT_TRUE(c.sumConditionOk) << d;
    for (const auto& rec : c.weights)
      for (const auto& e : rec.eig) EXPECT_TRUE(e.nonpositive) << d << " n=" << rec.spec.n << " l=" << e.ell;
    EXPECT_GT(c.aStar.sign(), 0) << d;
    EXPECT_TRUE(verifyCertificate(c).valid) << d;
  }
}

TEST(Verify, Deterministic) {
  const Certificate a = computeAStar(10), b = computeAStar(10);
  EXPECT_EQ(a.aStar, b.aStar);
  EXPECT_EQ(a.aStarDecimal, b.aStarDecimal);
  for (std::size_t i = 0; i < a.weights.size(); ++i) EXPECT_EQ(a.weights[i].spec.c0, b.weights[i].spec.c0);
}
