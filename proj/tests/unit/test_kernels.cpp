#include <gtest/gtest.h>

#include "sharpcert/kernels.hpp"
#include "sharpcert/specfun.hpp"

using namespace sharpcert;

namespace {

ExactScalar pi(int power) { return ExactScalar(mpq_class(1), {0, 2 * power}); }
ExactScalar rat(long n, long d = 1) { return ExactScalar(mpq_class(n, d)); }

ExactPoly tpoly(const std::vector<ExactScalar>& c) { return ExactPoly::fromScalars(c, VarDomain::KernelT); }

}  // namespace

TEST(RadialMoment, Values) {
  EXPECT_EQ(radialMoment(3, 0), rat(2));
  EXPECT_EQ(radialMoment(3, 2), rat(8, 3));
  EXPECT_EQ(radialMoment(4, 1), rat(8, 3));
  EXPECT_THROW(radialMoment(2, 0), std::invalid_argument);
}

TEST(SigmaConvConstant, Values) {
  EXPECT_EQ(sigmaConvConstant(3), rat(2) * pi(1));
  // Exact value at d = 4 is also 2 pi (pi_half = 2).
  EXPECT_EQ(sigmaConvConstant(4), rat(2) * pi(1));
  for (int d = 3; d <= 24; ++d) EXPECT_GT(sigmaConvConstant(d).sign(), 0) << d;
}

TEST(DirectionalSphereMoment, Values) {
  for (int d = 3; d <= 12; ++d) EXPECT_EQ(directionalSphereMoment(d, 0), sphereSurface(d));
  EXPECT_EQ(directionalSphereMoment(3, 2), rat(4, 3) * pi(1));
  EXPECT_EQ(directionalSphereMoment(4, 2), rat(1, 2) * pi(2));
  for (int d = 3; d <= 12; ++d) EXPECT_EQ(directionalSphereMoment(d, 2), sphereSurface(d) / rat(d));
  EXPECT_TRUE(directionalSphereMoment(5, 3).isZero());
}

TEST(MomentTable, Values) {
  for (int d = 3; d <= 16; ++d) {
    MomentTable table(d);
    EXPECT_EQ(table.get(0, 0), pow(sphereSurface(d), 2)) << d;
    for (int J = 0; J <= 4; ++J) {
      EXPECT_TRUE(table.get(J, 3).isZero());
      EXPECT_GT(table.get(J, 4).sign(), 0);
    }
  }
  MomentTable t3(3);
  EXPECT_EQ(doubleSphereMoment(t3, 1, 0), rat(32) * pi(2));
  EXPECT_THROW(t3.get(-1, 0), std::invalid_argument);
}

TEST(MomentTable, CachesEntries) {
  MomentTable t(6);
  const auto a = t.get(2, 2);
  const auto size = t.size();
  EXPECT_EQ(t.get(2, 2), a);
  EXPECT_EQ(t.size(), size);
}

TEST(DeltaKernel, Constant) {
  const DeltaKernel k3 = deltaKernelClosedForm(3);
  EXPECT_EQ(k3.constant, ExactScalar(mpq_class(3, 2), {1, 2}));
  EXPECT_EQ(k3.constant.grade().sqrt2, 1);
  EXPECT_EQ(deltaKernelClosedForm(4).constant.grade().sqrt2, 0);
  for (int d = 3; d <= 24; ++d) EXPECT_GT(deltaKernelClosedForm(d).constant.sign(), 0);
}

TEST(MagicalKernel, ZerothKernel) {
  for (int d = 3; d <= 16; ++d) {
    MomentTable table(d);
    const ExactScalar mass = pow(sphereSurface(d), 2);
    EXPECT_EQ(magicalKernelPoly(table, 0), tpoly({mass, mass * rat(1, 2)})) << d;
  }
}

TEST(MagicalKernel, FirstKernelThreeDimensions) {
  MomentTable table(3);
  const ExactPoly expected = tpoly({rat(176, 3) * pi(2), rat(160, 3) * pi(2), rat(16) * pi(2)});
  EXPECT_EQ(magicalKernelPoly(table, 1), expected);
}

TEST(MagicalKernel, DegreeAndLeadingCoefficient) {
  for (int d = 3; d <= 12; ++d) {
    MomentTable table(d);
    const ExactScalar mass = pow(sphereSurface(d), 2);
    for (int m = 0; m <= 8; ++m) {
      const ExactPoly K = magicalKernelPoly(table, m);
      EXPECT_EQ(K.degree(), m + 1);
      EXPECT_EQ(K.leading(), ExactScalar::twoPowerHalf(2 * (m - 1)) * mass) << "d=" << d << " m=" << m;
    }
  }
}

TEST(MagicalKernel, ExpansionSumsAddUp) {
  MomentTable table(5);
  const auto e = magicalKernelSums(table, 3);
  EXPECT_EQ(collapseAlpha(e.first) + collapseAlpha(e.second) + collapseAlpha(e.third), magicalKernelPoly(table, 3));
  EXPECT_FALSE(e.third.empty());
}

TEST(NonmagicalKernel, Values) {
  MomentTable t3(3);
  const ExactScalar mass = pow(sphereSurface(3), 2);
  EXPECT_EQ(nonmagicalKernelPoly(t3, 0), tpoly({mass}));
  EXPECT_EQ(nonmagicalKernelPoly(t3, 1), tpoly({rat(2) * mass + rat(32) * pi(2), rat(2) * mass}));
  EXPECT_EQ(nonmagicalKernelPoly(t3, 1), tpoly({rat(64) * pi(2), rat(32) * pi(2)}));
  for (int d = 3; d <= 10; ++d) {
    MomentTable table(d);
    for (int m = 0; m <= 8; ++m) {
      const ExactPoly L = nonmagicalKernelPoly(table, m);
      EXPECT_EQ(L.degree(), m);
      EXPECT_GT(L.leading().sign(), 0);
    }
  }
}

TEST(KernelEigenvalues, SignPatternSmallRange) {
  for (int d : {3, 4, 7, 10}) {
    MomentTable table(d);
    GegenbauerBasis basis(d);
    for (int m = 0; m <= 6; ++m) {
      const ExactPoly K = magicalKernelPoly(table, m);
      const ExactPoly L = nonmagicalKernelPoly(table, m);
      for (int k = 0; k <= 2 * m + 6; k += 2) {
        const ExactScalar lam = funkHeckeEigenPoly(K, k, basis);
        const ExactScalar mu = funkHeckeEigenPoly(L, k, basis);
        if (k > m + 1) {
          EXPECT_TRUE(lam.isZero());
        }
        if (k == m + 1) {
          EXPECT_GT(lam.sign(), 0);
        }
        if (k > m) {
          EXPECT_TRUE(mu.isZero());
        }
        if (k == m) {
          EXPECT_GT(mu.sign(), 0);
        }
      }
    }
  }
}
