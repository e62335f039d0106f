#pragma once

// Gegenbauer polynomials C_k^{nu}, nu = d/2 - 1, and the Funk-Hecke eigenvalues
//   lambda(k) = |S^{d-2}| / C_k(1) * int_{-1}^{1} K(t) C_k(t) (1-t^2)^{(d-3)/2} dt
// computed exactly through Beta-function moments.

#include <mutex>
#include <stdexcept>
#include <vector>

#include "sharpcert/kernels.hpp"
#include "sharpcert/polys.hpp"
#include "sharpcert/scalars.hpp"

namespace sharpcert {

/// Lazily extended Gegenbauer family for one dimension. Normalized by
/// C_0 = 1, C_1 = 2 nu t and  k C_k = 2t(k+nu-1) C_{k-1} - (k+2nu-2) C_{k-2}.
class GegenbauerBasis {
 public:
  explicit GegenbauerBasis(int d) : d_(d), nu_(d - 2, 2) {
    requireDimension(d);
    nu_.canonicalize();
  }

  int dimension() const { return d_; }
  const mpq_class& nu() const { return nu_; }

  ExactPoly get(int k) {
    if (k < 0) throw std::invalid_argument("Gegenbauer degree must be >= 0");
    std::lock_guard lock(mutex_);
    while (static_cast<int>(polys_.size()) <= k) extend();
    return ExactPoly({}, polys_[static_cast<std::size_t>(k)], VarDomain::KernelT);
  }

 private:
  void extend() {
    std::size_t k = polys_.size();
    if (k == 0) {
      polys_.push_back({mpq_class(1)});
      return;
    }
    if (k == 1) {
      rpoly::Coeffs c{mpq_class(0), 2 * nu_};
      rpoly::trim(c);
      polys_.push_back(c);
      return;
    }
    const mpq_class kk(static_cast<long>(k));
    const rpoly::Coeffs twoT{mpq_class(0), mpq_class(2)};
    auto a = rpoly::scale(rpoly::mul(twoT, polys_[k - 1]), kk + nu_ - 1);
    auto b = rpoly::scale(polys_[k - 2], kk + 2 * nu_ - 2);
    polys_.push_back(rpoly::scale(rpoly::sub(a, b), 1 / kk));
  }

  int d_;
  mpq_class nu_;
  std::mutex mutex_;
  std::vector<rpoly::Coeffs> polys_;
};

inline ExactPoly gegenbauer(GegenbauerBasis& basis, int k) { return basis.get(k); }

/// C_k(1) > 0.
inline ExactScalar gegenbauerAtOne(GegenbauerBasis& basis, int k) {
  return basis.get(k).evalAt(mpq_class(1));
}

/// int_{-1}^{1} t^a (1-t^2)^{(d-3)/2} dt.
inline ExactScalar weightedMoment(int d, int a) {
  requireDimension(d);
  if (a < 0) throw std::invalid_argument("weightedMoment: a must be >= 0");
  if (a % 2 != 0) return {};
  return betaHalfInt(a + 1, d - 1);
}

namespace detail {

/// B(twoX/2, 1) = 2/twoX.
inline mpq_class betaWithOne(int twoX) {
  mpq_class r(2, twoX);
  r.canonicalize();
  return r;
}

/// int_{-1}^{1} t^m (1+t)^{h} dt with h = twoH/2, via s = (1+t)/2:
/// 2^{h+1} sum_i binom(m,i) 2^i (-1)^{m-i} B(i+h+1, 1).
inline ExactScalar powerTimesHalfPowerPlus(int m, int twoH) {
  ExactScalar acc;
  for (int i = 0; i <= m; ++i) {
    mpz_class c = binomial(m, i) << static_cast<unsigned>(i);
    if ((m - i) % 2 != 0) c = -c;
    acc += ExactScalar(mpq_class(c) * betaWithOne(2 * i + twoH + 2));
  }
  return ExactScalar::twoPowerHalf(twoH + 2) * acc;
}

/// int_{-1}^{1} t^m (1-t)^{h} dt with h = twoH/2, via s = (1-t)/2:
/// 2^{h+1} sum_i binom(m,i) (-2)^i B(i+h+1, 1).
inline ExactScalar powerTimesHalfPowerMinus(int m, int twoH) {
  ExactScalar acc;
  for (int i = 0; i <= m; ++i) {
    mpz_class c = binomial(m, i) << static_cast<unsigned>(i);
    if (i % 2 != 0) c = -c;
    acc += ExactScalar(mpq_class(c) * betaWithOne(2 * i + twoH + 2));
  }
  return ExactScalar::twoPowerHalf(twoH + 2) * acc;
}

}  // namespace detail

/// int_{-1}^{1} t^a (1-t)^{d-3} (1+t)^{(d-2)/2} dt, expanding (1-t)^{d-3} binomially.
inline ExactScalar mixedMoment(int d, int a) {
  requireDimension(d);
  if (a < 0) throw std::invalid_argument("mixedMoment: a must be >= 0");
  ExactScalar acc;
  for (int j = 0; j <= d - 3; ++j) {
    mpz_class c = binomial(d - 3, j);
    if (j % 2 != 0) c = -c;
    acc += ExactScalar(mpq_class(c)) * detail::powerTimesHalfPowerPlus(a + j, d - 2);
  }
  return acc;
}

/// Mirror image of mixedMoment: int_{-1}^{1} t^a (1-t)^{(d-2)/2} (1+t)^{d-3} dt,
/// computed independently by expanding (1+t)^{d-3}.
inline ExactScalar mixedMomentReflected(int d, int a) {
  requireDimension(d);
  if (a < 0) throw std::invalid_argument("mixedMomentReflected: a must be >= 0");
  ExactScalar acc;
  for (int j = 0; j <= d - 3; ++j)
    acc += ExactScalar(mpq_class(binomial(d - 3, j))) * detail::powerTimesHalfPowerMinus(a + j, d - 2);
  return acc;
}

/// Funk-Hecke eigenvalue of a polynomial zonal kernel K(t) on degree-k harmonics.
inline ExactScalar funkHeckeEigenPoly(const ExactPoly& K, int k, GegenbauerBasis& basis) {
  if (K.domain() != VarDomain::KernelT)
    throw std::invalid_argument("funkHeckeEigenPoly: kernel must be a polynomial in t");
  if (k < 0) throw std::invalid_argument("funkHeckeEigenPoly: k must be >= 0");
  const int d = basis.dimension();
  // C_k is orthogonal to every polynomial of lower degree.
  if (K.isZero() || k > K.degree()) return {};
  const ExactPoly ck = basis.get(k);
  ExactScalar integral;
  for (int a = 0; a <= K.degree(); ++a) {
    const auto& ka = K.coeffs()[static_cast<std::size_t>(a)];
    if (sgn(ka) == 0) continue;
    for (int b = 0; b <= ck.degree(); ++b) {
      const auto& cb = ck.coeffs()[static_cast<std::size_t>(b)];
      if (sgn(cb) == 0 || (a + b) % 2 != 0) continue;
      integral += ExactScalar(ka * cb) * weightedMoment(d, a + b);
    }
  }
  return ExactScalar(mpq_class(1), K.grade()) * sphereSurface(d - 1) / gegenbauerAtOne(basis, k) * integral;
}

inline ExactScalar funkHeckeEigenPoly(const ExactPoly& K, int k, int d) {
  GegenbauerBasis basis(d);
  return funkHeckeEigenPoly(K, k, basis);
}

/// The integral int (1-t)^{1/2} (1+t)^{(d-3)/2} C_k(t) (1-t^2)^{(d-3)/2} dt evaluated
/// after t -> -t, i.e. with sign-flipped odd coefficients against mixedMoment.
inline ExactScalar deltaIntegralFlipped(int k, GegenbauerBasis& basis) {
  const int d = basis.dimension();
  const ExactPoly ck = basis.get(k);
  ExactScalar acc;
  for (int b = 0; b <= ck.degree(); ++b) {
    mpq_class c = ck.coeffs()[static_cast<std::size_t>(b)];
    if (sgn(c) == 0) continue;
    if (b % 2 != 0) c = -c;
    acc += ExactScalar(c) * mixedMoment(d, b);
  }
  return acc;
}

/// The same integral in its original (1-t)^{1/2} orientation.
inline ExactScalar deltaIntegralDirect(int k, GegenbauerBasis& basis) {
  const int d = basis.dimension();
  const ExactPoly ck = basis.get(k);
  ExactScalar acc;
  for (int b = 0; b <= ck.degree(); ++b) {
    const auto& c = ck.coeffs()[static_cast<std::size_t>(b)];
    if (sgn(c) == 0) continue;
    acc += ExactScalar(c) * mixedMomentReflected(d, b);
  }
  return acc;
}

/// Eigenvalue lambda_1(k) of the delta-weight kernel, k even. For even k the
/// flipped integral equals int K_1(t) C_k(t) (1-t^2)^{(d-3)/2} dt / C_d.
inline ExactScalar eigenDeltaWeight(int k, GegenbauerBasis& basis) {
  if (k < 0 || k % 2 != 0) throw std::invalid_argument("eigenDeltaWeight: k must be even and >= 0");
  const int d = basis.dimension();
  const DeltaKernel K1 = deltaKernelClosedForm(d);
  return sphereSurface(d - 1) / gegenbauerAtOne(basis, k) * K1.constant * deltaIntegralFlipped(k, basis);
}

/// Batch form of eigenDeltaWeight for k = 0, 2, ..., kMax sharing the mixed moments.
inline std::vector<ExactScalar> eigenDeltaWeights(int kMax, GegenbauerBasis& basis) {
  const int d = basis.dimension();
  std::vector<ExactScalar> moments;
  for (int b = 0; b <= kMax; ++b) moments.push_back(mixedMoment(d, b));
  const ExactScalar prefactor = sphereSurface(d - 1) * deltaKernelClosedForm(d).constant;
  std::vector<ExactScalar> out;
  for (int k = 0; k <= kMax; k += 2) {
    const ExactPoly ck = basis.get(k);
    ExactScalar acc;
    for (int b = 0; b <= ck.degree(); b += 2) {
      const auto& c = ck.coeffs()[static_cast<std::size_t>(b)];
      if (sgn(c) != 0) acc += ExactScalar(c) * moments[static_cast<std::size_t>(b)];
    }
    out.push_back(prefactor / gegenbauerAtOne(basis, k) * acc);
  }
  return out;
}

inline ExactScalar eigenDeltaWeight(int k, int d) {
  GegenbauerBasis basis(d);
  return eigenDeltaWeight(k, basis);
}

}  // namespace sharpcert
