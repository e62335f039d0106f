#pragma once

// Zonal kernels built from the two-sphere convolution measure sigma*sigma:
// the delta-weight kernel in closed form and the polynomial kernels
//   K_{2m}(w1.w2) = int |w1+w2+w3+w4|^{2m} M(w) dsigma(w3) dsigma(w4)
//   L_{2m}(w1.w2) = int |w1+w2+w3+w4|^{2m}      dsigma(w3) dsigma(w4)
// with M = (|w1+w2|^2 + |w3+w4|^2 - (w1+w2).(w3+w4)) / 4.

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sharpcert/polys.hpp"
#include "sharpcert/scalars.hpp"

namespace sharpcert {

inline void requireDimension(int d) {
  if (d < 3) throw std::invalid_argument("dimension must be >= 3, got " + std::to_string(d));
}

/// int_0^2 r^A (4 - r^2)^{(d-3)/2} dr = 2^{A+d-3} B((A+1)/2, (d-1)/2).
inline ExactScalar radialMoment(int d, int A) {
  requireDimension(d);
  if (A < 0) throw std::invalid_argument("radialMoment: A must be >= 0");
  return ExactScalar::twoPowerHalf(2 * (A + d - 3)) * betaHalfInt(A + 1, d - 1);
}

/// c_d in (sigma*sigma)(x) = c_d |x|^{-1} (4 - |x|^2)_+^{(d-3)/2}, fixed by total mass |S^{d-1}|^2.
inline ExactScalar sigmaConvConstant(int d) {
  requireDimension(d);
  return sphereSurface(d) / radialMoment(d, d - 2);
}

/// int_{S^{d-1}} (e.w)^K dsigma(w) for a unit vector e and even K.
inline ExactScalar directionalSphereMoment(int d, int K) {
  requireDimension(d);
  if (K < 0) throw std::invalid_argument("directionalSphereMoment: K must be >= 0");
  if (K % 2 != 0) return {};
  return sphereSurface(d - 1) * betaHalfInt(K + 1, d - 1);
}

/// Cache of the constants C(d,J,K) with
///   int int |w3+w4|^{2J} (eta.(w3+w4))^K dsigma dsigma = C(d,J,K) |eta|^K.
/// Thread-safe; concurrent misses may compute the same entry twice.
class MomentTable {
 public:
  explicit MomentTable(int d) : d_(d), cd_((requireDimension(d), sigmaConvConstant(d))) {}

  int dimension() const { return d_; }

  ExactScalar get(int J, int K) const {
    if (J < 0 || K < 0) throw std::invalid_argument("MomentTable: negative index");
    if (K % 2 != 0) return {};
    {
      std::lock_guard lock(mutex_);
      if (auto it = entries_.find({J, K}); it != entries_.end()) return it->second;
    }
    ExactScalar v = cd_ * directionalSphereMoment(d_, K) * radialMoment(d_, 2 * J + K + d_ - 2);
    std::lock_guard lock(mutex_);
    return entries_.emplace(std::pair{J, K}, v).first->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

 private:
  int d_;
  ExactScalar cd_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, int>, ExactScalar> entries_;
};

inline ExactScalar doubleSphereMoment(const MomentTable& table, int J, int K) { return table.get(J, K); }

/// K_1(t) = C_d (1+t)^{1/2} (1-t)^{(d-3)/2}.
struct DeltaKernel {
  int d = 0;
  ExactScalar constant;
};

/// On the support of delta(w1+..+w4), w3+w4 = -(w1+w2) and M = (3/4)|w1+w2|^2;
/// substituting |w1+w2|^2 = 2+2t into c_d |x|^{-1} (4-|x|^2)^{(d-3)/2} (3/4)|x|^2
/// gives C_d = (3/4) c_d 2^{(d-2)/2}.
inline DeltaKernel deltaKernelClosedForm(int d) {
  requireDimension(d);
  return {d, ExactScalar(mpq_class(3, 4)) * sigmaConvConstant(d) * ExactScalar::twoPowerHalf(d - 2)};
}

/// Polynomial in alpha = |w1+w2|^2, index = power of alpha.
using AlphaPoly = std::vector<ExactScalar>;

inline void addTerm(AlphaPoly& p, int power, const ExactScalar& c) {
  if (c.isZero()) return;
  if (static_cast<int>(p.size()) <= power) p.resize(static_cast<std::size_t>(power + 1));
  p[static_cast<std::size_t>(power)] += c;
}

inline mpz_class multinomial(int m, int i, int j, int k) {
  return factorial(m) / (factorial(i) * factorial(j) * factorial(k));
}

/// The three sums of the trinomial expansion of |sum w|^{2m} M, in powers of alpha:
///   first:  sum c * alpha^{i+1} int |x|^{2j}   (eta.x)^k
///   second: sum c * alpha^i     int |x|^{2j+2} (eta.x)^k
///   third: -sum c * alpha^i     int |x|^{2j}   (eta.x)^{k+1}
/// with c = multinomial(m; i,j,k) 2^{k-2}, x = w3+w4, and |eta|^K = alpha^{K/2}.
struct MagicalExpansion {
  AlphaPoly first;
  AlphaPoly second;
  AlphaPoly third;
};

inline MagicalExpansion magicalKernelSums(const MomentTable& table, int m) {
  if (m < 0) throw std::invalid_argument("magicalKernelSums: m must be >= 0");
  MagicalExpansion e;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; i + j <= m; ++j) {
      int k = m - i - j;
      ExactScalar c = ExactScalar(mpq_class(multinomial(m, i, j, k))) * ExactScalar::twoPowerHalf(2 * (k - 2));
      if (k % 2 == 0) {
        addTerm(e.first, i + 1 + k / 2, c * table.get(j, k));
        addTerm(e.second, i + k / 2, c * table.get(j + 1, k));
      } else {
        addTerm(e.third, i + (k + 1) / 2, -(c * table.get(j, k + 1)));
      }
    }
  }
  return e;
}

/// Substitutes alpha = 2 + 2t.
inline ExactPoly collapseAlpha(const AlphaPoly& p) {
  ExactPoly acc({}, {}, VarDomain::KernelT);
  const ExactPoly base({}, {mpq_class(2), mpq_class(2)}, VarDomain::KernelT);
  ExactPoly power({}, {mpq_class(1)}, VarDomain::KernelT);
  for (const auto& c : p) {
    acc = acc + power.scale(c);
    power = power * base;
  }
  return acc;
}

/// K_{2m}(t), a polynomial of degree m+1 with leading coefficient 2^{m-1}|S^{d-1}|^2.
inline ExactPoly magicalKernelPoly(const MomentTable& table, int m) {
  auto e = magicalKernelSums(table, m);
  return collapseAlpha(e.first) + collapseAlpha(e.second) + collapseAlpha(e.third);
}

/// L_{2m}(t), a polynomial of degree m.
inline ExactPoly nonmagicalKernelPoly(const MomentTable& table, int m) {
  if (m < 0) throw std::invalid_argument("nonmagicalKernelPoly: m must be >= 0");
  AlphaPoly p;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; i + j <= m; ++j) {
      int k = m - i - j;
      if (k % 2 != 0) continue;
      ExactScalar c = ExactScalar(mpq_class(multinomial(m, i, j, k))) * ExactScalar::twoPowerHalf(2 * k);
      addTerm(p, i + k / 2, c * table.get(j, k));
    }
  }
  return collapseAlpha(p);
}

}  // namespace sharpcert
