#pragma once

// Rigorous interval quadrature of
//   int_{-1}^{1} P(t) (1-t)^{a/2} (1+t)^{b/2} dt
// for a rational polynomial P and integers a, b >= 0. Each half of [-1,1] is
// mapped by t = +-(1-s^2), which turns the integrand into Q(s) (2-s^2)^{c/2}
// with Q polynomial, and [0,1] in s is integrated with interval Taylor models.

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "sharpcert/interval.hpp"
#include "sharpcert/kernels.hpp"
#include "sharpcert/polys.hpp"
#include "sharpcert/scalars.hpp"

namespace sharpcert::oracle {

class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// C_k^{nu}(t) from the explicit sum
///   sum_j (-1)^j (nu)_{k-j} / (j! (k-2j)!) (2t)^{k-2j},  nu = d/2 - 1.
inline rpoly::Coeffs gegenbauerExplicit(int d, int k) {
  requireDimension(d);
  if (k < 0) throw std::invalid_argument("gegenbauerExplicit: k must be >= 0");
  const mpq_class nu(d - 2, 2);
  rpoly::Coeffs c(static_cast<std::size_t>(k + 1));
  for (int j = 0; 2 * j <= k; ++j) {
    mpq_class rising = 1;
    for (int i = 0; i < k - j; ++i) rising *= nu + i;
    mpq_class term = rising / mpq_class(factorial(j) * factorial(k - 2 * j));
    term *= mpq_class(mpz_class(1) << static_cast<unsigned>(k - 2 * j));
    if (j % 2 != 0) term = -term;
    c[static_cast<std::size_t>(k - 2 * j)] += term;
  }
  for (auto& x : c) x.canonicalize();
  rpoly::trim(c);
  return c;
}

namespace detail {

struct Integrand {
  rpoly::Coeffs q;  // polynomial part in s
  int twoC = 0;     // (2 - s^2)^{twoC/2}
};

/// The half t in [0,1] (right) or [-1,0] (left) after t = +-(1 - s^2).
inline Integrand substituteHalf(const rpoly::Coeffs& p, int twoA, int twoB, bool right) {
  // right: 1-t = s^2, 1+t = 2-s^2, |dt| = 2s ds; left: 1+t = s^2, 1-t = 2-s^2.
  const rpoly::Coeffs inner = right ? rpoly::Coeffs{1, 0, -1} : rpoly::Coeffs{-1, 0, 1};
  const int sPower = (right ? twoA : twoB) + 1;
  rpoly::Coeffs monomial(static_cast<std::size_t>(sPower + 1));
  monomial.back() = 2;
  return {rpoly::mul(monomial, rpoly::compose(p, inner)), right ? twoB : twoA};
}

/// Taylor coefficients of Q at x (x may be a whole interval): Q^{(i)}(x)/i!, i < n.
inline std::vector<IntervalScalar> polyTaylor(const rpoly::Coeffs& q, const IntervalScalar& x, int n,
                                              mpfr_prec_t prec) {
  std::vector<IntervalScalar> out;
  for (int i = 0; i < n; ++i) {
    IntervalScalar acc(prec);
    for (int j = rpoly::degree(q); j >= i; --j) {
      acc = acc * x + IntervalScalar::fromRational(q[static_cast<std::size_t>(j)] * mpq_class(binomial(j, i)), prec);
    }
    out.push_back(acc);
  }
  return out;
}

/// Taylor coefficients of (2 - s^2)^{twoC/2} at x, via
///   f_n = 1/(n g_0) sum_{j=1}^{n} ((alpha+1) j - n) g_j f_{n-j}.
inline std::vector<IntervalScalar> powerTaylor(int twoC, const IntervalScalar& x, int n, mpfr_prec_t prec) {
  const IntervalScalar g0 = IntervalScalar::fromInt(2, prec) - x.square();
  const IntervalScalar g1 = IntervalScalar::fromInt(-2, prec) * x;
  const IntervalScalar g2 = IntervalScalar::fromInt(-1, prec);
  std::vector<IntervalScalar> f;
  IntervalScalar f0 = g0.pow(static_cast<unsigned>(twoC / 2));
  if (twoC % 2 != 0) f0 = f0 * g0.sqrt();
  f.push_back(f0);
  const mpq_class alpha(twoC, 2);
  for (int m = 1; m < n; ++m) {
    IntervalScalar acc(prec);
    for (int j = 1; j <= std::min(m, 2); ++j) {
      const IntervalScalar& gj = j == 1 ? g1 : g2;
      const IntervalScalar w = IntervalScalar::fromRational((alpha + 1) * j - m, prec);
      acc += w * gj * f[static_cast<std::size_t>(m - j)];
    }
    f.push_back(acc / (IntervalScalar::fromInt(m, prec) * g0));
  }
  return f;
}

inline std::vector<IntervalScalar> productTaylor(const Integrand& g, const IntervalScalar& x, int n,
                                                 mpfr_prec_t prec) {
  auto a = polyTaylor(g.q, x, n, prec);
  auto b = powerTaylor(g.twoC, x, n, prec);
  std::vector<IntervalScalar> out;
  for (int i = 0; i < n; ++i) {
    IntervalScalar acc(prec);
    for (int j = 0; j <= i; ++j)
      acc += a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(i - j)];
    out.push_back(acc);
  }
  return out;
}

/// Enclosure of the integral over [lo, hi]: the order-n Taylor polynomial at the
/// midpoint plus the n-th coefficient over the whole piece times int (s-c)^n.
inline IntervalScalar pieceEnclosure(const Integrand& g, const mpq_class& lo, const mpq_class& hi, int order,
                                     mpfr_prec_t prec) {
  const mpq_class c = (lo + hi) / 2;
  const mpq_class r = (hi - lo) / 2;
  const IntervalScalar mid = IntervalScalar::fromRational(c, prec);
  const IntervalScalar whole = IntervalScalar::hull(lo, hi, prec);
  auto coeffs = productTaylor(g, mid, order, prec);
  auto remainder = productTaylor(g, whole, order + 1, prec);
  IntervalScalar acc(prec);
  mpq_class rp = r;  // r^{i+1}
  for (int i = 0; i <= order; ++i) {
    if (i % 2 == 0) {
      const IntervalScalar moment = IntervalScalar::fromRational(2 * rp / (i + 1), prec);
      acc += (i < order ? coeffs[static_cast<std::size_t>(i)] : remainder[static_cast<std::size_t>(order)]) * moment;
    }
    rp *= r;
  }
  return acc;
}

inline mpq_class magnitude(const Integrand& g) {
  mpq_class s = 0;
  for (const auto& c : g.q) s += abs(c);
  // |s| <= 1 and 1 <= 2 - s^2 <= 2 on [0,1]
  mpq_class bound = 1;
  for (int i = 0; i < (g.twoC + 1) / 2; ++i) bound *= 2;
  return s * bound + 1;
}

inline IntervalScalar integrateUnit(const Integrand& g, mpfr_prec_t prec) {
  if (g.q.empty()) return IntervalScalar(prec);
  constexpr int kOrder = 24;
  const long tolExp = static_cast<long>(prec) - 32;
  mpq_class eps = magnitude(g);
  eps /= mpq_class(mpz_class(1) << static_cast<unsigned>(tolExp));
  const mpq_class minWidth(1, mpz_class(1) << 40);

  IntervalScalar total(prec);
  std::vector<std::pair<mpq_class, mpq_class>> stack{{mpq_class(0), mpq_class(1)}};
  int pieces = 0;
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    IntervalScalar e = pieceEnclosure(g, lo, hi, kOrder, prec);
    if (e.width().upperRational() <= eps * (hi - lo)) {
      total += e;
      continue;
    }
    if (hi - lo < minWidth || ++pieces > 200000)
      throw PrecisionExhausted("quadrature target width unreachable at " + std::to_string(prec) + " bits");
    const mpq_class mid = (lo + hi) / 2;
    stack.push_back({mid, hi});
    stack.push_back({lo, mid});
  }
  return total;
}

}  // namespace detail

/// Enclosure of int_{-1}^{1} P(t) (1-t)^{twoA/2} (1+t)^{twoB/2} dt.
inline IntervalScalar quadIntegral(const rpoly::Coeffs& p, int twoA, int twoB, int precisionBits) {
  if (precisionBits < 64) throw std::invalid_argument("quadrature needs at least 64 bits");
  if (twoA < 0 || twoB < 0) throw std::invalid_argument("quadrature exponents must be >= 0");
  const auto prec = static_cast<mpfr_prec_t>(precisionBits);
  return detail::integrateUnit(detail::substituteHalf(p, twoA, twoB, true), prec) +
         detail::integrateUnit(detail::substituteHalf(p, twoA, twoB, false), prec);
}

/// Which kernel an enclosure is computed for.
struct KernelDesc {
  enum class Kind { Polynomial, Delta };
  Kind kind = Kind::Polynomial;
  ExactPoly poly;

  static KernelDesc polynomial(ExactPoly k) { return {Kind::Polynomial, std::move(k)}; }
  static KernelDesc delta() { return {Kind::Delta, {}}; }
};

/// Interval enclosure of the Funk-Hecke eigenvalue of the kernel on degree-k harmonics.
inline IntervalScalar quadEigenEnclosure(const KernelDesc& kernel, int k, int d, int precisionBits) {
  requireDimension(d);
  if (precisionBits < 64) throw std::invalid_argument("quadrature needs at least 64 bits");
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  const rpoly::Coeffs ck = gegenbauerExplicit(d, k);
  const mpq_class ckAtOne = rpoly::eval(ck, 1);

  IntervalScalar integral(static_cast<mpfr_prec_t>(precisionBits));
  ExactScalar scale = sphereSurface(d - 1) / ExactScalar(ckAtOne);
  if (kernel.kind == KernelDesc::Kind::Polynomial) {
    // K(t) C_k(t) (1-t)^{(d-3)/2} (1+t)^{(d-3)/2}
    integral = quadIntegral(rpoly::mul(kernel.poly.coeffs(), ck), d - 3, d - 3, precisionBits);
    scale = scale * ExactScalar(mpq_class(1), kernel.poly.grade());
  } else {
    // C_d (1+t)^{1/2} (1-t)^{(d-3)/2} C_k(t) (1-t^2)^{(d-3)/2}
    integral = quadIntegral(ck, 2 * (d - 3), d - 2, precisionBits);
    scale = scale * deltaKernelClosedForm(d).constant;
  }
  return integral * toInterval(scale, precisionBits);
}

}  // namespace sharpcert::oracle
