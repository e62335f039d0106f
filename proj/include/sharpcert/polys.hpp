#pragma once

// Exact univariate polynomials over one radical grade, plus Sturm-sequence
// certification of nonnegativity on an interval.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sharpcert/scalars.hpp"

namespace sharpcert {

/// Coefficient vectors over Q, index = degree, no trailing zeros.
namespace rpoly {

using Coeffs = std::vector<mpq_class>;

inline void trim(Coeffs& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline int degree(const Coeffs& p) { return static_cast<int>(p.size()) - 1; }

inline mpq_class eval(const Coeffs& p, const mpq_class& x) {
  mpq_class acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline int signAt(const Coeffs& p, const mpq_class& x) { return sgn(eval(p, x)); }

inline Coeffs add(const Coeffs& a, const Coeffs& b) {
  Coeffs r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

inline Coeffs scale(const Coeffs& a, const mpq_class& c) {
  if (sgn(c) == 0) return {};
  Coeffs r = a;
  for (auto& x : r) x *= c;
  return r;
}

inline Coeffs sub(const Coeffs& a, const Coeffs& b) { return add(a, scale(b, -1)); }

inline Coeffs mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

inline Coeffs derivative(const Coeffs& p) {
  if (p.size() <= 1) return {};
  Coeffs r(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * static_cast<long>(i);
  trim(r);
  return r;
}

/// Euclidean division a = q*b + r with deg r < deg b.
inline std::pair<Coeffs, Coeffs> divmod(const Coeffs& a, const Coeffs& b) {
  if (b.empty()) throw DivisionByZero("polynomial division by zero");
  Coeffs r = a, q;
  trim(r);
  int db = degree(b);
  if (degree(r) >= db) q.assign(static_cast<std::size_t>(degree(r) - db + 1), mpq_class(0));
  while (!r.empty() && degree(r) >= db) {
    int shift = degree(r) - db;
    mpq_class c = r.back() / b.back();
    q[static_cast<std::size_t>(shift)] = c;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(i + shift)] -= c * b[static_cast<std::size_t>(i)];
    r.pop_back();
    trim(r);
  }
  trim(q);
  return {q, r};
}

/// Positive rescaling to a primitive integer polynomial; preserves signs and roots.
inline Coeffs primitive(const Coeffs& p) {
  if (p.empty()) return {};
  mpz_class l(1), g(0);
  for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  Coeffs r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i] = p[i] * l;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r[i].get_num_mpz_t());
  }
  if (g != 0)
    for (auto& c : r) c /= g;
  return r;
}

inline Coeffs gcd(Coeffs a, Coeffs b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = primitive(r);
  }
  if (a.empty()) return a;
  return scale(a, 1 / a.back());
}

/// p / gcd(p, p'): same distinct roots, all simple.
inline Coeffs squarefree(const Coeffs& p) {
  if (degree(p) <= 0) return p;
  Coeffs g = gcd(p, derivative(p));
  if (degree(g) <= 0) return p;
  return divmod(p, g).first;
}

/// Composition p(q(x)).
inline Coeffs compose(const Coeffs& p, const Coeffs& q) {
  Coeffs acc;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = add(mul(acc, q), Coeffs{*it});
  return acc;
}

}  // namespace rpoly

enum class VarDomain {
  KernelT,  ///< t in [-1, 1]
  WeightU,  ///< u = |xi|^2 in [0, 16]
};

/// Polynomial whose coefficients are rationals times one shared radical grade.
class ExactPoly {
 public:
  ExactPoly() = default;

  ExactPoly(Grade grade, rpoly::Coeffs coeffs, VarDomain domain = VarDomain::KernelT)
      : grade_(grade), coeffs_(std::move(coeffs)), domain_(domain) {
    canonicalize();
  }

  /// Builds from exact scalar coefficients; nonzero entries must share a grade.
  static ExactPoly fromScalars(const std::vector<ExactScalar>& cs,
                               VarDomain domain = VarDomain::KernelT) {
    std::optional<Grade> g;
    rpoly::Coeffs q(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (cs[i].isZero()) continue;
      if (g && *g != cs[i].grade()) {
        throw GradeMismatch("mixed grades in polynomial coefficients: (" + to_string(*g) +
                            ") vs (" + to_string(cs[i].grade()) + ")");
      }
      g = cs[i].grade();
      q[i] = cs[i].coeff();
    }
    return ExactPoly(g.value_or(Grade{}), std::move(q), domain);
  }

  static ExactPoly monomial(int deg, VarDomain domain = VarDomain::KernelT) {
    rpoly::Coeffs c(static_cast<std::size_t>(deg + 1));
    c.back() = 1;
    return ExactPoly({}, std::move(c), domain);
  }

  Grade grade() const { return grade_; }
  VarDomain domain() const { return domain_; }
  const rpoly::Coeffs& coeffs() const { return coeffs_; }
  bool isZero() const { return coeffs_.empty(); }
  int degree() const { return rpoly::degree(coeffs_); }

  ExactScalar coefficient(int i) const {
    if (i < 0 || i > degree()) return {};
    return ExactScalar(coeffs_[static_cast<std::size_t>(i)], grade_);
  }
  ExactScalar leading() const { return isZero() ? ExactScalar() : coefficient(degree()); }

  /// Exact value at a rational point.
  ExactScalar evalAt(const ExactScalar& x) const {
    if (!x.isRational()) throw GradeMismatch("polynomial evaluation requires a rational point");
    return ExactScalar(rpoly::eval(coeffs_, x.coeff()), grade_);
  }
  ExactScalar evalAt(const mpq_class& x) const { return ExactScalar(rpoly::eval(coeffs_, x), grade_); }

  friend ExactPoly operator+(const ExactPoly& a, const ExactPoly& b) {
    if (a.isZero()) return b;
    if (b.isZero()) return a;
    if (a.grade_ != b.grade_) {
      throw GradeMismatch("cannot add polynomials of grades (" + to_string(a.grade_) + ") and (" +
                          to_string(b.grade_) + ")");
    }
    return ExactPoly(a.grade_, rpoly::add(a.coeffs_, b.coeffs_), a.domain_);
  }

  ExactPoly operator-() const { return ExactPoly(grade_, rpoly::scale(coeffs_, -1), domain_); }
  friend ExactPoly operator-(const ExactPoly& a, const ExactPoly& b) { return a + (-b); }

  friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
    if (a.isZero() || b.isZero()) return ExactPoly({}, {}, a.domain_);
    ExactScalar unit = ExactScalar(mpq_class(1), a.grade_) * ExactScalar(mpq_class(1), b.grade_);
    return ExactPoly(unit.grade(), rpoly::scale(rpoly::mul(a.coeffs_, b.coeffs_), unit.coeff()),
                     a.domain_);
  }

  ExactPoly scale(const ExactScalar& c) const {
    if (c.isZero() || isZero()) return ExactPoly({}, {}, domain_);
    ExactScalar unit = ExactScalar(mpq_class(1), grade_) * c;
    return ExactPoly(unit.grade(), rpoly::scale(coeffs_, unit.coeff()), domain_);
  }

  ExactPoly derivative() const { return ExactPoly(grade_, rpoly::derivative(coeffs_), domain_); }

  /// Adds a constant expressed in this polynomial's grade units.
  ExactPoly plusConstant(const mpq_class& c) const {
    return ExactPoly(grade_, rpoly::add(coeffs_, rpoly::Coeffs{c}), domain_);
  }

  friend bool operator==(const ExactPoly& a, const ExactPoly& b) {
    return a.grade_ == b.grade_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void canonicalize() {
    for (auto& c : coeffs_) c.canonicalize();
    rpoly::trim(coeffs_);
    if (coeffs_.empty()) {
      grade_ = {};
      return;
    }
    // Fold even sqrt(2) powers into the coefficients.
    ExactScalar unit(mpq_class(1), grade_);
    if (unit.grade() != grade_) {
      for (auto& c : coeffs_) c *= unit.coeff();
      grade_ = unit.grade();
    }
  }

  Grade grade_{};
  rpoly::Coeffs coeffs_;
  VarDomain domain_ = VarDomain::KernelT;
};

/// Closed rational interval [lo, hi]; lo == hi for an exact point.
struct RationalInterval {
  mpq_class lo;
  mpq_class hi;
  bool isPoint() const { return lo == hi; }
};

struct NonnegCertificate {
  bool holds = false;
  /// Valid lower bound for the minimum over the interval (when holds).
  mpq_class lowerBound;
  /// A subinterval on which the polynomial is negative (when !holds).
  std::optional<RationalInterval> witness;
};

/// Sturm sequence of a squarefree rational polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const rpoly::Coeffs& squarefreePoly) {
    seq_.push_back(rpoly::primitive(squarefreePoly));
    if (rpoly::degree(squarefreePoly) <= 0) return;
    seq_.push_back(rpoly::primitive(rpoly::derivative(squarefreePoly)));
    while (rpoly::degree(seq_.back()) > 0) {
      auto r = rpoly::divmod(seq_[seq_.size() - 2], seq_.back()).second;
      if (r.empty()) break;
      seq_.push_back(rpoly::primitive(rpoly::scale(r, -1)));
    }
  }

  /// Sign variations at x, zeros skipped.
  int variations(const mpq_class& x) const {
    int count = 0, last = 0;
    for (const auto& p : seq_) {
      int s = rpoly::signAt(p, x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  const rpoly::Coeffs& base() const { return seq_.front(); }

 private:
  std::vector<rpoly::Coeffs> seq_;
};

/// Isolates every distinct real root of p in [lo, hi]. Each returned interval
/// holds exactly one root; exact rational roots come back as points. Non-point
/// enclosures have roots strictly inside and are no wider than maxWidth (when given).
inline std::vector<RationalInterval> isolateRoots(const rpoly::Coeffs& p, const mpq_class& lo,
                                                  const mpq_class& hi,
                                                  const std::optional<mpq_class>& maxWidth = {}) {
  std::vector<RationalInterval> out;
  if (p.empty() || rpoly::degree(p) == 0 || lo > hi) return out;
  rpoly::Coeffs q = rpoly::squarefree(p);
  SturmSequence sturm(q);
  const auto& base = sturm.base();
  auto isRoot = [&](const mpq_class& x) { return rpoly::signAt(base, x) == 0; };

  // Roots strictly inside (a, b).
  auto openCount = [&](const mpq_class& a, const mpq_class& b) {
    return sturm.variations(a) - sturm.variations(b) - (isRoot(b) ? 1 : 0);
  };

  auto recurse = [&](auto&& self, const mpq_class& a, const mpq_class& b, int n) -> void {
    if (n <= 0) return;
    if (n == 1 && (!maxWidth || b - a <= *maxWidth)) {
      // Shrink until neither endpoint is a root, so each side of the
      // enclosed root has a sign-carrying endpoint.
      mpq_class x = a, y = b;
      while (isRoot(x) || isRoot(y)) {
        mpq_class mid = (x + y) / 2;
        if (isRoot(mid)) {
          out.push_back({mid, mid});
          return;
        }
        if (openCount(x, mid) == 1)
          y = mid;
        else
          x = mid;
      }
      out.push_back({x, y});
      return;
    }
    mpq_class mid = (a + b) / 2;
    if (isRoot(mid)) {
      int left = openCount(a, mid);
      self(self, a, mid, left);
      out.push_back({mid, mid});
      self(self, mid, b, n - left - 1);
    } else {
      int left = openCount(a, mid);
      self(self, a, mid, left);
      self(self, mid, b, n - left);
    }
  };

  if (isRoot(lo)) out.push_back({lo, lo});
  if (lo < hi) {
    recurse(recurse, lo, hi, openCount(lo, hi));
    if (isRoot(hi)) out.push_back({hi, hi});
  }
  return out;
}

namespace detail {

/// Upper bound of sum |c_i| R^i, with R = max(|lo|, |hi|): bounds |p| on [lo, hi].
inline mpq_class magnitudeBound(const rpoly::Coeffs& p, const mpq_class& lo, const mpq_class& hi) {
  mpq_class R = std::max(abs(lo), abs(hi));
  mpq_class acc(0), pw(1);
  for (const auto& c : p) {
    acc += abs(c) * pw;
    pw *= R;
  }
  return acc;
}

struct MinBound {
  mpq_class value;
  bool exact = false;  ///< value is the true minimum
};

/// Certified lower bound on min p over [lo, hi], within `slack` of the true minimum.
inline MinBound certifiedMinLowerBound(const rpoly::Coeffs& p, const mpq_class& lo,
                                       const mpq_class& hi, const mpq_class& slack) {
  if (p.empty()) return {0, true};
  rpoly::Coeffs dp = rpoly::derivative(p);
  mpq_class derivBound = magnitudeBound(dp, lo, hi);
  // A point enclosure [a, b] of a critical point gives min >= p(a) - (b-a)*M,
  // which is within 2(b-a)M of the true local minimum.
  mpq_class width = slack / (4 * (derivBound + 1));

  MinBound best{rpoly::eval(p, lo), true};
  auto consider = [&](const mpq_class& v, bool exact) {
    if (v < best.value || (v == best.value && exact)) best = {v, exact};
  };
  consider(rpoly::eval(p, hi), true);
  for (const auto& enc : isolateRoots(dp, lo, hi, width)) {
    if (enc.isPoint()) {
      consider(rpoly::eval(p, enc.lo), true);
    } else {
      mpq_class edge = std::min(rpoly::eval(p, enc.lo), rpoly::eval(p, enc.hi));
      consider(edge - (enc.hi - enc.lo) * derivBound, false);
    }
  }
  return best;
}

}  // namespace detail

/// Decides p >= 0 on [lo, hi] exactly, using the grade-stripped coefficients
/// (the shared radical factor is positive and does not affect signs).
inline NonnegCertificate sturmNonnegOn(const ExactPoly& p, const mpq_class& lo, const mpq_class& hi) {
  if (!(lo < hi)) throw std::invalid_argument("sturmNonnegOn: need lo < hi");
  NonnegCertificate cert;
  const auto& c = p.coeffs();
  if (c.empty()) {
    cert.holds = true;
    cert.lowerBound = 0;
    return cert;
  }

  // Between consecutive roots the sign is constant, and every such gap
  // contains one of these sample points.
  std::vector<mpq_class> points{lo, hi};
  for (const auto& enc : isolateRoots(c, lo, hi)) {
    points.push_back(enc.lo);
    points.push_back(enc.hi);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<mpq_class> samples = points;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) samples.push_back((points[i] + points[i + 1]) / 2);
  std::sort(samples.begin(), samples.end());

  for (const auto& x : samples) {
    if (rpoly::signAt(c, x) < 0) {
      cert.holds = false;
      cert.witness = RationalInterval{x, x};
      return cert;
    }
  }
  cert.holds = true;
  mpq_class span = hi - lo;
  mpq_class slack = (detail::magnitudeBound(c, lo, hi) + 1) / mpq_class(1L << 30) / (span + 1);
  auto mb = detail::certifiedMinLowerBound(c, lo, hi, slack);
  cert.lowerBound = std::max(mpq_class(0), mb.value);
  return cert;
}

/// Smallest certified c >= 0 (up to tol) with p + c >= 0 on [lo, hi], in the
/// grade-stripped units of p. Returns exactly 0 when p is already nonnegative.
inline mpq_class minimalShift(const ExactPoly& p, const mpq_class& lo, const mpq_class& hi,
                              const mpq_class& tol) {
  if (sgn(tol) <= 0) throw std::invalid_argument("minimalShift: tol must be positive");
  if (sturmNonnegOn(p, lo, hi).holds) return 0;
  mpq_class half = tol / 2;
  auto mb = detail::certifiedMinLowerBound(p.coeffs(), lo, hi, half);
  mpq_class c = -mb.value;
  if (!mb.exact) {
    // round up to the tol/2 grid
    mpq_class steps = c / half;
    mpz_class n;
    mpz_cdiv_q(n.get_mpz_t(), steps.get_num_mpz_t(), steps.get_den_mpz_t());
    c = mpq_class(n) * half;
  }
  if (!sturmNonnegOn(p.plusConstant(c), lo, hi).holds)
    throw std::logic_error("minimalShift: shifted polynomial failed certification");
  return c;
}

}  // namespace sharpcert
