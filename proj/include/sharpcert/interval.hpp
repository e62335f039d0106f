#pragma once

// Outward-rounded interval arithmetic on MPFR floats.

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "sharpcert/scalars.hpp"

namespace sharpcert {

/// A closed interval [lo, hi] of MPFR floats. Every operation rounds the
/// lower end down and the upper end up, so results enclose the exact value.
class IntervalScalar {
 public:
  explicit IntervalScalar(mpfr_prec_t prec = 128) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }

  IntervalScalar(const IntervalScalar& o) {
    mpfr_init2(lo_, o.precision());
    mpfr_init2(hi_, o.precision());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }

  IntervalScalar(IntervalScalar&& o) noexcept : IntervalScalar(o.precision()) { swap(o); }

  IntervalScalar& operator=(IntervalScalar o) noexcept {
    swap(o);
    return *this;
  }

  ~IntervalScalar() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  void swap(IntervalScalar& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }

  static IntervalScalar fromRational(const mpq_class& q, mpfr_prec_t prec) {
    IntervalScalar r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  static IntervalScalar fromInt(long v, mpfr_prec_t prec) {
    return fromRational(mpq_class(v), prec);
  }

  static IntervalScalar hull(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
    IntervalScalar r(prec);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  static IntervalScalar pi(mpfr_prec_t prec) {
    IntervalScalar r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }

  mpq_class lowerRational() const { return toQ(lo_); }
  mpq_class upperRational() const { return toQ(hi_); }

  /// Exact midpoint of the two endpoints.
  mpq_class center() const { return (lowerRational() + upperRational()) / 2; }

  /// Half-width, rounded up.
  double radius() const {
    mpfr_t w;
    mpfr_init2(w, precision());
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    mpfr_div_2ui(w, w, 1, MPFR_RNDU);
    double r = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return r;
  }

  bool contains(const mpq_class& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
  }
  bool contains(const IntervalScalar& o) const {
    return mpfr_cmp(lo_, o.lo_) <= 0 && mpfr_cmp(hi_, o.hi_) >= 0;
  }
  bool containsZero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  bool strictlyPositive() const { return mpfr_sgn(lo_) > 0; }
  bool strictlyNegative() const { return mpfr_sgn(hi_) < 0; }
  bool overlaps(const IntervalScalar& o) const {
    return mpfr_cmp(lo_, o.hi_) <= 0 && mpfr_cmp(o.lo_, hi_) <= 0;
  }

  double lowerDouble() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upperDouble() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double midDouble() const { return center().get_d(); }

  /// Decimal rendering of the midpoint with `digits` significant digits.
  std::string decimal(int digits = 30) const {
    mpfr_t m;
    mpfr_init2(m, precision() + 2);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    std::string s = format(m, digits);
    mpfr_clear(m);
    return s;
  }

  /// Endpoints rounded outward to `digits` significant digits.
  std::string lowerDecimal(int digits = 30) const { return format(lo_, digits, "%.*RDg"); }
  std::string upperDecimal(int digits = 30) const { return format(hi_, digits, "%.*RUg"); }

  std::string toString(int digits = 20) const {
    return "[" + format(lo_, digits) + ", " + format(hi_, digits) + "]";
  }

  friend IntervalScalar operator+(const IntervalScalar& a, const IntervalScalar& b) {
    IntervalScalar r(std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  friend IntervalScalar operator-(const IntervalScalar& a, const IntervalScalar& b) {
    IntervalScalar r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }

  IntervalScalar operator-() const {
    IntervalScalar r(precision());
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
  }

  friend IntervalScalar operator*(const IntervalScalar& a, const IntervalScalar& b) {
    mpfr_prec_t p = std::max(a.precision(), b.precision());
    IntervalScalar r(p);
    mpfr_t t;
    mpfr_init2(t, p);
    mpfr_srcptr as[2] = {a.lo_, a.hi_};
    mpfr_srcptr bs[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto x : as) {
      for (auto y : bs) {
        mpfr_mul(t, x, y, MPFR_RNDD);
        if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, x, y, MPFR_RNDU);
        if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
        first = false;
      }
    }
    mpfr_clear(t);
    return r;
  }

  friend IntervalScalar operator/(const IntervalScalar& a, const IntervalScalar& b) {
    if (b.containsZero()) throw DivisionByZero("interval division by an interval containing 0");
    IntervalScalar inv(b.precision());
    mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
    return a * inv;
  }

  IntervalScalar& operator+=(const IntervalScalar& o) { return *this = *this + o; }
  IntervalScalar& operator-=(const IntervalScalar& o) { return *this = *this - o; }
  IntervalScalar& operator*=(const IntervalScalar& o) { return *this = *this * o; }

  /// Tight square (nonnegative even when the interval straddles zero).
  IntervalScalar square() const {
    if (!containsZero()) return *this * *this;
    IntervalScalar r(precision());
    mpfr_t a, b;
    mpfr_init2(a, precision());
    mpfr_init2(b, precision());
    mpfr_sqr(a, lo_, MPFR_RNDU);
    mpfr_sqr(b, hi_, MPFR_RNDU);
    mpfr_max(r.hi_, a, b, MPFR_RNDU);
    mpfr_set_zero(r.lo_, 1);
    mpfr_clear(a);
    mpfr_clear(b);
    return r;
  }

  IntervalScalar sqrt() const {
    if (mpfr_sgn(hi_) < 0) throw std::domain_error("interval sqrt of a negative interval");
    IntervalScalar r(precision());
    if (mpfr_sgn(lo_) <= 0)
      mpfr_set_zero(r.lo_, 1);
    else
      mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  IntervalScalar abs() const {
    if (mpfr_sgn(lo_) >= 0) return *this;
    if (mpfr_sgn(hi_) <= 0) return -*this;
    IntervalScalar r(precision());
    mpfr_set_zero(r.lo_, 1);
    mpfr_t a;
    mpfr_init2(a, precision());
    mpfr_neg(a, lo_, MPFR_RNDU);
    mpfr_max(r.hi_, a, hi_, MPFR_RNDU);
    mpfr_clear(a);
    return r;
  }

  IntervalScalar pow(unsigned n) const {
    IntervalScalar r = fromInt(1, precision());
    IntervalScalar base = *this;
    while (n) {
      if (n & 1u) r *= base;
      n >>= 1u;
      if (n) base = base.square();
    }
    return r;
  }

  /// Symmetric widening [lo - e, hi + e] for e >= 0.
  IntervalScalar widened(const IntervalScalar& e) const {
    IntervalScalar r(precision());
    mpfr_sub(r.lo_, lo_, e.hi_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, e.hi_, MPFR_RNDU);
    return r;
  }

  /// Width hi - lo, rounded up, as an interval's upper endpoint.
  IntervalScalar width() const {
    IntervalScalar r(precision());
    mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
    mpfr_set(r.lo_, r.hi_, MPFR_RNDD);
    return r;
  }

  /// Upper bound of |x|.
  IntervalScalar magnitude() const {
    IntervalScalar a = abs();
    mpfr_set(a.lo_, a.hi_, MPFR_RNDD);
    return a;
  }

  /// True when upper(this) <= lower(o).
  bool certainlyLessEq(const IntervalScalar& o) const { return mpfr_cmp(hi_, o.lo_) <= 0; }

 private:
  static mpq_class toQ(mpfr_srcptr x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
  }

  static std::string format(mpfr_srcptr x, int digits, const char* spec = "%.*Rg") {
    char* buf = nullptr;
    mpfr_asprintf(&buf, spec, digits, x);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  mpfr_t lo_;
  mpfr_t hi_;
};

/// Encloses an exact scalar at the given precision.
inline IntervalScalar toInterval(const ExactScalar& a, int precisionBits) {
  if (precisionBits < 32) throw std::invalid_argument("toInterval: precisionBits must be >= 32");
  const auto prec = static_cast<mpfr_prec_t>(precisionBits);
  IntervalScalar r = IntervalScalar::fromRational(a.coeff(), prec);
  if (a.isZero()) return r;
  if (a.grade().sqrt2 != 0) r *= IntervalScalar::fromInt(2, prec).sqrt();
  int p = a.grade().piHalf;
  if (p != 0) {
    IntervalScalar unit = (p % 2 == 0) ? IntervalScalar::pi(prec)
                                       : IntervalScalar::pi(prec).sqrt();
    unsigned n = static_cast<unsigned>(p % 2 == 0 ? std::abs(p) / 2 : std::abs(p));
    IntervalScalar f = unit.pow(n);
    r = p > 0 ? r * f : r / f;
  }
  return r;
}

/// Midpoint decimal rendering of an exact scalar.
inline std::string toDecimal(const ExactScalar& a, int digits = 30, int precisionBits = 192) {
  if (a.isZero()) return "0";
  return toInterval(a, precisionBits).decimal(digits);
}

}  // namespace sharpcert
