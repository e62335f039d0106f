#pragma once

// Exact scalars of the form q * sqrt(2)^s * sqrt(pi)^p with q rational.

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <utility>

namespace sharpcert {

/// Raised when two values with incommensurable radical grades meet in an
/// operation that needs a common grade (sums, comparisons, polynomials).
class GradeMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exponents of the radical units sqrt(2) and sqrt(pi).
struct Grade {
  int sqrt2 = 0;
  int piHalf = 0;

  bool isRational() const { return sqrt2 == 0 && piHalf == 0; }
  friend bool operator==(const Grade&, const Grade&) = default;
  friend auto operator<=>(const Grade&, const Grade&) = default;
};

inline std::string to_string(const Grade& g) {
  return "sqrt2^" + std::to_string(g.sqrt2) + " sqrtpi^" + std::to_string(g.piHalf);
}

/// A real number coeff * sqrt(2)^sqrt2 * sqrt(pi)^piHalf.
///
/// Canonical form: coeff in lowest terms, sqrt2 in {0,1} (even powers of
/// sqrt(2) are folded into coeff), and the zero value has the trivial grade.
class ExactScalar {
 public:
  ExactScalar() = default;

  explicit ExactScalar(mpq_class coeff, Grade grade = {})
      : coeff_(std::move(coeff)), grade_(grade) {
    normalize();
  }

  static ExactScalar rational(long num, long den = 1) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    return ExactScalar(mpq_class(num, den));
  }

  /// sqrt(pi)^piHalf
  static ExactScalar piPower(int piHalf) { return ExactScalar(mpq_class(1), {0, piHalf}); }

  /// 2^(twoExp/2), for any integer twoExp.
  static ExactScalar twoPowerHalf(int twoExp) { return ExactScalar(mpq_class(1), {twoExp, 0}); }

  const mpq_class& coeff() const { return coeff_; }
  Grade grade() const { return grade_; }
  bool isZero() const { return sgn(coeff_) == 0; }
  bool isRational() const { return grade_.isRational(); }

  /// Sign of the value; the radical units are positive.
  int sign() const { return sgn(coeff_); }

  ExactScalar operator-() const {
    ExactScalar r = *this;
    r.coeff_ = -r.coeff_;
    return r;
  }

  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
    if (a.isZero()) return b;
    if (b.isZero()) return a;
    if (a.grade_ != b.grade_) {
      throw GradeMismatch("cannot add grades (" + to_string(a.grade_) + ") and (" +
                          to_string(b.grade_) + ")");
    }
    return ExactScalar(a.coeff_ + b.coeff_, a.grade_);
  }

  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return a + (-b); }

  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    if (a.isZero() || b.isZero()) return ExactScalar();
    return ExactScalar(a.coeff_ * b.coeff_,
                       {a.grade_.sqrt2 + b.grade_.sqrt2, a.grade_.piHalf + b.grade_.piHalf});
  }

  friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
    if (b.isZero()) throw DivisionByZero("ExactScalar division by zero");
    if (a.isZero()) return ExactScalar();
    return ExactScalar(a.coeff_ / b.coeff_,
                       {a.grade_.sqrt2 - b.grade_.sqrt2, a.grade_.piHalf - b.grade_.piHalf});
  }

  ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
  ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
  ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
  ExactScalar& operator/=(const ExactScalar& o) { return *this = *this / o; }

  friend ExactScalar operator*(const ExactScalar& a, const mpq_class& q) {
    return a * ExactScalar(q);
  }
  friend ExactScalar operator*(const mpq_class& q, const ExactScalar& a) {
    return a * ExactScalar(q);
  }

  /// Structural equality; canonical form makes this value equality.
  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.grade_ == b.grade_ && a.coeff_ == b.coeff_;
  }

  /// Re-applies canonicalization. Idempotent.
  void normalize() {
    coeff_.canonicalize();
    if (sgn(coeff_) == 0) {
      grade_ = {};
      return;
    }
    // sqrt(2)^(2j) = 2^j
    int fold = grade_.sqrt2 >= 0 ? grade_.sqrt2 / 2 : -((-grade_.sqrt2 + 1) / 2);
    grade_.sqrt2 -= 2 * fold;
    if (fold > 0) {
      mpq_class f;
      mpz_ui_pow_ui(f.get_num_mpz_t(), 2, static_cast<unsigned long>(fold));
      coeff_ *= f;
    } else if (fold < 0) {
      mpq_class f;
      mpz_ui_pow_ui(f.get_num_mpz_t(), 2, static_cast<unsigned long>(-fold));
      coeff_ /= f;
    }
  }

 private:
  mpq_class coeff_{0};
  Grade grade_{};
};

/// Three-way comparison. Both operands must share a grade unless one is zero.
inline std::strong_ordering compare(const ExactScalar& a, const ExactScalar& b) {
  if (!a.isZero() && !b.isZero() && a.grade() != b.grade()) {
    throw GradeMismatch("cannot compare grades (" + to_string(a.grade()) + ") and (" +
                        to_string(b.grade()) + ")");
  }
  int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

inline int signOf(const ExactScalar& a) { return a.sign(); }

inline ExactScalar pow(const ExactScalar& base, unsigned n) {
  ExactScalar r(mpq_class(1));
  for (unsigned i = 0; i < n; ++i) r *= base;
  return r;
}

/// {x}_+ = max(x, 0)
inline ExactScalar positivePart(const ExactScalar& x) { return x.sign() > 0 ? x : ExactScalar(); }

/// Gamma(twoA/2) for twoA >= 1.
inline ExactScalar gammaHalfInt(int twoA) {
  if (twoA < 1) throw std::invalid_argument("gammaHalfInt: argument must be positive");
  // Start from Gamma(1) = 1 or Gamma(1/2) = sqrt(pi) and climb with Gamma(x+1) = x Gamma(x).
  mpq_class acc(1);
  int start = (twoA % 2 == 0) ? 2 : 1;
  for (int x2 = start; x2 < twoA; x2 += 2) acc *= mpq_class(x2, 2);
  return ExactScalar(acc, {0, twoA % 2});
}

/// B(twoA/2, twoB/2) = Gamma(a) Gamma(b) / Gamma(a+b).
inline ExactScalar betaHalfInt(int twoA, int twoB) {
  return gammaHalfInt(twoA) * gammaHalfInt(twoB) / gammaHalfInt(twoA + twoB);
}

/// Surface measure |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2).
inline ExactScalar sphereSurface(int d) {
  if (d < 1) throw std::invalid_argument("sphereSurface: d must be >= 1");
  return ExactScalar(mpq_class(2), {0, d}) / gammaHalfInt(d);
}

inline mpz_class binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline mpz_class factorial(long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

/// "p/q" with the sign on p; always includes the denominator.
inline std::string rationalToString(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "p/q", "p", or a plain decimal such as "1e-6" or "0.25" into an exact rational.
inline mpq_class parseRational(const std::string& text) {
  auto fail = [&] { throw std::invalid_argument("not a rational number: '" + text + "'"); };
  if (text.empty()) fail();
  auto isInt = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto toZ = [&](std::string s) {
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    return mpz_class(s, 10);
  };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    std::string p = text.substr(0, slash), q = text.substr(slash + 1);
    if (!isInt(p) || !isInt(q) || q[0] == '-' || q[0] == '+') fail();
    mpz_class den = toZ(q);
    if (den == 0) throw DivisionByZero("rational with zero denominator: '" + text + "'");
    mpq_class r(toZ(p), den);
    r.canonicalize();
    return r;
  }
  if (isInt(text)) return mpq_class(toZ(text));

  // decimal with optional exponent
  std::string mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mant = text.substr(0, e);
    std::string ex = text.substr(e + 1);
    if (!isInt(ex)) fail();
    exp10 = std::stol(ex);
  }
  std::string digits;
  bool neg = false;
  std::size_t i = 0;
  if (i < mant.size() && (mant[i] == '-' || mant[i] == '+')) neg = mant[i++] == '-';
  bool seenDot = false, seenDigit = false;
  for (; i < mant.size(); ++i) {
    char c = mant[i];
    if (c == '.' && !seenDot) {
      seenDot = true;
    } else if (c >= '0' && c <= '9') {
      digits += c;
      seenDigit = true;
      if (seenDot) --exp10;
    } else {
      fail();
    }
  }
  if (!seenDigit) fail();
  mpz_class num(digits, 10), ten(10), scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  mpq_class r = exp10 >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  r.canonicalize();
  return neg ? mpq_class(-r) : r;
}

}  // namespace sharpcert
