#pragma once

// Inductive construction of the weights h_1, ..., h_{2N}, their eigenvalue and
// nonnegativity checks, and the resulting constant a*(d).
//
// Weight layout (|xi|-degree q, u = |xi|^2):
//   h_1      = delta - sum_q C_{1,q} |xi|^q + C_{1,0}                         (magical)
//   h_n, n>1 = C_{n,T} |xi|^T - sum_{q<T} C_{n,q} |xi|^q + C_{n,0}            (magical for odd n)
// Each |xi|^q term of a magical weight contributes its kernel eigenvalue
// lambda_q(2l) to Lambda(2l); nonmagical weights use mu_q(2l).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sharpcert/interval.hpp"
#include "sharpcert/kernels.hpp"
#include "sharpcert/polys.hpp"
#include "sharpcert/scalars.hpp"
#include "sharpcert/specfun.hpp"

namespace sharpcert {

inline constexpr const char* kGeneratorName = "sharpcert";
inline constexpr const char* kGeneratorVersion = "1.0.0";

/// A denominator eigenvalue that must be strictly positive was not.
class SchemeInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of induction levels N: (d-3)/2 for odd d, (d-4)/2 for even d (clamped at 0).
inline int ellStar(int d) {
  requireDimension(d);
  return std::max(0, d % 2 != 0 ? (d - 3) / 2 : (d - 4) / 2);
}

namespace detail {

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
inline void parallelFor(int count, const std::function<void(int)>& body) {
  const int workers =
      std::max(1, std::min(count, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::future<void>> tasks;
  for (int w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < count; i += workers) body(i);
    }));
  }
  for (auto& t : tasks) t.get();
}

}  // namespace detail

/// Exact eigenvalues for one dimension, keyed by kernel |xi|-degree q = 2m and even k.
struct EigenTable {
  int d = 0;
  int mMax = 0;
  int kMax = 0;
  std::map<int, ExactScalar> lambdaDelta;
  std::map<std::pair<int, int>, ExactScalar> lambdaMag;
  std::map<std::pair<int, int>, ExactScalar> muNonmag;

  const ExactScalar& delta(int k) const { return lookup(lambdaDelta, k, "delta"); }
  const ExactScalar& magical(int degree, int k) const {
    return lookup(lambdaMag, std::pair{degree, k}, "magical");
  }
  const ExactScalar& nonmagical(int degree, int k) const {
    return lookup(muNonmag, std::pair{degree, k}, "nonmagical");
  }

 private:
  template <class Map, class Key>
  static const ExactScalar& lookup(const Map& m, const Key& key, const char* what) {
    auto it = m.find(key);
    if (it == m.end()) throw std::out_of_range(std::string("eigen table has no ") + what + " entry");
    return it->second;
  }
};

/// lambda_1(k), lambda_{2m}(k), mu_{2m}(k) for m <= mMax and even k <= kMax.
inline EigenTable buildEigenTable(int d, int mMax, int kMax) {
  requireDimension(d);
  if (mMax < 0 || kMax < 0) throw std::invalid_argument("buildEigenTable: negative bound");
  kMax -= kMax % 2;
  EigenTable table;
  table.d = d;
  table.mMax = mMax;
  table.kMax = kMax;

  GegenbauerBasis basis(d);
  basis.get(std::max(kMax, 2 * mMax + 2));
  const MomentTable moments(d);

  std::vector<std::vector<ExactScalar>> mag(static_cast<std::size_t>(mMax + 1));
  std::vector<std::vector<ExactScalar>> nonmag(static_cast<std::size_t>(mMax + 1));
  std::vector<ExactScalar> delta;
  detail::parallelFor(mMax + 2, [&](int task) {
    if (task == mMax + 1) {
      delta = eigenDeltaWeights(kMax, basis);
      return;
    }
    const auto m = static_cast<std::size_t>(task);
    const ExactPoly K = magicalKernelPoly(moments, task);
    const ExactPoly L = nonmagicalKernelPoly(moments, task);
    for (int k = 0; k <= kMax; k += 2) {
      mag[m].push_back(funkHeckeEigenPoly(K, k, basis));
      nonmag[m].push_back(funkHeckeEigenPoly(L, k, basis));
    }
  });

  for (int k = 0; k <= kMax; k += 2) {
    const auto i = static_cast<std::size_t>(k / 2);
    table.lambdaDelta.emplace(k, delta[i]);
    for (int m = 0; m <= mMax; ++m) {
      table.lambdaMag.emplace(std::pair{2 * m, k}, mag[static_cast<std::size_t>(m)][i]);
      table.muNonmag.emplace(std::pair{2 * m, k}, nonmag[static_cast<std::size_t>(m)][i]);
    }
  }
  return table;
}

enum class Identity { Magical, Nonmagical };

inline std::string to_string(Identity id) { return id == Identity::Magical ? "magical" : "nonmagical"; }

struct WeightTerm {
  int degree = 0;
  int sign = -1;
  ExactScalar value;
};

/// One weight h_n. `terms` lists every even degree 2..topDegree in ascending
/// order; `c0` is the constant term in units of the scheme's weight grade.
struct WeightSpec {
  int n = 0;
  Identity identity = Identity::Magical;
  bool hasDelta = false;
  int topDegree = 0;
  std::vector<WeightTerm> terms;
  mpq_class c0{0};

  ExactScalar coefficient(int degree) const {
    for (const auto& t : terms)
      if (t.degree == degree) return t.value;
    return {};
  }

  void setCoefficient(int degree, const ExactScalar& v) {
    for (auto& t : terms)
      if (t.degree == degree) {
        t.value = v;
        return;
      }
    throw std::out_of_range("weight has no term of degree " + std::to_string(degree));
  }
};

inline Identity identityFor(int n) { return n % 2 != 0 ? Identity::Magical : Identity::Nonmagical; }

inline int topDegreeFor(int N, int n) {
  if (n <= 2) return 4 * N - 2;
  const int half = (n + 1) / 2;
  return n % 2 != 0 ? 4 * N - 4 * half + 4 : 4 * N - 4 * half + 2;
}

/// Largest l at which the weight's eigenvalue can be nonzero (h_1 excepted,
/// whose delta term never vanishes).
inline int structuralCutoff(int N, int n) {
  if (n == 1) return N;
  const int half = (n + 1) / 2;
  return n % 2 != 0 ? N - half + 1 : N - half;
}

inline int layoutSign(int n, int degree, int topDegree) {
  return (n > 1 && degree == topDegree) ? 1 : -1;
}

inline const ExactScalar& kernelEigen(const EigenTable& table, Identity id, int degree, int k) {
  return id == Identity::Magical ? table.magical(degree, k) : table.nonmagical(degree, k);
}

/// Lambda_n(2l); the constant term does not contribute for l >= 1.
inline ExactScalar weightEigen(const WeightSpec& w, const EigenTable& table, int ell) {
  if (ell < 1) throw std::invalid_argument("weightEigen: l must be >= 1");
  const int k = 2 * ell;
  ExactScalar acc = w.hasDelta ? table.delta(k) : ExactScalar();
  for (const auto& t : w.terms) {
    if (t.value.isZero()) continue;
    const ExactScalar e = kernelEigen(table, w.identity, t.degree, k) * t.value;
    acc += t.sign > 0 ? e : -e;
  }
  return acc;
}

/// Grade of the weight coefficients: grade(lambda_1) / grade(lambda_{2m}).
inline Grade weightGradeFor(int d) {
  GegenbauerBasis basis(d);
  MomentTable moments(d);
  const ExactScalar delta = eigenDeltaWeight(2, basis);
  const ExactScalar mag = funkHeckeEigenPoly(magicalKernelPoly(moments, 1), 2, basis);
  return (ExactScalar(mpq_class(1), delta.grade()) / ExactScalar(mpq_class(1), mag.grade())).grade();
}

/// The signed polynomial part of h_n in u = |xi|^2, grade-stripped to `grade` units.
inline ExactPoly weightPolynomial(const WeightSpec& w, Grade grade) {
  rpoly::Coeffs c(static_cast<std::size_t>(w.topDegree / 2 + 1));
  for (const auto& t : w.terms) {
    if (t.value.isZero()) continue;
    if (t.value.grade() != grade) {
      throw GradeMismatch("weight " + std::to_string(w.n) + " degree " + std::to_string(t.degree) +
                          " has grade (" + to_string(t.value.grade()) + "), expected (" +
                          to_string(grade) + ")");
    }
    c[static_cast<std::size_t>(t.degree / 2)] = t.sign * t.value.coeff();
  }
  return ExactPoly(grade, std::move(c), VarDomain::WeightU);
}

inline const mpq_class kAdmLo{0};
inline const mpq_class kAdmHi{16};

struct SchemeOptions {
  mpq_class tol{1, 1000000};
  int tailDepth = 25;
  int precisionBits = 128;
};

/// Weights together with the eigen table they were built from.
struct WeightConstruction {
  int d = 0;
  int N = 0;
  Grade weightGrade;
  EigenTable table;
  std::vector<WeightSpec> weights;
};

inline EigenTable eigenTableForScheme(int d, int N, int tailDepth) {
  return buildEigenTable(d, std::max(0, 2 * N - 1), 2 * (N + tailDepth));
}

/// Coefficient choice for every weight, in order n = 1..2N and increasing degree.
inline WeightConstruction constructWeights(int d, const mpq_class& tol, int tailDepth) {
  const int N = ellStar(d);
  if (N < 2) throw std::invalid_argument("weight construction needs N >= 2 (d >= 7)");
  if (sgn(tol) <= 0) throw std::invalid_argument("tol must be positive");
  if (tailDepth < 0) throw std::invalid_argument("tail depth must be >= 0");

  WeightConstruction out;
  out.d = d;
  out.N = N;
  out.weightGrade = weightGradeFor(d);
  out.table = eigenTableForScheme(d, N, tailDepth);
  const EigenTable& table = out.table;

  for (int n = 1; n <= 2 * N; ++n) {
    WeightSpec w;
    w.n = n;
    w.identity = identityFor(n);
    w.hasDelta = n == 1;
    w.topDegree = topDegreeFor(N, n);
    for (int q = 2; q <= w.topDegree; q += 2) w.terms.push_back({q, layoutSign(n, q, w.topDegree), {}});

    auto eig = [&](int q, int k) -> const ExactScalar& { return kernelEigen(table, w.identity, q, k); };

    const int T = w.topDegree;
    if (n > 1) {
      ExactScalar transfer;
      for (const auto& prev : out.weights) transfer += prev.coefficient(T);
      w.setCoefficient(T, transfer);
    }
    const int first = n == 1 ? T : T - 2;
    const int lastSubtracted = n == 1 ? T : T - 2;
    const int levels = structuralCutoff(N, n);
    for (int j = 0; j < levels; ++j) {
      const int q = first - 4 * j;
      const int k = 2 * (levels - j);
      ExactScalar num = n == 1 ? table.delta(k) : w.coefficient(T) * eig(T, k);
      for (int qq = q + 2; qq <= lastSubtracted; qq += 2) num -= w.coefficient(qq) * eig(qq, k);
      const ExactScalar& den = eig(q, k);
      if (den.sign() <= 0) {
        throw SchemeInfeasible("d=" + std::to_string(d) + ": eigenvalue of the degree-" +
                               std::to_string(q) + " " + to_string(w.identity) + " kernel at k=" +
                               std::to_string(k) + " is not positive");
      }
      w.setCoefficient(q, positivePart(num / den));
    }
    w.c0 = minimalShift(weightPolynomial(w, out.weightGrade), kAdmLo, kAdmHi, tol);
    out.weights.push_back(std::move(w));
  }
  return out;
}

inline std::vector<WeightSpec> buildWeights(int d, const mpq_class& tol, int tailDepth) {
  return constructWeights(d, tol, tailDepth).weights;
}

struct EigCheck {
  int ell = 0;
  ExactScalar value;
  bool nonpositive = false;
};

struct WeightRecord {
  WeightSpec spec;
  mpq_class admMargin{0};
  std::vector<EigCheck> eig;
};

struct Certificate {
  int version = 1;
  int d = 0;
  int N = 0;
  int tailCheckDepth = 25;
  Grade weightGrade;
  std::vector<WeightRecord> weights;
  std::vector<EigCheck> deltaEigen;
  bool sumConditionOk = false;
  ExactScalar aStar;
  std::string aStarDecimal;
  std::optional<std::string> paperBaselineDecimal;
  std::string generatorName = kGeneratorName;
  std::string generatorVersion = kGeneratorVersion;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::vector<std::string> notes;
};

/// Sum of the signed polynomial parts plus constants equals the constant sum
/// of the c0's, and exactly one weight carries the delta.
inline bool sumConditionHolds(const std::vector<WeightSpec>& weights, Grade grade) {
  int deltas = 0;
  ExactPoly total({}, {}, VarDomain::WeightU);
  mpq_class constants = 0;
  for (const auto& w : weights) {
    deltas += w.hasDelta ? 1 : 0;
    // The constant is added in grade units even when the polynomial part is zero.
    total = total + weightPolynomial(w, grade) + ExactPoly(grade, {w.c0}, VarDomain::WeightU);
    constants += w.c0;
  }
  return deltas == 1 && total == ExactPoly(grade, {constants}, VarDomain::WeightU);
}

inline std::vector<EigCheck> deltaEigenTable(const EigenTable& table, int count) {
  std::vector<EigCheck> out;
  for (int ell = 1; ell <= count; ++ell) {
    const ExactScalar& v = table.delta(2 * ell);
    out.push_back({ell, v, v.sign() <= 0});
  }
  return out;
}

/// 2^25 pi^2 / (5^2 7^2 11), the published admissible constant at d = 8.
inline ExactScalar eightDimensionalBaseline() {
  return ExactScalar(mpq_class(mpz_class(1) << 25, 13475), {0, 4});
}

inline std::string utcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline Certificate computeAStar(int d, const SchemeOptions& options = {}) {
  requireDimension(d);
  if (sgn(options.tol) <= 0) throw std::invalid_argument("tol must be positive");
  if (options.tailDepth < 0) throw std::invalid_argument("tail depth must be >= 0");
  if (options.precisionBits < 32) throw std::invalid_argument("precision must be >= 32 bits");

  Certificate cert;
  cert.d = d;
  cert.N = ellStar(d);
  cert.tailCheckDepth = options.tailDepth;
  cert.weightGrade = weightGradeFor(d);
  cert.timestamp = utcTimestamp();

  const int decimalBits = std::max(options.precisionBits, 64);
  if (cert.N < 2) {
    const EigenTable table = buildEigenTable(d, 0, 2 * (cert.N + options.tailDepth));
    cert.deltaEigen = deltaEigenTable(table, cert.N + options.tailDepth);
    cert.sumConditionOk = true;
    cert.aStarDecimal = "0";
    cert.notes.push_back("a_star = 0 by prior results for d <= 6; no weights constructed");
    cert.notes.push_back("delta_eigen lists the finite sign table of lambda_1(2l) as supporting evidence");
  } else {
    WeightConstruction wc = constructWeights(d, options.tol, options.tailDepth);
    cert.deltaEigen = deltaEigenTable(wc.table, cert.N + options.tailDepth);
    mpq_class total = 0;
    for (auto& spec : wc.weights) {
      WeightRecord rec;
      auto adm = sturmNonnegOn(weightPolynomial(spec, wc.weightGrade).plusConstant(spec.c0), kAdmLo, kAdmHi);
      if (!adm.holds) throw std::logic_error("constructed weight failed its nonnegativity check");
      rec.admMargin = adm.lowerBound;
      for (int ell = 1; ell <= cert.N + options.tailDepth; ++ell) {
        ExactScalar v = weightEigen(spec, wc.table, ell);
        rec.eig.push_back({ell, v, v.sign() <= 0});
      }
      total += spec.c0;
      rec.spec = std::move(spec);
      cert.weights.push_back(std::move(rec));
    }
    std::vector<WeightSpec> specs;
    for (const auto& r : cert.weights) specs.push_back(r.spec);
    cert.sumConditionOk = sumConditionHolds(specs, wc.weightGrade);
    cert.aStar = ExactScalar(total, wc.weightGrade);
    cert.aStarDecimal = toDecimal(cert.aStar, 30, decimalBits);
  }

  if (d == 8) {
    const ExactScalar baseline = eightDimensionalBaseline();
    cert.paperBaselineDecimal = toDecimal(baseline, 30, decimalBits);
    const ExactScalar rescaled = baseline / pow(ExactScalar(mpq_class(2), {0, 2}), 8);
    cert.notes.push_back("published d=8 baseline 2^25 pi^2/(5^2 7^2 11) is stated for a (2 pi)^d-scaled "
                         "Fourier normalization; divided by (2 pi)^8 it is " +
                         toDecimal(rescaled, 30, decimalBits) + "; no ordering is asserted");
  }
  cert.notes.push_back("Eig checked exactly for 1 <= l <= N + tail_check_depth; for l beyond the "
                       "structural cutoff only the delta eigenvalue survives, and its sign for all "
                       "larger l rests on an analytic argument, not on this computation");
  return cert;
}

struct VerifyResult {
  bool valid = true;
  std::vector<std::string> failures;

  void fail(std::string what) {
    valid = false;
    failures.push_back(std::move(what));
  }
};

/// Recomputes every verdict of the certificate from scratch.
inline VerifyResult verifyCertificate(const Certificate& cert) {
  VerifyResult r;
  const int d = cert.d;
  if (d < 3) throw MalformedCertificate("dimension must be >= 3");
  if (cert.version != 1) throw MalformedCertificate("unsupported certificate version");
  if (cert.tailCheckDepth < 0) throw MalformedCertificate("negative tail_check_depth");

  const int N = ellStar(d);
  if (cert.N != N) r.fail("structure: N is " + std::to_string(cert.N) + ", expected " + std::to_string(N));
  const Grade grade = weightGradeFor(d);
  if (cert.weightGrade != grade) r.fail("structure: weight_grade does not match the dimension");

  const int depth = N + cert.tailCheckDepth;
  const EigenTable table = N >= 2 ? eigenTableForScheme(d, N, cert.tailCheckDepth)
                                  : buildEigenTable(d, 0, 2 * depth);

  if (static_cast<int>(cert.deltaEigen.size()) != depth) r.fail("delta table: wrong length");
  for (std::size_t i = 0; i < cert.deltaEigen.size() && static_cast<int>(i) < depth; ++i) {
    const auto& e = cert.deltaEigen[i];
    const int ell = static_cast<int>(i) + 1;
    const ExactScalar& v = table.delta(2 * ell);
    if (e.ell != ell || !(e.value == v) || e.nonpositive != (v.sign() <= 0))
      r.fail("delta table: entry l=" + std::to_string(ell) + " does not match");
  }

  if (N < 2) {
    if (!cert.weights.empty()) r.fail("structure: no weights expected for d <= 6");
    if (!cert.aStar.isZero()) r.fail("a_star: expected 0 for d <= 6");
    if (!cert.sumConditionOk) r.fail("sum condition: recorded verdict is false");
    return r;
  }

  if (static_cast<int>(cert.weights.size()) != 2 * N) {
    r.fail("structure: expected " + std::to_string(2 * N) + " weights");
    return r;
  }

  mpq_class total = 0;
  std::vector<WeightSpec> specs;
  for (std::size_t i = 0; i < cert.weights.size(); ++i) {
    const auto& rec = cert.weights[i];
    const auto& w = rec.spec;
    const int n = static_cast<int>(i) + 1;
    const std::string tag = "weight " + std::to_string(n);
    specs.push_back(w);
    total += w.c0;

    bool shapeOk = w.n == n && w.identity == identityFor(n) && w.hasDelta == (n == 1) &&
                   w.topDegree == topDegreeFor(N, n) &&
                   static_cast<int>(w.terms.size()) == w.topDegree / 2;
    for (std::size_t j = 0; shapeOk && j < w.terms.size(); ++j) {
      const auto& t = w.terms[j];
      shapeOk = t.degree == 2 * static_cast<int>(j + 1) && t.sign == layoutSign(n, t.degree, w.topDegree);
    }
    if (!shapeOk) {
      r.fail("structure: " + tag + " does not match the weight layout");
      continue;
    }
    for (const auto& t : w.terms) {
      if (t.value.sign() < 0) r.fail("structure: " + tag + " has a negative coefficient");
      if (!t.value.isZero() && t.value.grade() != grade)
        r.fail("structure: " + tag + " degree " + std::to_string(t.degree) + " has the wrong grade");
    }
    if (sgn(w.c0) < 0) r.fail("structure: " + tag + " has a negative c0");

    // Eig
    if (static_cast<int>(rec.eig.size()) != depth) r.fail("Eig: " + tag + " has the wrong number of checks");
    for (int ell = 1; ell <= depth; ++ell) {
      ExactScalar v;
      try {
        v = weightEigen(w, table, ell);
      } catch (const GradeMismatch&) {
        r.fail("Eig: " + tag + " l=" + std::to_string(ell) + " mixes grades");
        break;
      }
      const auto idx = static_cast<std::size_t>(ell - 1);
      if (v.sign() > 0) r.fail("Eig: " + tag + " l=" + std::to_string(ell) + " is positive");
      if (idx < rec.eig.size()) {
        const auto& e = rec.eig[idx];
        if (e.ell != ell || !(e.value == v) || e.nonpositive != (v.sign() <= 0))
          r.fail("Eig: " + tag + " l=" + std::to_string(ell) + " recorded value does not match");
      }
    }

    // Adm
    try {
      const ExactPoly p = weightPolynomial(w, grade);
      if (!sturmNonnegOn(p.plusConstant(w.c0), kAdmLo, kAdmHi).holds)
        r.fail("Adm: " + tag + " is negative somewhere on [0,16]");
      else if (sgn(rec.admMargin) < 0 || !sturmNonnegOn(p.plusConstant(w.c0 - rec.admMargin), kAdmLo, kAdmHi).holds)
        r.fail("Adm: " + tag + " margin is not a valid lower bound");
    } catch (const GradeMismatch&) {
      r.fail("Adm: " + tag + " mixes grades");
    }
  }

  try {
    const bool ok = sumConditionHolds(specs, grade);
    if (!ok) r.fail("sum condition: weights do not sum to delta plus a constant");
    if (ok != cert.sumConditionOk) r.fail("sum condition: recorded verdict does not match");
  } catch (const GradeMismatch&) {
    r.fail("sum condition: weights mix grades");
  }
  if (!(cert.aStar == ExactScalar(total, grade))) r.fail("a_star: does not equal the sum of c0");
  return r;
}

}  // namespace sharpcert
