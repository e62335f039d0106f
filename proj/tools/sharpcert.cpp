// sharpcert: certify, scan, inspect eigenvalues, verify certificates.
//
// Exit codes: 0 ok, 1 a check failed, 2 invalid input or malformed file,
// 3 internal grade mismatch.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sharpcert/sharpcert.hpp"

namespace {

using namespace sharpcert;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInvalid = 2;
constexpr int kGradeMismatch = 3;
constexpr int kMaxDimension = 64;

struct RunConfig {
  int d = 0;
  int dMin = 0;
  int dMax = -1;
  std::string tol = "1e-6";
  int tailDepth = 25;
  int precisionBits = 128;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  std::string input;
  std::string kernel = "delta";
  int m = 0;
  std::vector<int> ks{2, 4, 6};
};

class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void requireValidDimension(int d) {
  if (d < 3 || d > kMaxDimension)
    throw InvalidInput("dimension must be in [3, " + std::to_string(kMaxDimension) + "], got " + std::to_string(d));
}

SchemeOptions schemeOptions(const RunConfig& cfg) {
  SchemeOptions o;
  try {
    o.tol = parseRational(cfg.tol);
  } catch (const std::exception& e) {
    throw InvalidInput(e.what());
  }
  if (sgn(o.tol) <= 0) throw InvalidInput("--tol must be positive");
  if (cfg.tailDepth < 0) throw InvalidInput("--tail-depth must be >= 0");
  if (cfg.precisionBits < 64) throw InvalidInput("--precision-bits must be >= 64");
  o.tailDepth = cfg.tailDepth;
  o.precisionBits = cfg.precisionBits;
  return o;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw InvalidInput("cannot write " + cfg.out);
  f << text;
}

/// Failed verdicts recorded in a certificate.
std::vector<std::string> recordedFailures(const Certificate& c) {
  std::vector<std::string> out;
  if (!c.sumConditionOk) out.push_back("sum condition");
  for (const auto& w : c.weights)
    for (const auto& e : w.eig)
      if (!e.nonpositive) out.push_back("Eig weight " + std::to_string(w.spec.n) + " l=" + std::to_string(e.ell));
  for (const auto& e : c.deltaEigen)
    if (e.ell > c.N && !e.nonpositive) out.push_back("delta eigenvalue l=" + std::to_string(e.ell));
  return out;
}

std::string gradeLabel(const Certificate& c) {
  return "sqrt2^" + std::to_string(c.aStar.isZero() ? c.weightGrade.sqrt2 : c.aStar.grade().sqrt2) + " sqrtpi^" +
         std::to_string(c.aStar.isZero() ? c.weightGrade.piHalf : c.aStar.grade().piHalf);
}

const char* kCsvHeader = "d,N,a_star_decimal,grade,status,wall_ms\n";

struct ScanRow {
  int d = 0;
  int N = 0;
  std::string aStar;
  std::string grade;
  std::string status;
  long wallMs = 0;
  bool gradeMismatch = false;
};

std::string csvLine(const ScanRow& r) {
  std::ostringstream s;
  s << r.d << ',' << r.N << ',' << r.aStar << ',' << r.grade << ',' << r.status << ',' << r.wallMs << '\n';
  return s.str();
}

Json rowJson(const ScanRow& r) {
  return Json{{"d", r.d}, {"N", r.N}, {"a_star_decimal", r.aStar}, {"grade", r.grade}, {"status", r.status},
              {"wall_ms", r.wallMs}};
}

int cmdCertify(const RunConfig& cfg) {
  requireValidDimension(cfg.d);
  const SchemeOptions opts = schemeOptions(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  Certificate cert = computeAStar(cfg.d, opts);
  cert.seed = cfg.seed;
  const long ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  const auto failures = recordedFailures(cert);

  if (cfg.format == "csv") {
    ScanRow row{cfg.d, cert.N, cert.aStarDecimal, gradeLabel(cert), failures.empty() ? "ok" : "fail", ms};
    emit(cfg, std::string(kCsvHeader) + csvLine(row));
  } else {
    emit(cfg, certificateToJson(cert).dump(2) + "\n");
  }
  std::ostream& log = cfg.out.empty() ? std::cerr : std::cout;
  log << "d=" << cfg.d << " N=" << cert.N << " a_star=" << cert.aStarDecimal << " ("
      << rationalToString(cert.aStar.coeff()) << " * " << gradeLabel(cert) << ")\n";
  if (cert.paperBaselineDecimal) log << "published baseline: " << *cert.paperBaselineDecimal << "\n";
  log << "weights=" << cert.weights.size() << " sum_condition=" << (cert.sumConditionOk ? "ok" : "FAIL")
      << " failed_checks=" << failures.size() << "\n";
  for (const auto& f : failures) log << "  FAIL " << f << "\n";
  return failures.empty() ? kOk : kCheckFailed;
}

int cmdScan(const RunConfig& cfg) {
  if (cfg.dMin > cfg.dMax) throw InvalidInput("empty dimension range");
  requireValidDimension(cfg.dMin);
  requireValidDimension(cfg.dMax);
  const SchemeOptions opts = schemeOptions(cfg);

  std::vector<ScanRow> rows(static_cast<std::size_t>(cfg.dMax - cfg.dMin + 1));
  sharpcert::detail::parallelFor(static_cast<int>(rows.size()), [&](int i) {
    ScanRow& row = rows[static_cast<std::size_t>(i)];
    row.d = cfg.dMin + i;
    row.N = ellStar(row.d);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Certificate cert = computeAStar(row.d, opts);
      row.aStar = cert.aStarDecimal;
      row.grade = gradeLabel(cert);
      row.status = recordedFailures(cert).empty() ? "ok" : "fail";
    } catch (const GradeMismatch&) {
      row.status = "grade_mismatch";
      row.gradeMismatch = true;
    } catch (const std::exception&) {
      row.status = "error";
    }
    row.wallMs = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  });

  bool failed = false, mismatch = false;
  std::string text;
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back(rowJson(r));
    text = arr.dump(2) + "\n";
  } else {
    text = kCsvHeader;
    for (const auto& r : rows) text += csvLine(r);
  }
  for (const auto& r : rows) {
    failed = failed || r.status != "ok";
    mismatch = mismatch || r.gradeMismatch;
  }
  emit(cfg, text);
  if (mismatch) return kGradeMismatch;
  return failed ? kCheckFailed : kOk;
}

int cmdEigen(const RunConfig& cfg) {
  requireValidDimension(cfg.d);
  if (cfg.precisionBits < 64) throw InvalidInput("--precision-bits must be >= 64");
  if (cfg.m < 0) throw InvalidInput("-m must be >= 0");
  if (cfg.ks.empty()) throw InvalidInput("no k values given");
  for (int k : cfg.ks)
    if (k < 0) throw InvalidInput("k must be >= 0");

  GegenbauerBasis basis(cfg.d);
  const MomentTable moments(cfg.d);
  std::optional<ExactPoly> poly;
  if (cfg.kernel == "magical")
    poly = magicalKernelPoly(moments, cfg.m);
  else if (cfg.kernel == "nonmagical")
    poly = nonmagicalKernelPoly(moments, cfg.m);
  else if (cfg.kernel != "delta")
    throw InvalidInput("--kernel must be delta, magical or nonmagical");
  for (int k : cfg.ks)
    if (!poly && k % 2 != 0) throw InvalidInput("the delta kernel is evaluated at even k only");

  const auto desc = poly ? oracle::KernelDesc::polynomial(*poly) : oracle::KernelDesc::delta();
  bool violated = false;
  Json rows = Json::array();
  std::string csv = "kernel,m,k,rational,sqrt2,pi_half,decimal,enclosure_lo,enclosure_hi,enclosed\n";
  for (int k : cfg.ks) {
    const ExactScalar exact = poly ? funkHeckeEigenPoly(*poly, k, basis) : eigenDeltaWeight(k, basis);
    const IntervalScalar box = oracle::quadEigenEnclosure(desc, k, cfg.d, cfg.precisionBits);
    const IntervalScalar ex = toInterval(exact, cfg.precisionBits + 64);
    const bool enclosed = box.contains(ex);
    violated = violated || !enclosed;
    rows.push_back(Json{{"kernel", cfg.kernel}, {"m", cfg.m}, {"k", k}, {"value", scalarToJson(exact, 30)},
                        {"enclosure", box.toString(30)}, {"enclosed", enclosed}});
    std::ostringstream s;
    s << cfg.kernel << ',' << cfg.m << ',' << k << ',' << rationalToString(exact.coeff()) << ','
      << exact.grade().sqrt2 << ',' << exact.grade().piHalf << ',' << toDecimal(exact, 30) << ','
      << box.lowerDecimal(30) << ',' << box.upperDecimal(30) << ',' << (enclosed ? "yes" : "NO") << '\n';
    csv += s.str();
  }
  emit(cfg, cfg.format == "json" ? rows.dump(2) + "\n" : csv);
  return violated ? kCheckFailed : kOk;
}

int cmdVerify(const RunConfig& cfg) {
  std::ifstream f(cfg.input);
  if (!f) throw InvalidInput("cannot read " + cfg.input);
  std::stringstream buf;
  buf << f.rdbuf();
  const Certificate cert = parseCertificate(buf.str());
  const VerifyResult r = verifyCertificate(cert);
  if (r.valid) {
    std::cout << "valid: d=" << cert.d << " a_star=" << cert.aStarDecimal << "\n";
    return kOk;
  }
  std::cout << "invalid: " << r.failures.size() << " failed check(s)\n";
  for (const auto& failure : r.failures) std::cout << "  " << failure << "\n";
  return kCheckFailed;
}

int defaultPrecision() {
  if (const char* env = std::getenv("SHARPCERT_PRECISION_BITS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw InvalidInput("SHARPCERT_PRECISION_BITS is not an integer");
    }
  }
  return 128;
}

void addCommon(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--tol", cfg.tol, "Shift tolerance, rational or decimal")->capture_default_str();
  sub->add_option("--tail-depth", cfg.tailDepth, "Eigenvalue checks beyond the structural cutoff")->capture_default_str();
  sub->add_option("--precision-bits", cfg.precisionBits, "MPFR precision for decimals and enclosures")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "Seed recorded in the output")->capture_default_str();
  sub->add_option("--out", cfg.out, "Output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg.precisionBits = defaultPrecision();
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }

  CLI::App app{"Exact eigenvalue and weight certificates for sharp extension constants"};
  app.require_subcommand(1);

  auto* certify = app.add_subcommand("certify", "Build and check the certificate for one dimension");
  certify->add_option("-d,--dimension", cfg.d, "Dimension d >= 3")->required();
  addCommon(certify, cfg);
  certify->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* scan = app.add_subcommand("scan", "Certify a range of dimensions");
  scan->add_option("--d-min", cfg.dMin, "First dimension")->required();
  scan->add_option("--d-max", cfg.dMax, "Last dimension")->required();
  addCommon(scan, cfg);
  scan->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));

  auto* eigen = app.add_subcommand("eigen", "Exact eigenvalues with quadrature enclosures");
  eigen->add_option("-d,--dimension", cfg.d, "Dimension d >= 3")->required();
  eigen->add_option("--kernel", cfg.kernel, "delta, magical or nonmagical")->capture_default_str();
  eigen->add_option("-m", cfg.m, "Kernel index m (degree 2m)")->capture_default_str();
  eigen->add_option("-k", cfg.ks, "Harmonic degrees, comma separated")->delimiter(',');
  addCommon(eigen, cfg);
  eigen->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));

  auto* verify = app.add_subcommand("verify", "Recompute every verdict of a certificate file");
  verify->add_option("certificate", cfg.input, "Certificate JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*certify) return cmdCertify(cfg);
    if (*scan) {
      if (cfg.format.empty()) cfg.format = "csv";
      return cmdScan(cfg);
    }
    if (*eigen) {
      if (cfg.format.empty()) cfg.format = "csv";
      return cmdEigen(cfg);
    }
    return cmdVerify(cfg);
  } catch (const GradeMismatch& e) {
    std::cerr << "grade mismatch: " << e.what() << "\n";
    return kGradeMismatch;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const MalformedCertificate& e) {
    std::cerr << "malformed certificate: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  }
}
