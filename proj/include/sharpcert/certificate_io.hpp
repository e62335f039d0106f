#pragma once

// JSON (version 1) for exact scalars, polynomials and certificates.

#include <json.hpp>

#include <string>

#include "sharpcert/interval.hpp"
#include "sharpcert/polys.hpp"
#include "sharpcert/scheme.hpp"

namespace sharpcert {

using Json = nlohmann::ordered_json;

inline Json gradeToJson(Grade g) { return Json{{"sqrt2", g.sqrt2}, {"pi_half", g.piHalf}}; }

inline Json scalarToJson(const ExactScalar& x, int decimalDigits = 0) {
  Json j{{"rational", rationalToString(x.coeff())}, {"sqrt2", x.grade().sqrt2}, {"pi_half", x.grade().piHalf}};
  if (decimalDigits > 0) j["decimal"] = toDecimal(x, decimalDigits);
  return j;
}

inline Json polyToJson(const ExactPoly& p) {
  Json cs = Json::array();
  for (const auto& c : p.coeffs()) cs.push_back(rationalToString(c));
  return Json{{"grade", gradeToJson(p.grade())}, {"coeffs", cs}};
}

namespace detail {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const MalformedCertificate&) {
    throw;
  } catch (const std::exception& e) {
    throw MalformedCertificate(std::string(what) + ": " + e.what());
  }
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw MalformedCertificate(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline int intField(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw MalformedCertificate(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline bool boolField(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_boolean()) throw MalformedCertificate(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

inline std::string stringField(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw MalformedCertificate(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline mpq_class rationalField(const Json& j, const char* key) {
  return guarded(key, [&] { return parseRational(stringField(j, key)); });
}

inline const Json& arrayField(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw MalformedCertificate(std::string("field '") + key + "' must be an array");
  return v;
}

}  // namespace detail

inline Grade gradeFromJson(const Json& j) { return {detail::intField(j, "sqrt2"), detail::intField(j, "pi_half")}; }

/// Parses an ExactScalar; the optional "decimal" field is ignored.
inline ExactScalar scalarFromJson(const Json& j) {
  return ExactScalar(detail::rationalField(j, "rational"), gradeFromJson(j));
}

inline ExactPoly polyFromJson(const Json& j, VarDomain domain = VarDomain::KernelT) {
  rpoly::Coeffs cs;
  for (const auto& c : detail::arrayField(j, "coeffs")) {
    if (!c.is_string()) throw MalformedCertificate("polynomial coefficients must be strings");
    cs.push_back(detail::guarded("coeffs", [&] { return parseRational(c.get<std::string>()); }));
  }
  return ExactPoly(gradeFromJson(detail::field(j, "grade")), std::move(cs), domain);
}

inline Json eigChecksToJson(const std::vector<EigCheck>& checks) {
  Json arr = Json::array();
  for (const auto& e : checks)
    arr.push_back(Json{{"ell", e.ell}, {"value", scalarToJson(e.value)}, {"nonpositive", e.nonpositive}});
  return arr;
}

inline std::vector<EigCheck> eigChecksFromJson(const Json& arr) {
  std::vector<EigCheck> out;
  for (const auto& e : arr)
    out.push_back({detail::intField(e, "ell"), scalarFromJson(detail::field(e, "value")),
                   detail::boolField(e, "nonpositive")});
  return out;
}

/// `includeTimestamp = false` gives the deterministic part of the document.
inline Json certificateToJson(const Certificate& c, bool includeTimestamp = true) {
  Json weights = Json::array();
  for (const auto& rec : c.weights) {
    const auto& w = rec.spec;
    Json coeffs = Json::array();
    for (const auto& t : w.terms)
      coeffs.push_back(Json{{"degree", t.degree}, {"sign", t.sign}, {"value", scalarToJson(t.value)}});
    weights.push_back(Json{{"n", w.n},
                           {"identity", to_string(w.identity)},
                           {"has_delta", w.hasDelta},
                           {"top_degree", w.topDegree},
                           {"coefficients", coeffs},
                           {"c0", rationalToString(w.c0)},
                           {"adm_margin", rationalToString(rec.admMargin)},
                           {"eig", eigChecksToJson(rec.eig)}});
  }
  Json generator{{"name", c.generatorName}, {"version", c.generatorVersion}, {"seed", c.seed}};
  if (includeTimestamp) generator["timestamp"] = c.timestamp;
  Json j{{"version", c.version},
         {"dimension", c.d},
         {"N", c.N},
         {"tail_check_depth", c.tailCheckDepth},
         {"weight_grade", gradeToJson(c.weightGrade)},
         {"weights", weights},
         {"delta_eigen", eigChecksToJson(c.deltaEigen)},
         {"sum_condition_ok", c.sumConditionOk},
         {"a_star", Json{{"rational_times_grade", scalarToJson(c.aStar)}, {"decimal", c.aStarDecimal}}},
         {"paper_baseline_decimal", c.paperBaselineDecimal ? Json(*c.paperBaselineDecimal) : Json(nullptr)},
         {"generator", generator},
         {"notes", c.notes}};
  return j;
}

inline Identity identityFromString(const std::string& s) {
  if (s == "magical") return Identity::Magical;
  if (s == "nonmagical") return Identity::Nonmagical;
  throw MalformedCertificate("unknown identity '" + s + "'");
}

inline Certificate certificateFromJson(const Json& j) {
  using namespace detail;
  if (!j.is_object()) throw MalformedCertificate("certificate must be a JSON object");
  Certificate c;
  c.version = intField(j, "version");
  if (c.version != 1) throw MalformedCertificate("unsupported certificate version " + std::to_string(c.version));
  c.d = intField(j, "dimension");
  c.N = intField(j, "N");
  c.tailCheckDepth = intField(j, "tail_check_depth");
  c.weightGrade = gradeFromJson(field(j, "weight_grade"));
  for (const auto& wj : arrayField(j, "weights")) {
    WeightRecord rec;
    auto& w = rec.spec;
    w.n = intField(wj, "n");
    w.identity = identityFromString(stringField(wj, "identity"));
    w.hasDelta = boolField(wj, "has_delta");
    w.topDegree = intField(wj, "top_degree");
    for (const auto& tj : arrayField(wj, "coefficients"))
      w.terms.push_back({intField(tj, "degree"), intField(tj, "sign"), scalarFromJson(field(tj, "value"))});
    w.c0 = rationalField(wj, "c0");
    rec.admMargin = rationalField(wj, "adm_margin");
    rec.eig = eigChecksFromJson(arrayField(wj, "eig"));
    c.weights.push_back(std::move(rec));
  }
  c.deltaEigen = eigChecksFromJson(arrayField(j, "delta_eigen"));
  c.sumConditionOk = boolField(j, "sum_condition_ok");
  const Json& a = field(j, "a_star");
  c.aStar = scalarFromJson(field(a, "rational_times_grade"));
  c.aStarDecimal = stringField(a, "decimal");
  const Json& base = field(j, "paper_baseline_decimal");
  if (base.is_string())
    c.paperBaselineDecimal = base.get<std::string>();
  else if (!base.is_null())
    throw MalformedCertificate("paper_baseline_decimal must be a string or null");
  const Json& gen = field(j, "generator");
  c.generatorName = stringField(gen, "name");
  c.generatorVersion = stringField(gen, "version");
  if (gen.contains("seed")) {
    if (!gen.at("seed").is_number_unsigned()) throw MalformedCertificate("generator seed must be a nonnegative integer");
    c.seed = gen.at("seed").get<std::uint64_t>();
  }
  if (gen.contains("timestamp")) c.timestamp = stringField(gen, "timestamp");
  for (const auto& n : arrayField(j, "notes")) {
    if (!n.is_string()) throw MalformedCertificate("notes must be strings");
    c.notes.push_back(n.get<std::string>());
  }
  return c;
}

/// Parses certificate text; syntax errors become MalformedCertificate.
inline Certificate parseCertificate(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedCertificate(std::string("invalid JSON: ") + e.what());
  }
  return certificateFromJson(j);
}

}  // namespace sharpcert
