// Builds the d = 8 certificate, prints a*(8) and re-verifies it.

#include <iostream>

#include "sharpcert/sharpcert.hpp"

int main() {
  using namespace sharpcert;
  const Certificate cert = computeAStar(8);
  std::cout << "a*(8) = " << rationalToString(cert.aStar.coeff()) << " * " << to_string(cert.aStar.grade())
            << " ~ " << cert.aStarDecimal << "\n";
  for (const auto& w : cert.weights) {
    std::cout << "h_" << w.spec.n << " (" << to_string(w.spec.identity) << ")";
    for (const auto& t : w.spec.terms)
      if (!t.value.isZero()) std::cout << "  " << (t.sign > 0 ? '+' : '-') << toDecimal(t.value, 8) << " |xi|^" << t.degree;
    std::cout << "  c0 = " << rationalToString(w.spec.c0) << "\n";
  }
  const VerifyResult check = verifyCertificate(parseCertificate(certificateToJson(cert).dump()));
  std::cout << (check.valid ? "certificate verified" : "certificate INVALID") << "\n";
  return check.valid ? 0 : 1;
}
