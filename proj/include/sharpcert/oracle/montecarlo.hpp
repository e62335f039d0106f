#pragma once

// Monte Carlo estimates of the double-sphere moments
//   int int |w3+w4|^{2J} (eta.(w3+w4))^K dsigma(w3) dsigma(w4)
// with eta = e_1. Samples are split into fixed-size chunks; chunk i draws from
// its own mt19937_64 seeded with splitmix64(seed + i), and chunk results are
// combined in index order, so estimates do not depend on the thread count.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sharpcert/interval.hpp"
#include "sharpcert/scalars.hpp"
#include "sharpcert/scheme.hpp"

namespace sharpcert::oracle {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct SamplePoint {
  std::vector<double> omega;
};

/// Uniform points on S^{d-1} by normalizing standard Gaussian vectors.
class SphereSampler {
 public:
  SphereSampler(int d, std::uint64_t seed) : d_(d), rng_(seed) {
    if (d < 2) throw std::invalid_argument("sphere sampler needs d >= 2");
  }

  int dimension() const { return d_; }

  SamplePoint next() {
    SamplePoint p{std::vector<double>(static_cast<std::size_t>(d_))};
    double norm2 = 0;
    do {
      norm2 = 0;
      for (auto& x : p.omega) {
        x = normal_(rng_);
        norm2 += x * x;
      }
    } while (norm2 == 0);
    const double inv = 1 / std::sqrt(norm2);
    for (auto& x : p.omega) x *= inv;
    return p;
  }

 private:
  int d_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

inline SphereSampler uniformSphereSampler(int d, std::uint64_t seed) { return SphereSampler(d, seed); }

struct McEstimate {
  double mean = 0;
  double stderr = 0;
  long samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr long kChunkSize = 1L << 16;

inline McEstimate mcDoubleSphereMoment(int d, int J, int K, long samples, std::uint64_t seed) {
  requireDimension(d);
  if (J < 0 || K < 0) throw std::invalid_argument("moment indices must be >= 0");
  if (samples < 10000) throw std::invalid_argument("need at least 10^4 samples");

  const long chunks = (samples + kChunkSize - 1) / kChunkSize;
  std::vector<double> sums(static_cast<std::size_t>(chunks)), squares(static_cast<std::size_t>(chunks));
  sharpcert::detail::parallelFor(static_cast<int>(chunks), [&](int c) {
    SphereSampler s(d, splitmix64(seed + static_cast<std::uint64_t>(c)));
    const long count = std::min(kChunkSize, samples - c * kChunkSize);
    // Shift by the first value to keep the variance sum well conditioned.
    double shift = 0, sum = 0, sq = 0;
    for (long i = 0; i < count; ++i) {
      const auto a = s.next(), b = s.next();
      double r2 = 0;
      for (std::size_t j = 0; j < a.omega.size(); ++j) {
        const double x = a.omega[j] + b.omega[j];
        r2 += x * x;
      }
      const double v = std::pow(r2, J) * std::pow(a.omega[0] + b.omega[0], K);
      if (i == 0) shift = v;
      sum += v - shift;
      sq += (v - shift) * (v - shift);
    }
    const auto idx = static_cast<std::size_t>(c);
    sums[idx] = sum + shift * static_cast<double>(count);
    squares[idx] = sq + 2 * shift * sum + shift * shift * static_cast<double>(count);
  });

  double sum = 0, sq = 0;
  for (std::size_t c = 0; c < sums.size(); ++c) {
    sum += sums[c];
    sq += squares[c];
  }
  const auto n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1));
  const double mass = toInterval(pow(sphereSurface(d), 2), 128).midDouble();
  return {mass * mean, mass * std::sqrt(var / n), samples, seed};
}

struct McCheck {
  bool passed = false;
  bool rerun = false;
  McEstimate estimate;
};

/// |estimate - exact| <= sigmas * stderr, up to double rounding. A miss is
/// retried once with 4x samples and a derived seed; only a second miss fails.
inline McCheck mcCheckMoment(int d, int J, int K, double exact, long samples, std::uint64_t seed,
                             double sigmas = 4) {
  auto within = [&](const McEstimate& e) {
    return std::abs(e.mean - exact) <= sigmas * e.stderr + 1e-12 * std::abs(exact);
  };
  McCheck r;
  r.estimate = mcDoubleSphereMoment(d, J, K, samples, seed);
  if (within(r.estimate)) {
    r.passed = true;
    return r;
  }
  r.rerun = true;
  r.estimate = mcDoubleSphereMoment(d, J, K, 4 * samples, splitmix64(seed ^ 0x5eed));
  r.passed = within(r.estimate);
  return r;
}

}  // namespace sharpcert::oracle
