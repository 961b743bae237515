#pragma once

// Reference computations used only by the tests. They deliberately take a
// different route from the library (sets and maps, no dense lag tables).

#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

inline std::map<std::int64_t, std::int64_t> weights(const std::vector<std::int64_t>& positions) {
  std::map<std::int64_t, std::int64_t> w;
  for (auto a : positions)
    for (auto b : positions) ++w[a - b];
  return w;
}

inline std::set<std::int64_t> difference_set(const std::vector<std::int64_t>& positions) {
  std::set<std::int64_t> d;
  for (auto a : positions)
    for (auto b : positions) d.insert(a - b);
  return d;
}

/// Largest c such that every lag in [-c, c] is a difference.
inline std::int64_t consecutive_halfwidth(const std::vector<std::int64_t>& positions) {
  const auto d = difference_set(positions);
  std::int64_t c = 0;
  while (d.count(c + 1) && d.count(-(c + 1))) ++c;
  return c;
}

inline std::int64_t udof(const std::vector<std::int64_t>& positions) {
  return 2 * consecutive_halfwidth(positions) + 1;
}

/// Coupling leakage by explicit double loop over lag magnitudes.
inline double coupling_leakage(const std::vector<std::int64_t>& positions, std::complex<double> u1,
                               int band, double phase_step) {
  double off = 0.0;
  double total = 0.0;
  for (auto a : positions) {
    for (auto b : positions) {
      const auto k = a > b ? a - b : b - a;
      double mag2 = 0.0;
      if (k == 0) {
        mag2 = 1.0;
      } else if (k <= band) {
        const auto u = u1 * std::exp(std::complex<double>(0.0, -(k - 1) * phase_step)) /
                       static_cast<double>(k);
        mag2 = std::norm(u);
        off += mag2;
      }
      total += mag2;
    }
  }
  return std::sqrt(off / total);
}

}  // namespace oracle
