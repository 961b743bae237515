#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "sparsearray/coarray.hpp"
#include "sparsearray/coupling.hpp"
#include "sparsearray/geometry.hpp"

namespace sparsearray {

/// Far-field uncorrelated narrowband sources.
///
/// SNR convention: noise power = mean source power / 10^(snr_db / 10).
/// snr_db = +infinity gives noise-free snapshots.
struct SourceScenario {
  std::vector<double> bearings_deg;  // strictly increasing, within (-90, 90)
  std::vector<double> powers;        // empty means unit power for every source
  double snr_db = 0.0;
  int snapshots = 1000;
  std::uint64_t seed = 0;

  std::size_t source_count() const noexcept { return bearings_deg.size(); }
  double power(std::size_t i) const { return powers.empty() ? 1.0 : powers.at(i); }
  double noise_power() const;
  void validate() const;
};

/// N bearings evenly spaced over [lo, hi], endpoints included.
std::vector<double> uniform_bearings(int count, double lo_deg, double hi_deg);

/// Seedable stream: std::mt19937_64 seeded through std::seed_seq, Box-Muller
/// normals. Both algorithms are fully specified by the standard, so a seed
/// reproduces the same numbers on every conforming platform.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed);
  GaussianSource(std::uint64_t master_seed, std::uint64_t stream);

  double uniform_open();  // (0, 1)
  /// Circular complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
  double standard_normal();
};

/// Derives the seed of Monte Carlo trial `trial` from a master seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

/// K x N matrix with entries exp(j pi p_k sin(theta_i)).
ComplexMatrix steering_matrix(const ArrayGeometry& geometry, std::span<const double> bearings_deg);

struct SnapshotMatrix {
  ComplexMatrix data;  // K x T
};

/// x_t = U A s_t + n_t. U is the identity when `coupling` is empty.
SnapshotMatrix simulate_snapshots(const ArrayGeometry& geometry, const SourceScenario& scenario,
                                  const std::optional<CouplingModel>& coupling = std::nullopt);

/// (1/T) sum_t x_t x_t^H, exactly Hermitian.
ComplexMatrix sample_covariance(const SnapshotMatrix& snapshots);

/// A diag(p) A^H + noise I, optionally with coupling: U A diag(p) A^H U^H + noise I.
ComplexMatrix analytic_covariance(const ArrayGeometry& geometry, const SourceScenario& scenario,
                                  const std::optional<CouplingModel>& coupling = std::nullopt);

/// Coarray signal indexed by lag: the mean of R(a, b) over all pairs with
/// p_a - p_b = lag. Unsupported lags hold no value.
class LagSeries {
 public:
  LagSeries(Lag max_lag, std::vector<Complex> values, std::vector<bool> present);

  Lag max_lag() const noexcept { return max_lag_; }
  bool has(Lag lag) const noexcept;
  /// Throws std::out_of_range for unsupported lags.
  Complex at(Lag lag) const;

 private:
  Lag max_lag_;
  std::vector<Complex> values_;
  std::vector<bool> present_;
};

LagSeries coarray_pseudo_snapshot(const ComplexMatrix& covariance, const ArrayGeometry& geometry);

}  // namespace sparsearray
