#include "sparsearray/signal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sparsearray {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_bearing(double deg) {
  if (!(std::abs(deg) < 90.0)) {
    throw std::invalid_argument("bearing " + std::to_string(deg) + " deg is outside (-90, 90)");
  }
}

}  // namespace

double SourceScenario::noise_power() const {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  double mean_power = 0.0;
  for (std::size_t i = 0; i < source_count(); ++i) mean_power += power(i);
  mean_power /= static_cast<double>(source_count());
  return mean_power / std::pow(10.0, snr_db / 10.0);
}

void SourceScenario::validate() const {
  if (bearings_deg.empty()) throw std::invalid_argument("scenario needs at least one source");
  if (snapshots < 1) throw std::invalid_argument("scenario needs at least one snapshot");
  if (!powers.empty() && powers.size() != bearings_deg.size()) {
    throw std::invalid_argument("scenario powers and bearings differ in length");
  }
  for (std::size_t i = 0; i < bearings_deg.size(); ++i) {
    check_bearing(bearings_deg[i]);
    if (i > 0 && !(bearings_deg[i] > bearings_deg[i - 1])) {
      throw std::invalid_argument("scenario bearings must be strictly increasing");
    }
    if (!(power(i) > 0.0)) throw std::invalid_argument("source powers must be positive");
  }
  if (std::isnan(snr_db) || (std::isinf(snr_db) && snr_db < 0)) {
    throw std::invalid_argument("scenario SNR must be a number or +inf");
  }
}

std::vector<double> uniform_bearings(int count, double lo_deg, double hi_deg) {
  if (count < 1) throw std::invalid_argument("bearing count must be positive");
  if (count == 1) return {0.5 * (lo_deg + hi_deg)};
  std::vector<double> bearings(static_cast<std::size_t>(count));
  const double step = (hi_deg - lo_deg) / (count - 1);
  for (int i = 0; i < count; ++i) bearings[static_cast<std::size_t>(i)] = lo_deg + step * i;
  bearings.back() = hi_deg;
  return bearings;
}

GaussianSource::GaussianSource(std::uint64_t seed) : GaussianSource(seed, 0) {}

GaussianSource::GaussianSource(std::uint64_t master_seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double GaussianSource::uniform_open() {
  // 53 random bits mapped to the open interval (0, 1).
  const auto bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double GaussianSource::standard_normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
  const double angle = 2.0 * std::numbers::pi * uniform_open();
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

Complex GaussianSource::complex_normal(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = standard_normal();
  const double im = standard_normal();
  return {scale * re, scale * im};
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  // splitmix64 finalizer over the combined key.
  std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexMatrix steering_matrix(const ArrayGeometry& geometry, std::span<const double> bearings_deg) {
  const auto positions = geometry.positions();
  ComplexMatrix a(static_cast<Eigen::Index>(positions.size()),
                  static_cast<Eigen::Index>(bearings_deg.size()));
  for (std::size_t i = 0; i < bearings_deg.size(); ++i) {
    check_bearing(bearings_deg[i]);
    const double phase_step = std::numbers::pi * std::sin(bearings_deg[i] * kDegToRad);
    for (std::size_t k = 0; k < positions.size(); ++k) {
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
          std::polar(1.0, phase_step * static_cast<double>(positions[k]));
    }
  }
  return a;
}

SnapshotMatrix simulate_snapshots(const ArrayGeometry& geometry, const SourceScenario& scenario,
                                  const std::optional<CouplingModel>& coupling) {
  scenario.validate();
  const auto sources = static_cast<Eigen::Index>(scenario.source_count());
  const auto sensors = static_cast<Eigen::Index>(geometry.element_count());
  const auto snapshots = static_cast<Eigen::Index>(scenario.snapshots);

  ComplexMatrix response = steering_matrix(geometry, scenario.bearings_deg);
  if (coupling) response = coupling_matrix(geometry, *coupling) * response;

  GaussianSource rng(scenario.seed);
  ComplexMatrix signals(sources, snapshots);
  for (Eigen::Index t = 0; t < snapshots; ++t) {
    for (Eigen::Index i = 0; i < sources; ++i) {
      signals(i, t) = rng.complex_normal(scenario.power(static_cast<std::size_t>(i)));
    }
  }

  SnapshotMatrix out{response * signals};
  const double noise = scenario.noise_power();
  if (noise > 0.0) {
    for (Eigen::Index t = 0; t < snapshots; ++t) {
      for (Eigen::Index k = 0; k < sensors; ++k) out.data(k, t) += rng.complex_normal(noise);
    }
  }
  return out;
}

ComplexMatrix sample_covariance(const SnapshotMatrix& snapshots) {
  const auto& x = snapshots.data;
  if (x.cols() < 1) throw std::invalid_argument("sample covariance needs at least one snapshot");
  ComplexMatrix r = (x * x.adjoint()) / static_cast<double>(x.cols());
  // Symmetrize so R == R^H holds bit-for-bit.
  ComplexMatrix hermitian = (r + r.adjoint()) * 0.5;
  return hermitian;
}

ComplexMatrix analytic_covariance(const ArrayGeometry& geometry, const SourceScenario& scenario,
                                  const std::optional<CouplingModel>& coupling) {
  scenario.validate();
  ComplexMatrix a = steering_matrix(geometry, scenario.bearings_deg);
  if (coupling) a = coupling_matrix(geometry, *coupling) * a;
  Eigen::VectorXd powers(static_cast<Eigen::Index>(scenario.source_count()));
  for (Eigen::Index i = 0; i < powers.size(); ++i) powers(i) = scenario.power(static_cast<std::size_t>(i));
  ComplexMatrix r = a * powers.asDiagonal() * a.adjoint();
  r.diagonal().array() += scenario.noise_power();
  return r;
}

LagSeries::LagSeries(Lag max_lag, std::vector<Complex> values, std::vector<bool> present)
    : max_lag_(max_lag), values_(std::move(values)), present_(std::move(present)) {
  const auto expected = static_cast<std::size_t>(2 * max_lag_ + 1);
  if (values_.size() != expected || present_.size() != expected) {
    throw std::invalid_argument("lag series storage does not match its lag range");
  }
}

bool LagSeries::has(Lag lag) const noexcept {
  if (lag < -max_lag_ || lag > max_lag_) return false;
  return present_[static_cast<std::size_t>(lag + max_lag_)];
}

Complex LagSeries::at(Lag lag) const {
  if (!has(lag)) throw std::out_of_range("lag " + std::to_string(lag) + " is not in the coarray");
  return values_[static_cast<std::size_t>(lag + max_lag_)];
}

LagSeries coarray_pseudo_snapshot(const ComplexMatrix& covariance, const ArrayGeometry& geometry) {
  const auto positions = geometry.positions();
  const auto size = static_cast<Eigen::Index>(positions.size());
  if (covariance.rows() != size || covariance.cols() != size) {
    throw std::invalid_argument("covariance size does not match the geometry");
  }
  const Lag max_lag = geometry.aperture();
  const auto span = static_cast<std::size_t>(2 * max_lag + 1);
  std::vector<Complex> sums(span);
  std::vector<int> counts(span, 0);
  // Non-negative lags are averaged from the lower triangle (positions are
  // increasing); negative lags are their conjugates, so value(-l) ==
  // conj(value(l)) holds exactly.
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      const auto idx = static_cast<std::size_t>(positions[static_cast<std::size_t>(a)] -
                                                positions[static_cast<std::size_t>(b)] + max_lag);
      sums[idx] += covariance(a, b);
      ++counts[idx];
    }
  }
  std::vector<bool> present(span, false);
  const auto zero = static_cast<std::size_t>(max_lag);
  for (std::size_t i = zero; i < span; ++i) {
    if (counts[i] == 0) continue;
    sums[i] /= static_cast<double>(counts[i]);
    present[i] = true;
    if (i == zero) continue;
    present[2 * zero - i] = true;
    sums[2 * zero - i] = std::conj(sums[i]);
  }
  return LagSeries(max_lag, std::move(sums), std::move(present));
}

}  // namespace sparsearray
