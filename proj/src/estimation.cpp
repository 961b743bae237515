#include "sparsearray/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sparsearray {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kSpectrumFloor = 1e-300;

double grid_angle(int index, int grid_points) {
  return -90.0 + 180.0 * static_cast<double>(index) / static_cast<double>(grid_points - 1);
}

/// Coefficients c_d = sum_m P(m, m + d), d = 0..M-1, of the null spectrum
/// Q(u) = a^H P a = c_0 + 2 Re sum_{d>0} c_d exp(j pi d u).
std::vector<Complex> null_spectrum_coefficients(const ComplexMatrix& projector) {
  const auto size = projector.rows();
  std::vector<Complex> c(static_cast<std::size_t>(size));
  for (Eigen::Index d = 0; d < size; ++d) {
    Complex sum{};
    for (Eigen::Index m = 0; m + d < size; ++m) sum += projector(m, m + d);
    c[static_cast<std::size_t>(d)] = sum;
  }
  return c;
}

double null_spectrum(const std::vector<Complex>& c, double angle_deg) {
  const Complex z = std::polar(1.0, std::numbers::pi * std::sin(angle_deg * kDegToRad));
  Complex acc{};
  for (std::size_t d = c.size() - 1; d >= 1; --d) acc = (acc + c[d]) * z;
  return std::max(c[0].real() + 2.0 * acc.real(), kSpectrumFloor);
}

/// ||E_n^H a(theta)||^2 evaluated directly; used for peak refinement.
double null_spectrum_direct(const ComplexMatrix& noise_basis, double angle_deg) {
  const auto size = noise_basis.rows();
  const double step = std::numbers::pi * std::sin(angle_deg * kDegToRad);
  ComplexVector a(size);
  for (Eigen::Index m = 0; m < size; ++m) a(m) = std::polar(1.0, step * static_cast<double>(m));
  return std::max((noise_basis.adjoint() * a).squaredNorm(), kSpectrumFloor);
}

}  // namespace

ComplexMatrix smoothed_matrix(const LagSeries& pseudo, Lag consecutive_halfwidth) {
  if (consecutive_halfwidth < 0) throw std::invalid_argument("consecutive half-width must be >= 0");
  const Lag lc = consecutive_halfwidth;
  for (Lag lag = -lc; lag <= lc; ++lag) {
    if (!pseudo.has(lag)) {
      throw std::invalid_argument("smoothing needs every lag in [-" + std::to_string(lc) + ", " +
                                  std::to_string(lc) + "]; lag " + std::to_string(lag) +
                                  " is missing");
    }
  }
  const auto size = static_cast<Eigen::Index>(lc + 1);
  // Column k holds subarray k of the virtual ULA: lags k - Lc .. k.
  ComplexMatrix subarrays(size, size);
  for (Eigen::Index k = 0; k < size; ++k) {
    for (Eigen::Index m = 0; m < size; ++m) subarrays(m, k) = pseudo.at(k + m - lc);
  }
  ComplexMatrix r = subarrays * subarrays.adjoint() / static_cast<double>(size);
  ComplexMatrix hermitian = (r + r.adjoint()) * 0.5;
  return hermitian;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& matrix) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EstimationResult estimate_doas(const ComplexMatrix& smoothed, const MusicConfig& config) {
  const auto size = smoothed.rows();
  const int sources = config.num_sources;
  if (smoothed.cols() != size) throw std::invalid_argument("MUSIC needs a square matrix");
  if (sources < 1 || sources >= size) {
    throw std::invalid_argument("MUSIC needs 1 <= N < matrix dimension (N = " +
                                std::to_string(sources) + ", dimension " + std::to_string(size) + ")");
  }
  if (config.grid_points < 3) throw std::invalid_argument("MUSIC grid needs at least 3 points");

  EstimationResult result;
  const auto eig = hermitian_eigen(smoothed);
  const double spread = eig.values(size - 1) - eig.values(0);
  const double scale = std::max(std::abs(eig.values(size - 1)), std::abs(eig.values(0)));
  if (!(spread > 1e-12 * scale)) {
    result.under_detected = true;
    return result;
  }

  const ComplexMatrix noise_basis = eig.vectors.leftCols(size - sources);
  const auto coefficients = null_spectrum_coefficients(noise_basis * noise_basis.adjoint());

  const int grid = config.grid_points;
  std::vector<double> null_values(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    null_values[static_cast<std::size_t>(i)] = null_spectrum(coefficients, grid_angle(i, grid));
  }
  if (config.keep_spectrum) {
    std::vector<SpectrumPoint> spectrum(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
      spectrum[static_cast<std::size_t>(i)] = {grid_angle(i, grid), 1.0 / null_values[static_cast<std::size_t>(i)]};
    }
    result.spectrum = std::move(spectrum);
  }

  // Interior local maxima of the spectrum are local minima of the null
  // spectrum; on a plateau the leftmost sample is the peak.
  std::vector<int> peaks;
  for (int i = 1; i + 1 < grid; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (null_values[u] < null_values[u - 1] && null_values[u] <= null_values[u + 1]) peaks.push_back(i);
  }
  std::ranges::stable_sort(peaks, [&](int a, int b) {
    return null_values[static_cast<std::size_t>(a)] < null_values[static_cast<std::size_t>(b)];
  });
  if (static_cast<int>(peaks.size()) < sources) {
    result.under_detected = true;
  } else {
    peaks.resize(static_cast<std::size_t>(sources));
  }

  const double step = 180.0 / static_cast<double>(grid - 1);
  for (const int i : peaks) {
    double angle = grid_angle(i, grid);
    if (config.refine_peaks) {
      const double left = -std::log(null_spectrum_direct(noise_basis, angle - step));
      const double centre = -std::log(null_spectrum_direct(noise_basis, angle));
      const double right = -std::log(null_spectrum_direct(noise_basis, angle + step));
      const double curvature = left - 2.0 * centre + right;
      if (curvature < 0.0) {
        const double offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
        angle += offset * step;
      }
    }
    result.estimates_deg.push_back(angle);
  }
  std::ranges::sort(result.estimates_deg);
  return result;
}

EstimationResult estimate_from_covariance(const ComplexMatrix& covariance,
                                          const ArrayGeometry& geometry,
                                          const MusicConfig& config) {
  const auto table = difference_coarray(geometry);
  const auto pseudo = coarray_pseudo_snapshot(covariance, geometry);
  return estimate_doas(smoothed_matrix(pseudo, table.consecutive_halfwidth()), config);
}

RmseReport rmse(std::span<const EstimationResult> results, std::span<const double> truth_deg) {
  if (results.empty()) throw std::invalid_argument("RMSE needs at least one trial");
  if (truth_deg.empty()) throw std::invalid_argument("RMSE needs at least one true bearing");
  std::vector<double> truth(truth_deg.begin(), truth_deg.end());
  std::ranges::sort(truth);

  RmseReport report;
  double sum = 0.0;
  for (const auto& r : results) {
    if (r.under_detected || r.estimates_deg.size() != truth.size()) {
      ++report.underdetected;
      continue;
    }
    ++report.trials_used;
    std::vector<double> est = r.estimates_deg;
    std::ranges::sort(est);
    for (std::size_t i = 0; i < truth.size(); ++i) sum += (est[i] - truth[i]) * (est[i] - truth[i]);
  }
  report.rmse_deg = report.trials_used == 0
                        ? std::numeric_limits<double>::quiet_NaN()
                        : std::sqrt(sum / static_cast<double>(report.trials_used * truth.size()));
  return report;
}

double rmse_inclusive(std::span<const EstimationResult> results, std::span<const double> truth_deg) {
  if (results.empty()) throw std::invalid_argument("RMSE needs at least one trial");
  if (truth_deg.empty()) throw std::invalid_argument("RMSE needs at least one true bearing");
  std::vector<double> truth(truth_deg.begin(), truth_deg.end());
  std::ranges::sort(truth);

  double sum = 0.0;
  for (const auto& r : results) {
    std::vector<double> est = r.estimates_deg;
    std::ranges::sort(est);
    const bool complete = !r.under_detected && est.size() == truth.size();
    for (std::size_t i = 0; i < truth.size(); ++i) {
      double err = kMissedSourceErrorDeg;
      if (complete) {
        err = est[i] - truth[i];
      } else {
        for (const double e : est) err = std::min(err, std::abs(e - truth[i]));
      }
      sum += err * err;
    }
  }
  return std::sqrt(sum / static_cast<double>(results.size() * truth.size()));
}

void write_spectrum_csv(std::ostream& out, const EstimationResult& result) {
  if (!result.spectrum) throw std::invalid_argument("estimation result carries no spectrum");
  out << "angle_deg,pseudo_spectrum\n";
  char line[64];
  for (const auto& p : *result.spectrum) {
    std::snprintf(line, sizeof line, "%.6g,%.6g\n", p.angle_deg, p.value);
    out << line;
  }
}

}  // namespace sparsearray
