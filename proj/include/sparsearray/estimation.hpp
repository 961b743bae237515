#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sparsearray/coupling.hpp"
#include "sparsearray/signal.hpp"

namespace sparsearray {

struct MusicConfig {
  int grid_points = 18001;  // uniform over [-90, 90] degrees
  int num_sources = 1;
  bool refine_peaks = true;  // parabolic interpolation on the log spectrum
  bool keep_spectrum = false;
};

struct SpectrumPoint {
  double angle_deg;
  double value;
};

struct EstimationResult {
  std::vector<double> estimates_deg;  // ascending
  std::optional<std::vector<SpectrumPoint>> spectrum;
  std::uint64_t trial_seed = 0;
  /// Set when fewer than num_sources peaks were found, or when the smoothed
  /// matrix has no signal/noise eigenvalue separation.
  bool under_detected = false;
};

/// Spatially smoothed covariance of the virtual ULA on lags [-Lc, Lc]:
/// the average of the Lc + 1 overlapping (Lc + 1)-element subarray outer
/// products. Throws std::invalid_argument if a lag in [-Lc, Lc] is missing.
ComplexMatrix smoothed_matrix(const LagSeries& pseudo, Lag consecutive_halfwidth);

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // columns match values
};

HermitianEigen hermitian_eigen(const ComplexMatrix& matrix);

/// MUSIC on a smoothed virtual-ULA covariance. The noise subspace is spanned by
/// the eigenvectors of the (M - N) smallest eigenvalues; the N largest interior
/// local maxima of 1 / ||E_n^H a(theta)||^2 are returned in ascending order.
/// Equal peaks resolve to the lower angle.
EstimationResult estimate_doas(const ComplexMatrix& smoothed, const MusicConfig& config);

/// Full pipeline for one trial: covariance -> pseudo-snapshot -> smoothing -> MUSIC.
EstimationResult estimate_from_covariance(const ComplexMatrix& covariance,
                                          const ArrayGeometry& geometry,
                                          const MusicConfig& config);

struct RmseReport {
  double rmse_deg = 0.0;         // NaN when no trial is usable
  std::size_t trials_used = 0;   // trials with exactly N estimates
  std::size_t underdetected = 0; // trials excluded
};

/// Root-mean-square bearing error over all complete trials, pairing sorted
/// estimates with sorted truth index-wise. Under-detected trials are excluded
/// and counted. Throws std::invalid_argument on empty input.
RmseReport rmse(std::span<const EstimationResult> results, std::span<const double> truth_deg);

/// Like rmse(), but under-detected trials are kept: each true bearing takes the
/// error to its nearest returned estimate, or kMissedSourceErrorDeg when the
/// trial returned nothing.
double rmse_inclusive(std::span<const EstimationResult> results, std::span<const double> truth_deg);

inline constexpr double kMissedSourceErrorDeg = 180.0;

/// Writes `angle_deg,pseudo_spectrum` rows. Requires keep_spectrum.
void write_spectrum_csv(std::ostream& out, const EstimationResult& result);

}  // namespace sparsearray
