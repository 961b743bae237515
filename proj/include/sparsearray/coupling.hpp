#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "sparsearray/geometry.hpp"

namespace sparsearray {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Banded mutual-coupling law: u_0 = 1 and
/// u_k = u1 * exp(-j (k - 1) phase_decay) / k for 1 <= k <= band_limit,
/// zero beyond the band. Banding is on the lag |p_b - p_c|, not on matrix index.
class CouplingModel {
 public:
  static constexpr int kDefaultBandLimit = 100;
  static constexpr double kDefaultPhaseDecay = std::numbers::pi / 8.0;

  explicit CouplingModel(Complex u1, int band_limit = kDefaultBandLimit,
                         double phase_decay = kDefaultPhaseDecay);

  static CouplingModel from_polar(double magnitude, double phase_rad,
                                  int band_limit = kDefaultBandLimit,
                                  double phase_decay = kDefaultPhaseDecay);

  /// The simulation default u1 = 0.3 exp(j pi/3), G = 100, pi/8 phase step.
  static CouplingModel reference();

  Complex u1() const noexcept { return u1_; }
  int band_limit() const noexcept { return band_limit_; }
  double phase_decay() const noexcept { return phase_decay_; }

  /// Coupling coefficient at lag magnitude k (u_0 = 1, zero past the band).
  Complex coefficient(std::int64_t lag) const;

 private:
  Complex u1_;
  int band_limit_;
  double phase_decay_;
};

/// K x K matrix with entry (b, c) = u_{|p_b - p_c|}.
ComplexMatrix coupling_matrix(const ArrayGeometry& geometry, const CouplingModel& model);

/// ||U - diag(U)||_F / ||U||_F.
double coupling_leakage(const ComplexMatrix& coupling);

}  // namespace sparsearray
