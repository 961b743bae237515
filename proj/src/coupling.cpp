#include "sparsearray/coupling.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sparsearray {

CouplingModel::CouplingModel(Complex u1, int band_limit, double phase_decay)
    : u1_(u1), band_limit_(band_limit), phase_decay_(phase_decay) {
  if (!(std::abs(u1) < 1.0)) throw std::invalid_argument("coupling model requires |u1| < 1");
  if (band_limit < 1) throw std::invalid_argument("coupling band limit G must be >= 1");
  if (!std::isfinite(phase_decay)) throw std::invalid_argument("coupling phase decay must be finite");
}

CouplingModel CouplingModel::from_polar(double magnitude, double phase_rad, int band_limit,
                                        double phase_decay) {
  if (magnitude < 0.0) throw std::invalid_argument("coupling magnitude |u1| must be non-negative");
  return CouplingModel(std::polar(magnitude, phase_rad), band_limit, phase_decay);
}

CouplingModel CouplingModel::reference() {
  return from_polar(0.3, std::numbers::pi / 3.0);
}

Complex CouplingModel::coefficient(std::int64_t lag) const {
  const auto k = std::llabs(lag);
  if (k == 0) return {1.0, 0.0};
  if (k > band_limit_) return {0.0, 0.0};
  return u1_ * std::polar(1.0 / static_cast<double>(k), -static_cast<double>(k - 1) * phase_decay_);
}

ComplexMatrix coupling_matrix(const ArrayGeometry& geometry, const CouplingModel& model) {
  const auto positions = geometry.positions();
  const auto size = static_cast<Eigen::Index>(positions.size());
  ComplexMatrix u(size, size);
  for (Eigen::Index b = 0; b < size; ++b) {
    for (Eigen::Index c = 0; c < size; ++c) {
      u(b, c) = model.coefficient(positions[static_cast<std::size_t>(b)] -
                                  positions[static_cast<std::size_t>(c)]);
    }
  }
  return u;
}

double coupling_leakage(const ComplexMatrix& coupling) {
  const double total = coupling.squaredNorm();
  if (total == 0.0) throw std::invalid_argument("coupling leakage is undefined for a zero matrix");
  double off = 0.0;
  for (Eigen::Index c = 0; c < coupling.cols(); ++c) {
    for (Eigen::Index b = 0; b < coupling.rows(); ++b) {
      if (b != c) off += std::norm(coupling(b, c));
    }
  }
  return std::sqrt(off / total);
}

}  // namespace sparsearray
