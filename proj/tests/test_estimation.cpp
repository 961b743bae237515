#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sparsearray/estimation.hpp"

using namespace sparsearray;
using doctest::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ComplexMatrix analytic_smoothed(const ArrayGeometry& g, const SourceScenario& s) {
  const auto table = difference_coarray(g);
  return smoothed_matrix(coarray_pseudo_snapshot(analytic_covariance(g, s), g),
                         table.consecutive_halfwidth());
}

ComplexVector virtual_steering(Eigen::Index size, double bearing_deg) {
  const double u = std::sin(bearing_deg * std::numbers::pi / 180.0);
  ComplexVector a(size);
  for (Eigen::Index m = 0; m < size; ++m) a(m) = std::polar(1.0, std::numbers::pi * m * u);
  return a;
}

EstimationResult with_estimates(std::vector<double> e, bool under = false) {
  EstimationResult r;
  r.estimates_deg = std::move(e);
  r.under_detected = under;
  return r;
}

}  // namespace

TEST_CASE("smoothed matrix of a single noise-free source is rank one along the steering vector") {
  const auto g = emisc_positions(10);
  const auto m = analytic_smoothed(g, SourceScenario{{21.0}, {}, kInf, 1, 0});
  REQUIRE(m.rows() == 32);
  CHECK((m - m.adjoint()).norm() == 0.0);
  const auto eig = hermitian_eigen(m);
  const double top = eig.values(31);
  CHECK(eig.values(30) < 1e-10 * top);
  const ComplexVector principal = eig.vectors.col(31);
  const ComplexVector a = virtual_steering(32, 21.0) / std::sqrt(32.0);
  CHECK(std::abs(principal.dot(a)) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("smoothed matrix edge cases") {
  const std::vector<Complex> values{Complex(0.5, -0.25), Complex(3.0, 0.0), Complex(0.5, 0.25)};
  const LagSeries pseudo(1, values, {true, true, true});
  const auto one = smoothed_matrix(pseudo, 0);
  REQUIRE(one.rows() == 1);
  CHECK(one(0, 0).real() == Approx(9.0));
  CHECK(one(0, 0).imag() == 0.0);

  const auto two = smoothed_matrix(pseudo, 1);
  CHECK((two - two.adjoint()).norm() == 0.0);
  // Subarrays (v(-1), v(0)) and (v(0), v(1)) averaged.
  CHECK(std::abs(two(0, 0) - 0.5 * (std::norm(values[0]) + std::norm(values[1]))) < 1e-15);

  const LagSeries gap(2, std::vector<Complex>(5), {true, false, true, false, true});
  CHECK_THROWS_AS(smoothed_matrix(gap, 1), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_matrix(pseudo, -1), std::invalid_argument);
}

TEST_CASE("Hermitian eigendecomposition contract") {
  const auto g = emisc_positions(12);
  SourceScenario s{{-50.0, -10.0, 40.0}, {}, 0.0, 300, 17};
  const auto table = difference_coarray(g);
  const auto pseudo =
      coarray_pseudo_snapshot(sample_covariance(simulate_snapshots(g, s, CouplingModel::reference())), g);
  const auto m = smoothed_matrix(pseudo, table.consecutive_halfwidth());
  const auto eig = hermitian_eigen(m);
  const ComplexMatrix rebuilt = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  CHECK((m - rebuilt).norm() <= 1e-8 * m.norm());
  for (Eigen::Index i = 1; i < eig.values.size(); ++i) CHECK(eig.values(i) >= eig.values(i - 1));
}

TEST_CASE("MUSIC on noise-free data") {
  const auto g = emisc_positions(10);
  MusicConfig config;
  config.num_sources = 1;

  const auto broadside = estimate_doas(analytic_smoothed(g, SourceScenario{{0.0}, {}, kInf, 1, 0}), config);
  REQUIRE(broadside.estimates_deg.size() == 1);
  CHECK_FALSE(broadside.under_detected);
  CHECK(std::abs(broadside.estimates_deg[0]) <= 180.0 / (config.grid_points - 1));

  SourceScenario three{{-47.3, 2.2, 61.9}, {}, kInf, 1, 0};
  config.num_sources = 3;
  const auto r = estimate_doas(analytic_smoothed(g, three), config);
  REQUIRE(r.estimates_deg.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(r.estimates_deg[i] == Approx(three.bearings_deg[i]).epsilon(1e-4));
}

TEST_CASE("finer grid never does worse on noise-free data") {
  const auto g = emisc_positions(10);
  const SourceScenario s{{-33.37, 17.83}, {}, kInf, 1, 0};
  const auto m = analytic_smoothed(g, s);
  auto error = [&](int grid) {
    MusicConfig c;
    c.num_sources = 2;
    c.grid_points = grid;
    c.refine_peaks = false;
    const auto r = estimate_doas(m, c);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(r.estimates_deg[i] - s.bearings_deg[i]));
    return worst;
  };
  const double coarse = error(181);
  const double fine = error(1801);
  const double finest = error(18001);
  CHECK(fine <= coarse);
  CHECK(finest <= fine);
  CHECK(finest <= 0.005);
}

TEST_CASE("estimates are invariant to positive scaling of the smoothed matrix") {
  const auto g = emisc_positions(11);
  SourceScenario s{{-25.0, 4.0, 38.0}, {}, 5.0, 400, 8};
  const auto table = difference_coarray(g);
  const auto m = smoothed_matrix(coarray_pseudo_snapshot(sample_covariance(simulate_snapshots(g, s)), g),
                                 table.consecutive_halfwidth());
  MusicConfig c;
  c.num_sources = 3;
  c.refine_peaks = false;
  const auto base = estimate_doas(m, c);
  for (double scale : {1e-3, 7.5, 1e4}) {
    const ComplexMatrix scaled = m * scale;
    CHECK(estimate_doas(scaled, c).estimates_deg == base.estimates_deg);
  }
}

TEST_CASE("two sources at +-30 deg, EMISC K=10, SNR 20 dB") {
  const auto g = emisc_positions(10);
  const std::vector<double> truth{-30.0, 30.0};
  MusicConfig c;
  c.num_sources = 2;
  int good = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    SourceScenario s{truth, {}, 20.0, 1000, trial_seed(5, t)};
    const auto r = estimate_from_covariance(sample_covariance(simulate_snapshots(g, s)), g, c);
    if (r.estimates_deg.size() == 2 && std::abs(r.estimates_deg[0] - truth[0]) < 0.5 &&
        std::abs(r.estimates_deg[1] - truth[1]) < 0.5) {
      ++good;
    }
  }
  CHECK(good >= 95);
}

TEST_CASE("MUSIC input validation and under-detection") {
  MusicConfig c;
  c.num_sources = 4;
  CHECK_THROWS_AS(estimate_doas(ComplexMatrix::Identity(4, 4), c), std::invalid_argument);
  c.num_sources = 0;
  CHECK_THROWS_AS(estimate_doas(ComplexMatrix::Identity(4, 4), c), std::invalid_argument);
  CHECK_THROWS_AS(estimate_doas(ComplexMatrix::Identity(4, 3), c), std::invalid_argument);

  c.num_sources = 1;
  const auto flat = estimate_doas(ComplexMatrix::Identity(5, 5) * 2.0, c);
  CHECK(flat.under_detected);
  CHECK(flat.estimates_deg.empty());

  // A three-point grid has a single interior sample, so at most one peak.
  const auto g = emisc_positions(10);
  const auto m = analytic_smoothed(g, SourceScenario{{-0.5, 40.0}, {}, 10.0, 1, 0});
  c.num_sources = 2;
  c.grid_points = 3;
  const auto sparse = estimate_doas(m, c);
  CHECK(sparse.under_detected);
  CHECK(sparse.estimates_deg.size() <= 1);
}

TEST_CASE("spectrum dump") {
  const auto g = emisc_positions(10);
  MusicConfig c;
  c.num_sources = 1;
  c.grid_points = 181;
  c.keep_spectrum = true;
  const auto r = estimate_doas(analytic_smoothed(g, SourceScenario{{10.0}, {}, 10.0, 1, 0}), c);
  REQUIRE(r.spectrum);
  CHECK(r.spectrum->size() == 181);
  CHECK(r.spectrum->front().angle_deg == -90.0);
  CHECK(r.spectrum->back().angle_deg == 90.0);
  std::ostringstream out;
  write_spectrum_csv(out, r);
  CHECK(out.str().rfind("angle_deg,pseudo_spectrum\n-90,", 0) == 0);

  c.keep_spectrum = false;
  CHECK_THROWS(write_spectrum_csv(out, estimate_doas(analytic_smoothed(g, SourceScenario{{10.0}, {}, 10.0, 1, 0}), c)));
}

TEST_CASE("rmse definition") {
  const std::vector<double> truth{-10.0, 20.0};
  const std::vector<EstimationResult> exact{with_estimates({-10.0, 20.0}), with_estimates({20.0, -10.0})};
  CHECK(rmse(exact, truth).rmse_deg == 0.0);

  const std::vector<double> one{5.0};
  const std::vector<EstimationResult> off{with_estimates({7.0})};
  CHECK(rmse(off, one).rmse_deg == Approx(2.0));

  // Trial 1 error 1 deg, trial 2 error 2 deg: mean squared error 2.5.
  const std::vector<EstimationResult> two{with_estimates({6.0}), with_estimates({3.0})};
  CHECK(rmse(two, one).rmse_deg == Approx(std::sqrt(2.5)));

  CHECK_THROWS_AS(rmse(std::vector<EstimationResult>{}, one), std::invalid_argument);
}

TEST_CASE("under-detections are excluded from rmse and counted") {
  const std::vector<double> truth{-10.0, 20.0};
  const std::vector<EstimationResult> results{with_estimates({-9.0, 21.0}), with_estimates({-10.0}, true),
                                              with_estimates({}, true)};
  const auto report = rmse(results, truth);
  CHECK(report.trials_used + report.underdetected == results.size());
  CHECK(report.underdetected == 2);
  CHECK(report.rmse_deg == Approx(1.0));

  // Inclusive: trial 2 misses 20 deg by 30, trial 3 returns nothing.
  const double expected = std::sqrt((1.0 + 1.0 + 0.0 + 900.0 + 2 * kMissedSourceErrorDeg * kMissedSourceErrorDeg) / 6.0);
  CHECK(rmse_inclusive(results, truth) == Approx(expected));

  const std::vector<EstimationResult> none{with_estimates({}, true)};
  CHECK(std::isnan(rmse(none, truth).rmse_deg));
}
