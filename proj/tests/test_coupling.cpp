#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "sparsearray/coupling.hpp"

using namespace sparsearray;
using doctest::Approx;

namespace {

std::vector<Position> vec(const ArrayGeometry& g) { return {g.positions().begin(), g.positions().end()}; }

const Complex kReferenceU1 = std::polar(0.3, std::numbers::pi / 3.0);

}  // namespace

TEST_CASE("coupling model validation") {
  CHECK_THROWS_AS(CouplingModel(Complex(1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(CouplingModel(Complex(0.8, 0.8)), std::invalid_argument);
  CHECK_THROWS_AS(CouplingModel(Complex(0.1, 0.0), 0), std::invalid_argument);
  CHECK_THROWS_AS(CouplingModel::from_polar(-0.1, 0.0), std::invalid_argument);
  const auto ref = CouplingModel::reference();
  CHECK(std::abs(ref.u1() - kReferenceU1) < 1e-15);
  CHECK(ref.band_limit() == 100);
  CHECK(ref.phase_decay() == Approx(std::numbers::pi / 8.0));
}

TEST_CASE("coefficient law: |u_k| = |u1| / k, zero past the band") {
  const CouplingModel model(kReferenceU1, 10);
  CHECK(model.coefficient(0) == Complex(1.0, 0.0));
  for (int k = 1; k <= 10; ++k) {
    CHECK(std::abs(model.coefficient(k)) == Approx(0.3 / k).epsilon(1e-14));
    CHECK(model.coefficient(-k) == model.coefficient(k));
    for (int i = 1; i <= 10; ++i) {
      CHECK(std::abs(model.coefficient(i) / model.coefficient(k)) == Approx(double(k) / i).epsilon(1e-13));
    }
  }
  CHECK(std::arg(model.coefficient(3)) == Approx(std::numbers::pi / 3.0 - 2.0 * std::numbers::pi / 8.0));
  CHECK(model.coefficient(11) == Complex(0.0, 0.0));
}

TEST_CASE("coupling matrix") {
  SUBCASE("u1 = 0 gives identity") {
    const auto u = coupling_matrix(emisc_positions(12), CouplingModel(Complex(0.0, 0.0)));
    CHECK(u.isApprox(ComplexMatrix::Identity(12, 12), 0.0));
  }
  SUBCASE("two elements one apart") {
    const auto u = coupling_matrix(ula_positions(2), CouplingModel(kReferenceU1, 100));
    CHECK(std::abs(u(0, 1) - kReferenceU1) < 1e-15);
    CHECK(std::abs(u(1, 0) - kReferenceU1) < 1e-15);
    CHECK(u(0, 0) == Complex(1.0, 0.0));
  }
  SUBCASE("banding is on lag magnitude, not index distance") {
    const auto g = custom_positions({0, 5, 6});
    const auto u = coupling_matrix(g, CouplingModel(kReferenceU1, 2));
    CHECK(u(0, 1) == Complex(0.0, 0.0));  // adjacent indices, lag 5
    CHECK(u(1, 2) != Complex(0.0, 0.0));  // lag 1
  }
  SUBCASE("complex symmetric") {
    for (int k : {10, 17, 36}) {
      const auto u = coupling_matrix(emisc_positions(k), CouplingModel::reference());
      CHECK(u == u.transpose());
    }
  }
}

TEST_CASE("coupling leakage") {
  CHECK(coupling_leakage(ComplexMatrix::Identity(5, 5)) == 0.0);
  CHECK_THROWS_AS(coupling_leakage(ComplexMatrix::Zero(3, 3)), std::invalid_argument);

  const auto g = nested_positions(5, 5);
  const auto at = [&](double mag) {
    return coupling_leakage(coupling_matrix(g, CouplingModel::from_polar(mag, std::numbers::pi / 3.0)));
  };
  CHECK(at(0.4) > at(0.2));
  double previous = at(0.0);
  for (double mag = 0.01; mag < 0.99; mag += 0.01) {
    const double current = at(mag);
    CHECK(current > previous);
    previous = current;
  }

  for (int k : {10, 16, 25, 36}) {
    const auto e = emisc_positions(k);
    const double expected = oracle::coupling_leakage(vec(e), kReferenceU1, 100, std::numbers::pi / 8.0);
    CHECK(coupling_leakage(coupling_matrix(e, CouplingModel::reference())) == Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("EMISC leaks less than nested at the reference coupling") {
  const auto model = CouplingModel::reference();
  const double emisc = coupling_leakage(coupling_matrix(emisc_positions(16), model));
  const double nested = coupling_leakage(coupling_matrix(nested_positions(8, 8), model));
  CHECK(emisc < nested);
  CHECK(emisc == Approx(oracle::coupling_leakage(vec(emisc_positions(16)), kReferenceU1, 100, std::numbers::pi / 8)));
  CHECK(nested == Approx(oracle::coupling_leakage(vec(nested_positions(8, 8)), kReferenceU1, 100, std::numbers::pi / 8)));
}

TEST_CASE("leakage depends only on the weight function") {
  // A mirrored array has the same weight function.
  for (int k : {10, 13, 21}) {
    const auto g = emisc_positions(k);
    std::vector<Position> mirrored;
    for (auto p : g.positions()) mirrored.push_back(g.aperture() - p);
    const auto model = CouplingModel::reference();
    CHECK(coupling_leakage(coupling_matrix(g, model)) ==
          Approx(coupling_leakage(coupling_matrix(custom_positions(mirrored), model))).epsilon(1e-14));
  }
}
