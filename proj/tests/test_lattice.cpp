#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "prethermal/errors.hpp"
#include "prethermal/lattice.hpp"
#include "prethermal/units.hpp"

using namespace prethermal;

TEST_CASE("drive depth follows the modulation formula") {
  const DriveParams d(10.0, 1.0, 0.5);
  const double t_min = 3.0 * d.period() / 4.0;  // sin = -1
  CHECK(d.depth(0.0) == doctest::Approx(10.0));
  CHECK(d.depth(t_min) == doctest::Approx(0.0).epsilon(1e-12));
  const DriveParams strong(10.0, 10.0, 0.5);
  CHECK(strong.depth(t_min) == doctest::Approx(-90.0));
  CHECK(drive_depth(strong, d.period() / 4.0) == doctest::Approx(110.0));
  CHECK(DriveParams(10.0, 0.0, 3.0).depth(1.234) == 10.0);
}

TEST_CASE("drive phase shifts the modulation") {
  const DriveParams d(10.0, 2.0, 1.0, M_PI / 2.0);
  CHECK(d.depth(0.0) == doctest::Approx(30.0));
}

TEST_CASE("drive parameter validation") {
  CHECK_THROWS_AS(DriveParams(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DriveParams(10.0, -0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DriveParams(10.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PlaneWaveBasis(0), std::invalid_argument);
  CHECK_THROWS_AS(PlaneWaveBasis(4, 1.5), std::invalid_argument);
}

TEST_CASE("hamiltonian matches the written-out plane-wave form") {
  for (double q : {0.0, 0.3, -1.0}) {
    const PlaneWaveBasis basis(5, q);
    const Eigen::MatrixXd h = hamiltonian_matrix(basis, 7.5);
    const Eigen::MatrixXcd ref = oracle::hamiltonian(5, q, 7.5);
    CHECK((h.cast<std::complex<double>>() - ref).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("free particle bands are parabolas") {
  const auto spec = bloch_bands(0.0, 0.3, 6);
  std::vector<double> expected;
  for (int m = -6; m <= 6; ++m) expected.push_back((2.0 * m + 0.3) * (2.0 * m + 0.3));
  std::sort(expected.begin(), expected.end());
  for (Eigen::Index b = 0; b < spec.bands(); ++b)
    CHECK(spec.energies(b) == doctest::Approx(expected[b]).epsilon(1e-12));
}

TEST_CASE("bands agree with a real-space finite-difference solver") {
  for (double q : {0.0, 0.5, 1.0}) {
    const auto pw = bloch_bands(10.0, q, 16);
    const Eigen::VectorXd fd = oracle::real_space_bands(10.0, q, 600);
    for (Eigen::Index b = 0; b < 5; ++b) CHECK(pw.energies(b) == doctest::Approx(fd(b)).epsilon(1e-6));
  }
}

TEST_CASE("band table is converged in the cutoff") {
  for (double q : {-1.0, -0.35, 0.0, 0.8}) {
    const auto a = bloch_bands(10.0, q, 16, 5);
    const auto b = bloch_bands(10.0, q, 32, 5);
    for (Eigen::Index n = 0; n < 6; ++n) CHECK(std::abs(a.energies(n) - b.energies(n)) < 1e-8);
  }
}

TEST_CASE("tunneling rate and site frequency at the reference depth") {
  const auto units = PhysicalUnits::lithium7_1064nm();
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= 200; ++i) {
    const double e = bloch_bands(10.0, -1.0 + i / 100.0, 16, 0).energies(0);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  CHECK(units.energy_to_hz((hi - lo) / 4.0) == doctest::Approx(483.0).epsilon(0.01));
  CHECK(units.angular_to_hz(DriveParams(10.0, 0.0, 1.0).omega0()) == doctest::Approx(159e3).epsilon(0.01));
}

TEST_CASE("band states are orthonormal eigenvectors") {
  const PlaneWaveBasis basis(8, 0.4);
  const auto spec = bloch_bands(10.0, basis);
  const Eigen::MatrixXcd& v = spec.states;
  CHECK((v.adjoint() * v - Eigen::MatrixXcd::Identity(basis.dim(), basis.dim())).norm() < 1e-12);
  const Eigen::MatrixXcd h = hamiltonian_matrix(basis, 10.0).cast<std::complex<double>>();
  CHECK((h * v - v * spec.energies.asDiagonal()).norm() < 1e-10);
}

TEST_CASE("band parity at zero quasimomentum alternates") {
  const PlaneWaveBasis basis(10, 0.0);
  const auto spec = bloch_bands(10.0, basis, 12);
  const Eigen::MatrixXd p = parity_matrix(basis);
  for (Eigen::Index b = 0; b <= 12; ++b) {
    const Eigen::VectorXcd s = spec.state(b);
    const double sign = (b % 2 == 0) ? 1.0 : -1.0;
    CHECK((p.cast<std::complex<double>>() * s - sign * s).norm() < 1e-10);
  }
}

TEST_CASE("parity persists through free-particle degeneracies") {
  // At v0 = 0, q = 0 the pairs +-m are exactly degenerate.
  const PlaneWaveBasis basis(4, 0.0);
  const auto spec = bloch_bands(0.0, basis);
  const Eigen::MatrixXcd p = parity_matrix(basis).cast<std::complex<double>>();
  for (Eigen::Index b = 0; b < spec.bands(); ++b) {
    const double sign = (b % 2 == 0) ? 1.0 : -1.0;
    CHECK((p * spec.state(b) - sign * spec.state(b)).norm() < 1e-12);
  }
}

TEST_CASE("truncation guard") {
  const PlaneWaveBasis basis(4, 0.0);  // D = 9
  CHECK_NOTHROW(bloch_bands(10.0, basis, 6));
  CHECK_THROWS_AS(bloch_bands(10.0, basis, 7), TruncationError);
}

TEST_CASE("symmetry sectors reproduce the full hamiltonian") {
  for (double q : {0.0, 0.25}) {
    const PlaneWaveBasis basis(6, q);
    const auto sectors = symmetry_sectors(basis);
    CHECK(sectors.size() == (q == 0.0 ? 2u : 1u));
    Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    Eigen::Index total = 0;
    for (const auto& s : sectors) {
      rebuilt += s.embedding * s.hamiltonian(3.7) * s.embedding.transpose();
      total += s.dim();
    }
    CHECK(total == basis.dim());
    CHECK((rebuilt - hamiltonian_matrix(basis, 3.7)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("unit conversions") {
  const auto li = PhysicalUnits::lithium7_1064nm();
  CHECK(li.recoil_frequency_hz() == doctest::Approx(25118.0).epsilon(1e-3));
  const auto same = PhysicalUnits::from_species(7.0160034366, 1064e-9);
  CHECK(same.recoil_frequency_hz() == doctest::Approx(li.recoil_frequency_hz()).epsilon(1e-12));
  CHECK(li.recoil_to_microseconds(li.microseconds_to_recoil(150.0)) == doctest::Approx(150.0));
  CHECK(li.time_unit_s() == doctest::Approx(1.0 / (2.0 * M_PI * li.recoil_frequency_hz())));
  CHECK_THROWS_AS(PhysicalUnits(0.0), std::invalid_argument);
}
