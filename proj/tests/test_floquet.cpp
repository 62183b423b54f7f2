#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "prethermal/errors.hpp"
#include "prethermal/floquet.hpp"
#include "prethermal/propagator.hpp"

using namespace prethermal;
using cd = std::complex<double>;

TEST_CASE("quasienergy folding") {
  const double w = 3.0;
  CHECK(fold_quasienergy(0.2, w) == doctest::Approx(0.2));
  CHECK(fold_quasienergy(1.6, w) == doctest::Approx(-1.4));
  CHECK(fold_quasienergy(-1.5, w) == doctest::Approx(-1.5));
  CHECK(fold_quasienergy(1.5, w) == doctest::Approx(-1.5));
  for (double e = -20.0; e < 20.0; e += 0.37) {
    const double f = fold_quasienergy(e, w);
    CHECK(f >= -w / 2);
    CHECK(f < w / 2);
    CHECK(std::remainder(e - f, w) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("undriven spectrum: folded band energies and unit IPR") {
  const DriveParams drive(10.0, 0.0, 1.7);
  const PlaneWaveBasis basis(8, 0.0);
  const auto spec = floquet_spectrum(drive, basis);
  const auto bands = bloch_bands(10.0, basis);
  std::vector<double> expected;
  for (Eigen::Index b = 0; b < bands.bands(); ++b)
    expected.push_back(fold_quasienergy(bands.energies(b), drive.omega()));
  std::sort(expected.begin(), expected.end());
  for (Eigen::Index n = 0; n < spec.size(); ++n)
    CHECK(spec.quasienergies(n) == doctest::Approx(expected[n]).epsilon(1e-10));
  CHECK(ipr(overlaps(bands.state(0), spec)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("modes are orthonormal, reconstruct U and carry definite parity") {
  const DriveParams drive(10.0, 3.0, 2.6);
  const PlaneWaveBasis basis(12, 0.0);
  const auto u = DrivePropagator(drive, basis, default_steps(drive)).period_propagator();
  const auto spec = floquet_modes(u, drive, basis);
  const Eigen::MatrixXcd& v = spec.modes;
  CHECK((v.adjoint() * v - Eigen::MatrixXcd::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((spec.reconstruct() - u).cwiseAbs().maxCoeff() < 1e-11);
  const Eigen::MatrixXcd p = parity_matrix(basis).cast<cd>();
  for (Eigen::Index n = 0; n < spec.size(); ++n)
    CHECK((p * v.col(n) - double(spec.parity[n]) * v.col(n)).norm() < 1e-12);
  for (Eigen::Index n = 1; n < spec.size(); ++n) CHECK(spec.quasienergies(n) >= spec.quasienergies(n - 1));
}

TEST_CASE("IPR is invariant under per-mode phases") {
  const DriveParams drive(10.0, 5.0, 1.2);
  const PlaneWaveBasis basis(10, 0.0);
  auto spec = floquet_spectrum(drive, basis);
  const Eigen::VectorXcd psi0 = bloch_bands(10.0, basis).state(0);
  const double reference = ipr(overlaps(psi0, spec));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 5; ++trial) {
    for (Eigen::Index n = 0; n < spec.size(); ++n) spec.modes.col(n) *= std::polar(1.0, phase(rng));
    CHECK(ipr(overlaps(psi0, spec)) == doctest::Approx(reference).epsilon(1e-13));
    CHECK(ipr(overlaps(std::polar(1.0, phase(rng)) * psi0, spec)) ==
          doctest::Approx(reference).epsilon(1e-13));
  }
}

TEST_CASE("IPR of a basis state and of a uniform superposition") {
  const DriveParams drive(10.0, 2.0, 1.0);
  const PlaneWaveBasis basis(6, 0.3);
  const auto spec = floquet_spectrum(drive, basis);
  CHECK(ipr(overlaps(spec.modes.col(3), spec)) == doctest::Approx(1.0).epsilon(1e-12));
  const Eigen::VectorXcd uniform = spec.modes.rowwise().sum() / std::sqrt(double(spec.size()));
  CHECK(ipr(overlaps(uniform, spec)) == doctest::Approx(1.0 / spec.size()).epsilon(1e-12));
}

TEST_CASE("degenerate eigenphases are flagged and re-orthonormalised") {
  // Diagonal U with the phases at |m| = 1 and |m| = 2 made equal.
  const PlaneWaveBasis basis(3, 0.0);
  const DriveParams drive(10.0, 1.0, 1.0);
  Eigen::VectorXd phases(7);
  phases << 0.9, 0.4, 0.4, 0.1, 0.4, 0.4, 0.9;
  const Eigen::MatrixXcd u = (cd(0, -1) * phases.cast<cd>()).array().exp().matrix().asDiagonal();
  const auto spec = floquet_modes(u, drive, basis);
  CHECK(spec.flagged());
  CHECK(spec.near_degenerate_pairs >= 2);
  CHECK((spec.modes.adjoint() * spec.modes - Eigen::MatrixXcd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((spec.reconstruct() - u).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dimension mismatches are rejected") {
  const DriveParams drive(10.0, 1.0, 1.0);
  const PlaneWaveBasis basis(4, 0.0);
  const auto spec = floquet_spectrum(drive, basis);
  CHECK_THROWS_AS(overlaps(Eigen::VectorXcd::Ones(5), spec), DimensionMismatch);
  CHECK_THROWS_AS(floquet_modes(Eigen::MatrixXcd::Identity(5, 5), drive, basis), DimensionMismatch);
}

TEST_CASE("overlaps conserve probability") {
  const DriveParams drive(10.0, 7.0, 0.6);
  const PlaneWaveBasis basis(16, 0.0);
  const auto spec = floquet_spectrum(drive, basis);
  const auto c = overlaps(bloch_bands(10.0, basis).state(0), spec);
  CHECK(c.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  const double p = ipr(c);
  CHECK(p > 0.0);
  CHECK(p <= 1.0);
}
