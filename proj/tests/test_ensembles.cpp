#include <doctest.h>

#include "prethermal/errors.hpp"
#include "prethermal/ensembles.hpp"
#include "prethermal/propagator.hpp"

using namespace prethermal;
using cd = std::complex<double>;

namespace {

// Band occupations from a generic eigensolver, no sector logic.
std::vector<double> occupations_oracle(const DriveParams& drive, const PlaneWaveBasis& basis, int b_max) {
  const auto u = DrivePropagator(drive, basis, default_steps(drive)).period_propagator();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u);
  Eigen::MatrixXcd v = es.eigenvectors();
  for (Eigen::Index n = 0; n < v.cols(); ++n) v.col(n).normalize();
  const auto bands = bloch_bands(drive.v0(), basis);
  std::vector<double> out(b_max + 1, 0.0);
  for (Eigen::Index n = 0; n < v.cols(); ++n) {
    const double w = std::norm(bands.state(0).dot(v.col(n)));
    for (int b = 0; b <= b_max; ++b) out[b] += w * std::norm(bands.state(b).dot(v.col(n)));
  }
  return out;
}

}  // namespace

TEST_CASE("undriven cell stays in the ground band") {
  CellSettings s;
  s.m_max = 10;
  const auto r = evaluate_cell(0.0, 1.3, s);
  CHECK(r.ipr == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.occupations[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.occupations.above(0) < 1e-20);
}

TEST_CASE("ground-band occupation equals the IPR exactly") {
  CellSettings s;
  s.m_max = 12;
  for (auto [a, w] : {std::pair{3.0, 2.6}, std::pair{1.0, 0.3}, std::pair{8.0, 5.0}}) {
    const auto r = evaluate_cell(a, w, s);
    CHECK(r.occupations[0] == r.ipr);
  }
}

TEST_CASE("band occupations agree with a generic eigensolver") {
  CellSettings s;
  s.m_max = 8;
  s.b_max = 8;
  for (auto [a, w] : {std::pair{3.0, 2.6}, std::pair{0.7, 1.4}}) {
    const auto r = evaluate_cell(a, w, s);
    const auto ref = occupations_oracle(DriveParams(10.0, a, w), PlaneWaveBasis(8, 0.0), 8);
    for (int b = 0; b <= 8; ++b) CHECK(r.occupations[b] == doctest::Approx(ref[b]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("odd bands stay empty at zero quasimomentum") {
  CellSettings s;
  for (auto [a, w] : {std::pair{3.0, 2.6}, std::pair{10.0, 0.2}, std::pair{0.5, 1.1}}) {
    const auto r = evaluate_cell(a, w, s);
    CHECK(r.occupations.odd_total() < 1e-8);
    CHECK(r.occupations.total() <= 1.0 + 1e-12);
  }
}

TEST_CASE("odd bands fill away from zero quasimomentum") {
  CellSettings s;
  s.m_max = 10;
  s.q = 0.5;
  const auto r = evaluate_cell(3.0, 2.6, s);
  CHECK(r.occupations.odd_total() > 1e-6);
}

TEST_CASE("PGE coefficients") {
  OverlapVector c;
  c.c = Eigen::VectorXcd(4);
  c.c << cd(std::sqrt(0.5), 0.0), cd(0.0, std::sqrt(0.3)), cd(std::sqrt(0.2), 0.0), 0.0;
  const auto p = pge_coefficients(c, 1000.0);
  CHECK(p.mean_occupations[0] == doctest::Approx(500.0));
  CHECK(p.mean_occupations[1] == doctest::Approx(300.0));
  CHECK(p.eta[0] == doctest::Approx(std::log(1.0 + 1.0 / 500.0)));
  CHECK(p.eta[2] == doctest::Approx(std::log(1.0 + 1.0 / 200.0)));
  CHECK(p.present(1));
  CHECK_FALSE(p.present(3));
  CHECK(std::isinf(p.eta[3]));
  CHECK_THROWS_AS(pge_coefficients(c, 0.0), std::invalid_argument);
}

TEST_CASE("occupations need ground-band overlaps from the same basis") {
  const DriveParams drive(10.0, 2.0, 1.5);
  const PlaneWaveBasis basis(6, 0.0);
  const auto spec = floquet_spectrum(drive, basis);
  const auto bands = bloch_bands(10.0, basis);
  CHECK_THROWS_AS(stroboscopic_band_occupations(overlaps(bands.state(2), spec), spec, bands, 4),
                  std::invalid_argument);
  const auto other = bloch_bands(10.0, PlaneWaveBasis(5, 0.0));
  CHECK_THROWS_AS(stroboscopic_band_occupations(overlaps(bands.state(0), spec), spec, other, 4),
                  DimensionMismatch);
}

TEST_CASE("map channels, zero-amplitude row and worker independence") {
  const MapGrid grid = MapGrid::logarithmic(0.5, 5.0, 2, 1.0, 4.0, 3, true);
  PgeMapOptions options;
  options.cell.m_max = 10;
  options.bands = {0, 2, 4};
  options.cell.b_max = 4;
  options.diagnostics = true;
  options.workers = 1;
  const ParameterMap serial = pge_map(grid, options);
  options.workers = 3;
  const ParameterMap parallel = pge_map(grid, options);

  CHECK(serial.channel_names() == std::vector<std::string>{"f0", "f2", "f4", "ipr", "odd_total", "above_b_max"});
  for (const auto& name : serial.channel_names()) CHECK(serial.channel(name) == parallel.channel(name));
  for (std::size_t j = 0; j < grid.omega.size(); ++j) CHECK(serial.channel("f0")(0, j) == doctest::Approx(1.0));
  CHECK(serial.channel("f0") == serial.channel("ipr"));
  CHECK(serial.failures.empty());
}

TEST_CASE("failing cells are recorded, not thrown") {
  const MapGrid grid = MapGrid::logarithmic(1.0, 2.0, 2, 1.0, 2.0, 2);
  PgeMapOptions options;
  options.cell.m_max = 2;  // D = 5 cannot resolve band 4
  options.cell.b_max = 4;
  options.bands = {0};
  const auto map = pge_map(grid, options);
  CHECK(map.failures.size() == 4);
  CHECK(std::isnan(map.channel("f0")(0, 0)));
}

TEST_CASE("band channel names") {
  CHECK(band_channel(0) == "f0");
  CHECK(band_channel(12) == "f12");
}
