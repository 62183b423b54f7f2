#include <doctest.h>

#include <cmath>

#include "prethermal/classical.hpp"
#include "prethermal/errors.hpp"

using namespace prethermal;

TEST_CASE("mathieu mapping round trip") {
  const auto p = mathieu_parameters(0.2, 2.0);
  CHECK(p.a == doctest::Approx(1.0));
  CHECK(p.q == doctest::Approx(0.1));
  double alpha = 0, omega = 0;
  drive_from_mathieu(1.0, 0.1, alpha, omega);
  CHECK(omega == doctest::Approx(2.0));
  CHECK(alpha == doctest::Approx(0.2));
  drive_from_mathieu(0.37, 0.9, alpha, omega);
  const auto back = mathieu_parameters(alpha, omega);
  CHECK(back.a == doctest::Approx(0.37));
  CHECK(back.q == doctest::Approx(0.9));
}

TEST_CASE("undriven oscillator trace") {
  for (double omega : {0.13, 0.7, 1.0, 2.5, 9.0}) {
    const auto m = linearized_monodromy(DriveParams(10.0, 0.0, omega));
    CHECK(m.trace == doctest::Approx(2.0 * std::cos(2.0 * M_PI / omega)).epsilon(1e-8).scale(1.0));
    CHECK(m.stable);
  }
}

TEST_CASE("first tongue: inside unstable, outside stable") {
  CHECK_FALSE(mathieu_monodromy(1.0, 0.1).stable);
  CHECK(mathieu_monodromy(1.3, 0.1).stable);
  // Same points reached through the drive parameters.
  double alpha = 0, omega = 0;
  drive_from_mathieu(1.0, 0.1, alpha, omega);
  CHECK_FALSE(linearized_monodromy(DriveParams(10.0, alpha, omega)).stable);
  drive_from_mathieu(1.3, 0.1, alpha, omega);
  CHECK(linearized_monodromy(DriveParams(10.0, alpha, omega)).stable);
}

TEST_CASE("small-q tongue expansion at probe points") {
  for (int i = 1; i <= 5; ++i) {
    const double q = 0.04 * i;
    CAPTURE(q);
    CHECK_FALSE(mathieu_monodromy(1.0 + 0.5 * q, q).stable);
    CHECK_FALSE(mathieu_monodromy(1.0 - 0.5 * q, q).stable);
    CHECK(mathieu_monodromy(1.0 + 1.5 * q, q).stable);
    CHECK(mathieu_monodromy(1.0 - 1.5 * q, q).stable);
  }
}

TEST_CASE("monodromy is area preserving") {
  for (double a : {0.1, 1.0, 2.7, 9.0})
    for (double q : {0.0, 0.3, 2.0, 8.0}) CHECK(mathieu_monodromy(a, q).area_error() < 1e-8);
  for (double alpha : {0.1, 1.0, 10.0})
    for (double omega : {0.1, 1.0, 10.0})
      CHECK(linearized_monodromy(DriveParams(10.0, alpha, omega)).area_error() < 1e-8);
}

TEST_CASE("drive phase does not change the trace") {
  const double t0 = linearized_monodromy(DriveParams(10.0, 1.5, 1.7)).trace;
  const double t1 = linearized_monodromy(DriveParams(10.0, 1.5, 1.7, 0.9)).trace;
  CHECK(t1 == doctest::Approx(t0).epsilon(1e-8));
}

TEST_CASE("log multiplier") {
  const auto unstable = mathieu_monodromy(1.0, 0.1);
  CHECK(unstable.log_multiplier() > 0.0);
  CHECK(mathieu_monodromy(1.3, 0.1).log_multiplier() == 0.0);
}

TEST_CASE("monodromy argument checks") {
  CHECK_THROWS_AS(mathieu_monodromy(1.0, 0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(mathieu_monodromy(1.0, 0.1, 64, 0.0), ConvergenceError);
}

TEST_CASE("stability map: zero-amplitude row is stable") {
  const MapGrid grid = MapGrid::logarithmic(0.1, 10.0, 6, 0.1, 10.0, 7, true);
  const auto map = stability_map(grid, 256, 2);
  for (std::size_t j = 0; j < grid.omega.size(); ++j) CHECK(map.channel("stable")(0, j) == 1.0);
  CHECK(map.failures.empty());
}

TEST_CASE("stability map worker independence") {
  const MapGrid grid = MapGrid::logarithmic(0.1, 10.0, 5, 0.1, 10.0, 5);
  CHECK(stability_map(grid, 256, 1).channel("abs_trace") == stability_map(grid, 256, 4).channel("abs_trace"));
}

TEST_CASE("boundary polylines are closed or end on the grid edge") {
  const MapGrid grid = MapGrid::logarithmic(0.1, 10.0, 16, 0.1, 10.0, 16, true);
  const auto map = stability_map(grid, 256, 0);
  const auto lines = stability_boundary(map);
  REQUIRE_FALSE(lines.empty());
  const double a_lo = grid.alpha[1], a_hi = grid.alpha.back();
  const double w_lo = grid.omega.front(), w_hi = grid.omega.back();
  auto on_edge = [&](const Eigen::Vector2d& p) {
    auto near = [](double x, double y) { return std::abs(std::log(x / y)) < 1e-9; };
    return near(p.x(), a_lo) || near(p.x(), a_hi) || near(p.y(), w_lo) || near(p.y(), w_hi);
  };
  for (const auto& line : lines) {
    REQUIRE(line.points.size() >= 2);
    if (line.closed) {
      CHECK((line.points.front() - line.points.back()).norm() < 1e-12);
    } else {
      CHECK(on_edge(line.points.front()));
      CHECK(on_edge(line.points.back()));
    }
    for (const auto& p : line.points) {
      CHECK(p.x() >= a_lo * (1 - 1e-12));
      CHECK(p.x() <= a_hi * (1 + 1e-12));
      CHECK(p.y() >= w_lo * (1 - 1e-12));
      CHECK(p.y() <= w_hi * (1 + 1e-12));
    }
  }
}

TEST_CASE("boundary of a synthetic closed island") {
  MapGrid grid = MapGrid::logarithmic(1.0, 100.0, 5, 1.0, 100.0, 5);
  ParameterMap map(grid);
  auto& t = map.add_channel("abs_trace");
  t.setConstant(1.0);
  t(2, 2) = 5.0;
  const auto lines = stability_boundary(map);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].closed);
  CHECK(lines[0].points.size() == 5);
}

TEST_CASE("nonlinear pendulum: small-amplitude harmonic limit") {
  const DriveParams drive(10.0, 0.0, 0.5);
  const double w0 = drive.omega0();
  const auto s = nonlinear_trajectory(drive, 1e-4, 0.0, 3.0 * drive.period());
  for (std::size_t k = 0; k < s.times.size(); k += 97)
    CHECK(s.theta[k] == doctest::Approx(1e-4 * std::cos(w0 * s.times[k])).epsilon(1e-6).scale(1e-4));
}

TEST_CASE("nonlinear pendulum conserves energy without drive") {
  const DriveParams drive(10.0, 0.0, 0.3);
  const double w0sq = drive.omega0() * drive.omega0();
  const auto s = nonlinear_trajectory(drive, 2.0, 0.5, 20.0 * drive.period());
  auto energy = [&](std::size_t k) { return 0.5 * s.theta_dot[k] * s.theta_dot[k] + w0sq * (1.0 - std::cos(s.theta[k])); };
  const double e0 = energy(0);
  double worst = 0.0;
  for (std::size_t k = 0; k < s.times.size(); ++k) worst = std::max(worst, std::abs(energy(k) - e0) / e0);
  CHECK(worst < 1e-4);
}

TEST_CASE("nonlinear pendulum: stable cell stays bounded, coarse steps rejected") {
  const auto s = nonlinear_trajectory(DriveParams(10.0, 0.1, 0.5), 0.01, 0.0, 200.0 * DriveParams(10.0, 0.1, 0.5).period());
  double peak = 0.0;
  for (double th : s.theta) peak = std::max(peak, std::abs(th));
  CHECK(peak < 0.05);
  CHECK_THROWS_AS(nonlinear_trajectory(DriveParams(10.0, 10.0, 0.1), 0.1, 0.0, 1.0, 16), ConvergenceError);
}

TEST_CASE("stable monodromy has unit determinant") {
  for (double alpha : {0.1, 0.5, 1.0})
    for (double omega : {3.0, 5.0, 10.0}) {
      const auto m = linearized_monodromy(DriveParams(10.0, alpha, omega));
      REQUIRE(m.stable);
      CHECK(std::abs(m.determinant() - 1.0) < 1e-12);
    }
}
