#include <doctest.h>

#include <cmath>
#include <random>

#include "prethermal/analysis.hpp"
#include "prethermal/floquet.hpp"
#include "prethermal/tdse.hpp"
#include "prethermal/units.hpp"

using namespace prethermal;

namespace {

TimeSeries series_of(std::vector<double> t, std::vector<double> v, Sampling mode = Sampling::uniform) {
  TimeSeries s;
  s.mode = mode;
  s.times = std::move(t);
  s.add_channel("value") = std::move(v);
  return s;
}

double stddev(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= v.size();
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / v.size());
}

TimeSeries driven_f0(double periods) {
  const PlaneWaveBasis basis(16, 0.0);
  const DriveParams drive(10.0, 3.0, 2.6);
  SampleSpec spec;
  spec.b_max = 2;
  spec.peak_max = 0;
  return evolve(bloch_bands(10.0, basis).state(0), drive, basis, periods * drive.period(), spec);
}

}  // namespace

TEST_CASE("boxcar of a constant is the constant") {
  std::vector<double> t, v;
  for (int i = 0; i < 50; ++i) {
    t.push_back(0.1 * i);
    v.push_back(0.42);
  }
  const auto b = boxcar(series_of(t, v), 1.0);
  CHECK(b.size() == 5);
  for (double x : b.channel("value")) CHECK(x == doctest::Approx(0.42));
  for (double n : b.channel("bin_count")) CHECK(n == 10.0);
}

TEST_CASE("boxcar of alternating samples") {
  std::vector<double> t, v;
  for (int i = 0; i < 40; ++i) {
    t.push_back(i);
    v.push_back(i % 2);
  }
  const auto b = boxcar(series_of(t, v), 4.0);
  CHECK(b.size() == 10);
  for (double x : b.channel("value")) CHECK(x == doctest::Approx(0.5));
}

TEST_CASE("boxcar is idempotent for bins no wider than the spacing") {
  std::vector<double> t, v;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u;
  for (int i = 0; i < 30; ++i) {
    t.push_back(2.0 * i);
    v.push_back(u(rng));
  }
  const auto s = series_of(t, v);
  for (double w : {0.5, 1.0, 2.0}) {
    const auto once = boxcar(s, w);
    CHECK(once.times == s.times);
    CHECK(once.channel("value") == s.channel("value"));
  }
  const auto wide = boxcar(s, 7.0);
  const auto twice = boxcar(wide, 2.0);
  CHECK(twice.channel("value") == wide.channel("value"));
}

TEST_CASE("boxcar reduces fluctuations of a driven ground-band fraction") {
  const auto units = PhysicalUnits::lithium7_1064nm();
  const auto raw = driven_f0(1200.0);
  const auto binned = boxcar(raw, units.microseconds_to_recoil(200.0));
  CHECK(binned.size() >= 5);
  CHECK(stddev(binned.channel("f0")) < stddev(raw.channel("f0")));
}

TEST_CASE("boxcar argument checks") {
  CHECK_THROWS_AS(boxcar(series_of({}, {}), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(boxcar(series_of({0.0, 1.0}, {1.0, 2.0}), 0.0), std::invalid_argument);
}

TEST_CASE("stroboscopic average basics") {
  std::vector<double> t, v;
  for (int i = 0; i < 30; ++i) {
    t.push_back(i);
    v.push_back(0.7);
  }
  const auto avg = stroboscopic_average(series_of(t, v, Sampling::stroboscopic), 5);
  CHECK(avg.at("value").mean == doctest::Approx(0.7));
  CHECK(avg.at("value").count == 25);
  CHECK_THROWS_AS(stroboscopic_average(series_of(t, v, Sampling::stroboscopic), 21), std::invalid_argument);
  CHECK_THROWS_AS(stroboscopic_average(series_of(t, v, Sampling::uniform), 0), std::invalid_argument);
}

TEST_CASE("undriven stroboscopic average of f0 is one") {
  const PlaneWaveBasis basis(8, 0.0);
  const DriveParams drive(10.0, 0.0, 1.0);
  SampleSpec spec;
  spec.b_max = 2;
  const auto s = evolve(bloch_bands(10.0, basis).state(0), drive, basis, 60.0 * drive.period(), spec);
  CHECK(stroboscopic_average(s, 10).at("f0").mean == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("stroboscopic average matches the IPR and is stable under burn-in") {
  const auto s = driven_f0(2000.0);
  const PlaneWaveBasis basis(16, 0.0);
  const auto spec = floquet_spectrum(DriveParams(10.0, 3.0, 2.6), basis);
  const double expected = ipr(overlaps(bloch_bands(10.0, basis).state(0), spec));
  const auto a = stroboscopic_average(s, 50).at("f0");
  const auto b = stroboscopic_average(s, 200).at("f0");
  CHECK(std::abs(a.mean - expected) < 0.01);
  CHECK(std::abs(a.mean - b.mean) < std::max(a.standard_error, b.standard_error) * 3.0);
}

TEST_CASE("power-law fit on exact data") {
  std::vector<double> t, sq, flat;
  for (int i = 1; i <= 40; ++i) {
    t.push_back(0.5 * i);
    sq.push_back(std::sqrt(0.5 * i));
    flat.push_back(3.0);
  }
  const auto f = fit_power_law(t, sq, 0.5, 20.0);
  CHECK(std::abs(f.exponent - 0.5) < 1e-6);
  CHECK(f.amplitude == doctest::Approx(1.0));
  CHECK(f.samples == 40);
  CHECK(std::abs(fit_power_law(t, flat, 1.0, 20.0).exponent) < 1e-6);
  for (double p : {-1.3, 0.25, 2.0}) {
    std::vector<double> y;
    for (double x : t) y.push_back(7.0 * std::pow(x, p));
    CHECK(std::abs(fit_power_law(t, y, 1.0, 15.0).exponent - p) < 1e-6);
  }
}

TEST_CASE("power-law fit with multiplicative noise") {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> t, y;
  for (int i = 0; i < 200; ++i) {
    const double x = std::pow(10.0, 3.0 * i / 199.0);
    t.push_back(x);
    y.push_back(std::pow(x, 0.25) * (1.0 + noise(rng)));
  }
  CHECK(std::abs(fit_power_law(t, y, 1.0, 1000.0).exponent - 0.25) < 0.02);
}

TEST_CASE("power-law fit argument checks") {
  const std::vector<double> t{1, 2, 3, 4, 5, 6}, y{1, 2, -3, 4, 5, 6};
  CHECK_THROWS_AS(fit_power_law(t, y, 1.0, 6.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law(t, t, 1.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law(t, t, 0.0, 4.0), std::invalid_argument);
}

TEST_CASE("quasimomentum window fractions") {
  std::vector<double> q, flat, delta;
  for (int i = 0; i <= 100; ++i) {
    q.push_back(-1.0 + 0.02 * i);
    flat.push_back(1.0);
    delta.push_back(i == 50 ? 1.0 : 0.0);
  }
  CHECK(bz_window_fraction(q, flat, 0.4) == doctest::Approx(0.4));
  CHECK(bz_window_fraction(q, flat, 1.0) == doctest::Approx(1.0));
  CHECK(bz_window_fraction(q, delta, 0.4) == doctest::Approx(1.0));
  CHECK(bz_window_fraction(q, delta, 1.0) == doctest::Approx(1.0));
  const std::vector<double> narrow{-0.2, 0.0, 0.2};
  CHECK_THROWS_AS(bz_window_fraction(narrow, {1, 1, 1}, 0.4), std::invalid_argument);
}
