#include "prethermal/units.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "prethermal/errors.hpp"

namespace prethermal {

namespace {
constexpr double kPlanck = 6.62607015e-34;        // J s
constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
constexpr double kLithium7MassU = 7.0160034366;
constexpr double kLatticeWavelength = 1064e-9;
}  // namespace

PhysicalUnits::PhysicalUnits(double recoil_frequency_hz) : recoil_hz_(recoil_frequency_hz) {
  if (!(recoil_frequency_hz > 0.0) || !std::isfinite(recoil_frequency_hz))
    throw std::invalid_argument("recoil_frequency_hz must be a positive finite number");
}

PhysicalUnits PhysicalUnits::lithium7_1064nm() {
  return from_species(kLithium7MassU, kLatticeWavelength);
}

PhysicalUnits PhysicalUnits::from_species(double mass_u, double wavelength_m) {
  const double mass = mass_u * kAtomicMassUnit;
  return PhysicalUnits(kPlanck / (2.0 * mass * wavelength_m * wavelength_m));
}

double PhysicalUnits::time_unit_s() const noexcept {
  return 1.0 / (2.0 * std::numbers::pi * recoil_hz_);
}

double PhysicalUnits::seconds_to_recoil(double seconds) const noexcept {
  return seconds / time_unit_s();
}
double PhysicalUnits::recoil_to_seconds(double t) const noexcept { return t * time_unit_s(); }
double PhysicalUnits::microseconds_to_recoil(double us) const noexcept {
  return seconds_to_recoil(us * 1e-6);
}
double PhysicalUnits::recoil_to_microseconds(double t) const noexcept {
  return recoil_to_seconds(t) * 1e6;
}
double PhysicalUnits::energy_to_hz(double energy) const noexcept { return energy * recoil_hz_; }
double PhysicalUnits::angular_to_hz(double omega) const noexcept { return omega * recoil_hz_; }

}  // namespace prethermal
