#pragma once

namespace prethermal {

/// Conversion between recoil units (energy E_R, time hbar/E_R) and SI.
/// Everything inside the library works in recoil units; this is applied
/// only when reading or writing physical quantities.
class PhysicalUnits {
 public:
  /// Recoil frequency E_R/h in Hz. Must be positive.
  explicit PhysicalUnits(double recoil_frequency_hz);

  /// 7Li in a 1064 nm retro-reflected lattice.
  static PhysicalUnits lithium7_1064nm();
  /// E_R/h = h / (2 m lambda^2) for an atom of `mass_u` atomic mass units.
  static PhysicalUnits from_species(double mass_u, double wavelength_m);

  double recoil_frequency_hz() const noexcept { return recoil_hz_; }
  /// hbar/E_R in seconds.
  double time_unit_s() const noexcept;

  double seconds_to_recoil(double seconds) const noexcept;
  double recoil_to_seconds(double t) const noexcept;
  double microseconds_to_recoil(double us) const noexcept;
  double recoil_to_microseconds(double t) const noexcept;

  /// An energy in E_R expressed as a frequency E/h in Hz.
  double energy_to_hz(double energy) const noexcept;
  /// An angular frequency in E_R/hbar expressed as an ordinary frequency in Hz.
  double angular_to_hz(double omega) const noexcept;

 private:
  double recoil_hz_;
};

}  // namespace prethermal
