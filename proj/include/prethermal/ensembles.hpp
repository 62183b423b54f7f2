#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "prethermal/floquet.hpp"
#include "prethermal/lattice.hpp"
#include "prethermal/param_map.hpp"

namespace prethermal {

/// Long-time stroboscopic occupations of the static bands b = 0..b_max in
/// the Floquet diagonal ensemble.
struct BandOccupations {
  std::vector<double> fractions;

  double operator[](std::size_t b) const { return fractions.at(b); }
  double total() const;
  /// Sum over odd b.
  double odd_total() const;
  /// Sum over b > band.
  double above(std::size_t band) const;
};

/// f_b = Sum_n |c_n|^2 |<phi_b|n(0)>|^2 with c taken against the ground
/// band. f_0 is computed in the same order as ipr(c), so the two agree
/// bit for bit.
BandOccupations stroboscopic_band_occupations(const OverlapVector& c,
                                              const FloquetSpectrum& spectrum,
                                              const BlochSpectrum& bands, Eigen::Index b_max);

/// Lagrange multipliers of the non-interacting periodic Gibbs ensemble.
struct PgeCoefficients {
  std::vector<double> mean_occupations;  ///< N |c_i|^2
  std::vector<double> eta;               ///< log(1 + 1/n_i); +inf when absent

  bool present(std::size_t i) const;
};

/// Modes with |c_i|^2 below this are treated as unoccupied.
inline constexpr double kAbsentOverlap = 1e-20;

/// eta_i = log(1 + 1/<n_i>), <n_i> = N |c_i|^2. Throws for N <= 0.
PgeCoefficients pge_coefficients(const OverlapVector& c, double atom_number);

/// Per-cell numerical settings shared by map sweeps.
struct CellSettings {
  double v0 = 10.0;
  int m_max = 16;
  double q = 0.0;
  double phase = 0.0;
  int steps = 0;  ///< 0: default_steps(drive)
  bool verify = false;
  double tolerance = 1e-8;
  Eigen::Index b_max = 12;
};

/// Diagonal-ensemble prediction for one drive.
struct CellResult {
  BandOccupations occupations;
  double ipr = 0.0;
  int steps = 0;
  int near_degenerate_pairs = 0;
  double doubling_change = 0.0;  ///< only when settings.verify
};

CellResult evaluate_cell(double alpha, double omega_rel, const CellSettings& settings);

struct PgeMapOptions {
  CellSettings cell;
  /// Bands written as channels "f<b>".
  std::vector<Eigen::Index> bands{0, 2, 4, 6, 8, 10, 12};
  /// Also write "ipr", "odd_total" and "above_b_max" channels.
  bool diagnostics = false;
  unsigned workers = 0;
};

std::string band_channel(Eigen::Index band);

/// Sweeps the grid; failed cells are NaN and listed in `failures`,
/// near-degenerate cells are listed in `flags`.
ParameterMap pge_map(const MapGrid& grid, const PgeMapOptions& options);

}  // namespace prethermal
