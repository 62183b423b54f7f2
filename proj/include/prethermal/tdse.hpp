#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prethermal/lattice.hpp"
#include "prethermal/time_series.hpp"

namespace prethermal {

/// What evolve() records and how often.
struct SampleSpec {
  Sampling mode = Sampling::stroboscopic;
  /// Substeps between samples in uniform mode.
  int stride = 16;
  /// Channels band0..band<b_max> ("f0" is band 0).
  Eigen::Index b_max = 12;
  /// Channels peak0..peak<peak_max>.
  int peak_max = 4;
  /// Substeps per period; 0 picks default_steps().
  int steps = 0;
  /// Step-doubling check of U(T) before evolving.
  bool verify = false;
  double tolerance = 1e-8;
};

/// |<phi_b|psi>|^2 for b = 0..b_max.
std::vector<double> band_populations(const Eigen::VectorXcd& psi, const BlochSpectrum& bands,
                                     Eigen::Index b_max);

/// Plane-wave weights grouped by |m| (index 0..m_max). A diabatic lattice
/// snap-off leaves the momentum distribution unchanged, so these are the
/// diffraction-peak fractions.
std::vector<double> momentum_peak_populations(const Eigen::VectorXcd& psi,
                                              const PlaneWaveBasis& basis);

/// Integrates the driven Schrodinger equation from t = 0 to t_final.
/// Stroboscopic samples come from powers of U(T); uniform and per-substep
/// samples use the same substep factors, so both agree at t = nu T.
/// Channels: f0, band1..band<b_max>, peak0..peak<peak_max>, norm.
TimeSeries evolve(const Eigen::VectorXcd& psi0, const DriveParams& drive,
                  const PlaneWaveBasis& basis, double t_final, const SampleSpec& spec = {});

enum class Readout { band_map, snap_off };

/// Drive on for `hold_duration`, then a sudden quench back to the static
/// lattice and one readout.
struct QuenchProtocol {
  double hold_duration = 0.0;
  bool complete_final_cycle = true;
  Readout readout = Readout::band_map;
  /// Fraction of the zone kept in quasimomentum averages, |q| <= bz_window.
  double bz_window = 0.4;

  void validate() const;
};

struct QuenchResult {
  double time = 0.0;            ///< actual hold, hbar/E_R
  std::vector<double> bands;    ///< band_map readout
  std::vector<double> peaks;    ///< snap_off readout

  double f0() const { return bands.empty() ? 0.0 : bands.front(); }
};

/// Starts from psi0 (expressed in `basis`). With complete_final_cycle the
/// hold is rounded up to a whole number of periods; otherwise it is rounded
/// to the nearest substep.
QuenchResult double_quench(const Eigen::VectorXcd& psi0, const DriveParams& drive,
                           const PlaneWaveBasis& basis, const QuenchProtocol& protocol,
                           Eigen::Index b_max = 12, int steps = 0);

/// One quasimomentum and its (unnormalized) weight.
struct QuasimomentumWeight {
  double q;
  double weight;
};

/// `points` equally spaced q in [-window, window] with Gaussian weights of
/// width sigma, normalized to sum 1.
std::vector<QuasimomentumWeight> gaussian_q_weights(double sigma, int points, double window);

/// Weighted average of double_quench over quasimomenta, each started from
/// the static ground state at its q. Weights outside |q| <= bz_window are
/// dropped and the rest renormalized. Throws std::invalid_argument when no
/// weight remains.
QuenchResult bz_averaged_observable(const DriveParams& drive, int m_max,
                                    const QuenchProtocol& protocol,
                                    const std::vector<QuasimomentumWeight>& weights,
                                    Eigen::Index b_max = 12, int steps = 0);

}  // namespace prethermal
