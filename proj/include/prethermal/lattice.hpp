#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace prethermal {

/// Amplitude-modulated lattice drive V(t) = v0 (1 + alpha sin(omega t)).
/// Frequencies are measured against the on-site harmonic frequency
/// omega0 = 2 sqrt(v0) (recoil units), so omega = omega_rel * omega0.
class DriveParams {
 public:
  /// phase shifts the drive: depth = v0 (1 + alpha sin(omega t + phase)).
  DriveParams(double v0, double alpha, double omega_rel, double phase = 0.0);

  double v0() const noexcept { return v0_; }
  double alpha() const noexcept { return alpha_; }
  double omega_rel() const noexcept { return omega_rel_; }
  double phase() const noexcept { return phase_; }

  double omega0() const noexcept;
  double omega() const noexcept;
  double period() const noexcept;

  /// Lattice depth at time t; negative during part of the cycle when alpha > 1.
  double depth(double t) const noexcept;

  bool operator==(const DriveParams&) const = default;

 private:
  double v0_;
  double alpha_;
  double omega_rel_;
  double phase_;
};

/// Free-function form of DriveParams::depth.
double drive_depth(const DriveParams& params, double t);

/// Plane waves |m>, m = -m_max..m_max, with momentum (2m + q) k_L.
class PlaneWaveBasis {
 public:
  PlaneWaveBasis(int m_max, double q = 0.0);

  int m_max() const noexcept { return m_max_; }
  double q() const noexcept { return q_; }
  Eigen::Index dim() const noexcept { return 2 * m_max_ + 1; }

  /// Momentum label m of basis index i.
  int momentum(Eigen::Index i) const noexcept { return static_cast<int>(i) - m_max_; }
  /// Basis index of momentum label m.
  Eigen::Index index(int m) const noexcept { return m + m_max_; }

  /// Kinetic energy (2m + q)^2 of basis index i, in E_R.
  double kinetic(Eigen::Index i) const noexcept;

  bool operator==(const PlaneWaveBasis&) const = default;

 private:
  int m_max_;
  double q_;
};

/// Real symmetric lattice Hamiltonian in the plane-wave basis, at fixed depth.
/// Diagonal (2m + q)^2, first off-diagonals depth/4.
Eigen::MatrixXd hamiltonian_matrix(const PlaneWaveBasis& basis, double depth);

/// Static Bloch bands at one quasimomentum. Columns of `states` are bands in
/// ascending energy.
struct BlochSpectrum {
  PlaneWaveBasis basis;
  double v0;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd states;

  Eigen::Index bands() const noexcept { return energies.size(); }
  Eigen::VectorXcd state(Eigen::Index band) const { return states.col(band); }
};

/// Diagonalizes the static lattice. At q = 0 every state is given definite
/// parity under m -> -m with band b carrying parity (-1)^b; each state is
/// normalized so its largest component is real positive.
///
/// Throws TruncationError if `highest_band` >= dim - 2.
BlochSpectrum bloch_bands(double v0, const PlaneWaveBasis& basis,
                          std::optional<Eigen::Index> highest_band = std::nullopt);

/// Convenience overload building the basis in place.
BlochSpectrum bloch_bands(double v0, double q, int m_max,
                          std::optional<Eigen::Index> highest_band = std::nullopt);

/// Parity operator m -> -m on a q = 0 basis.
Eigen::MatrixXd parity_matrix(const PlaneWaveBasis& basis);

/// A block of the lattice Hamiltonian closed under the drive. In sector
/// coordinates the Hamiltonian at depth V is tridiagonal with diagonal
/// `kinetic` and off-diagonal V/4 * `link_scale`; `embedding` maps sector
/// coordinates to plane-wave amplitudes (orthonormal columns).
struct Sector {
  Eigen::VectorXd kinetic;
  Eigen::VectorXd link_scale;
  Eigen::MatrixXd embedding;
  int parity = 0;  // +1 even, -1 odd, 0 no definite parity

  Eigen::Index dim() const noexcept { return kinetic.size(); }
  Eigen::MatrixXd hamiltonian(double depth) const;
};

/// Even and odd sectors at q = 0, a single sector otherwise.
std::vector<Sector> symmetry_sectors(const PlaneWaveBasis& basis);

}  // namespace prethermal
