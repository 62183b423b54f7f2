#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prethermal/lattice.hpp"

namespace prethermal {

/// Floquet modes |n(0)> and quasienergies of one period of drive.
///
/// Quasienergies are folded into [-omega/2, omega/2). Modes are ordered by
/// ascending quasienergy; each has its largest component real positive.
/// At q = 0 every mode has definite parity (`parity[n]` = +-1); otherwise
/// `parity[n]` is 0.
struct FloquetSpectrum {
  DriveParams drive;
  PlaneWaveBasis basis;
  Eigen::VectorXd quasienergies;
  Eigen::MatrixXcd modes;
  std::vector<int> parity;

  /// Number of eigenphase pairs closer than the degeneracy threshold.
  int near_degenerate_pairs = 0;
  /// Smallest circular distance between eigenphases of the same sector.
  double min_phase_gap = 0.0;
  /// Norm of the part of U that couples parity sectors (0 when q != 0).
  double sector_leakage = 0.0;

  Eigen::Index size() const noexcept { return quasienergies.size(); }
  bool flagged() const noexcept { return near_degenerate_pairs > 0; }

  /// Sum_n exp(-i eps_n T) |n><n|.
  Eigen::MatrixXcd reconstruct() const;
};

/// Eigenphases closer than this (radians) are treated as degenerate.
inline constexpr double kDegeneratePhaseGap = 1e-10;

/// Diagonalizes a one-period propagator. Uses a Schur decomposition per
/// symmetry sector, which gives orthonormal modes also inside degenerate
/// clusters; such clusters are counted in `near_degenerate_pairs`.
FloquetSpectrum floquet_modes(const Eigen::MatrixXcd& unitary, const DriveParams& drive,
                              const PlaneWaveBasis& basis);

/// Builds U(T) with the default (or given) substep count and diagonalizes it.
FloquetSpectrum floquet_spectrum(const DriveParams& drive, const PlaneWaveBasis& basis,
                                 int steps = 0);

/// c_n = <n(0)|psi0>.
struct OverlapVector {
  Eigen::VectorXcd c;

  double norm_squared() const { return c.squaredNorm(); }
};

/// Throws DimensionMismatch when psi0 and the spectrum disagree in size.
OverlapVector overlaps(const Eigen::VectorXcd& psi0, const FloquetSpectrum& spectrum);

/// Sum_n |c_n|^4.
double ipr(const OverlapVector& overlaps);

/// Fold a quasienergy into [-omega/2, omega/2).
double fold_quasienergy(double energy, double omega);

}  // namespace prethermal
