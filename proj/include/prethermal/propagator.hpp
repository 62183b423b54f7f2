#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prethermal/lattice.hpp"

namespace prethermal {

/// Time-ordered propagation under the driven lattice Hamiltonian
/// H(t) = K + V(t) C.
///
/// One period is split into `steps` equal substeps. Each substep is the
/// fourth-order commutator-free Magnus product of two exponentials built
/// from H at the two Gauss-Legendre nodes. Because H is affine in V(t), each
/// exponential is a static-lattice exponential at an effective depth and is
/// evaluated exactly through its eigen-decomposition, so every substep is
/// unitary to rounding. At q = 0 the even and odd parity sectors are
/// propagated separately.
///
/// The substep schedule repeats every period: substep k of any period uses
/// the same matrices.
class DrivePropagator {
 public:
  DrivePropagator(const DriveParams& drive, const PlaneWaveBasis& basis, int steps);

  const DriveParams& drive() const noexcept { return drive_; }
  const PlaneWaveBasis& basis() const noexcept { return basis_; }
  const std::vector<Sector>& sectors() const noexcept { return sectors_; }
  int steps() const noexcept { return steps_; }
  double dt() const noexcept { return dt_; }

  /// x <- U_k x for substep k. Columns of x are plane-wave amplitude vectors.
  void step(int k, Eigen::Ref<Eigen::MatrixXcd> x) const;
  /// x <- U_k^dagger x (exact inverse of step).
  void step_back(int k, Eigen::Ref<Eigen::MatrixXcd> x) const;

  /// U(T) = U_{N-1} ... U_0.
  Eigen::MatrixXcd period_propagator() const;

  /// Keep the substep eigen-decompositions in memory when they fit in
  /// `budget_bytes`. Returns whether the cache is active.
  bool enable_cache(std::size_t budget_bytes = std::size_t{64} << 20);

 private:
  struct Exponential {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
  };
  // Two factors per substep, first-applied first.
  struct Substep {
    Exponential first;
    Exponential second;
  };

  Substep decompose(int k, const Sector& sector) const;
  const Substep& substep(int k, std::size_t s, Substep& scratch) const;
  void apply_sector(int k, std::size_t s, Eigen::MatrixXcd& y, bool inverse) const;

  DriveParams drive_;
  PlaneWaveBasis basis_;
  int steps_;
  double dt_;
  std::vector<Sector> sectors_;
  std::vector<std::vector<Substep>> cache_;  // [sector][k]
};

/// Default substep count max(512, ceil(64 alpha v0 T)).
int default_steps(const DriveParams& drive);

/// U(T) together with its step-doubling self-check.
struct VerifiedPropagator {
  Eigen::MatrixXcd unitary;
  int steps;
  double doubling_change;  ///< max-norm of U(steps) - U(2 steps)
};

/// Computes U(T) at `steps` and at 2*steps; throws ConvergenceError when
/// they differ by more than `tolerance` in max-norm. The finer result is
/// returned.
VerifiedPropagator verified_period_propagator(const DriveParams& drive,
                                              const PlaneWaveBasis& basis, int steps,
                                              double tolerance);

/// Largest entry of |U^dagger U - I|.
double unitarity_defect(const Eigen::MatrixXcd& u);

}  // namespace prethermal
