#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prethermal/lattice.hpp"
#include "prethermal/param_map.hpp"

namespace prethermal {

/// One-period fundamental-solution matrix of the linearized pendulum
/// theta'' + omega0^2 (1 + alpha sin(omega t)) theta = 0, acting on
/// (theta, theta'/omega0).
struct MonodromyResult {
  Eigen::Matrix2d matrix;
  double trace = 0.0;
  bool stable = true;  ///< |trace| <= 2

  double determinant() const { return matrix.determinant(); }
  /// |det - 1| over max(1, |m00 m11| + |m01 m10|). Strongly unstable cells
  /// have entries far past 1/sqrt(eps), where the bare |det - 1| is roundoff.
  double area_error() const;
  /// log of the largest |Floquet multiplier| (0 for stable cells).
  double log_multiplier() const;
};

/// Mathieu parameters a = 4/Omega^2, q = 2 alpha/Omega^2 of a drive.
struct MathieuPoint {
  double a;
  double q;
};
MathieuPoint mathieu_parameters(double alpha, double omega_rel);
/// Inverse of mathieu_parameters (a > 0, q >= 0).
void drive_from_mathieu(double a, double q, double& alpha, double& omega_rel);

/// Integrates the variational equations over one drive period with
/// fixed-step commutator-free Magnus (exact 2x2 exponentials) and checks
/// the trace against a run at twice the steps.
/// Throws ConvergenceError if the two traces differ by more than
/// `tolerance` (relative to max(1, |trace|)), or if steps < 64.
MonodromyResult linearized_monodromy(const DriveParams& drive, int steps = 256,
                                     double tolerance = 1e-6);

/// Same for y'' + (a - 2 q cos 2 tau) y = 0 over tau in [0, pi].
MonodromyResult mathieu_monodromy(double a, double q, int steps = 256, double tolerance = 1e-6);

/// Channels "abs_trace" and "stable" (1 or 0). Pendulum frequency is
/// omega0 of the lattice, so v0 drops out.
ParameterMap stability_map(const MapGrid& grid, int steps = 256, unsigned workers = 0);

/// Polyline in (alpha, Omega) coordinates.
struct Polyline {
  std::vector<Eigen::Vector2d> points;
  bool closed = false;
};

/// Level set |trace| = 2 of the "abs_trace" channel by marching squares in
/// (log alpha, log Omega) space. Segments are chained into polylines that
/// either close on themselves or end on the grid edge.
std::vector<Polyline> stability_boundary(const ParameterMap& map);

/// Sampled nonlinear pendulum trajectory.
struct AngleSeries {
  std::vector<double> times;
  std::vector<double> theta;
  std::vector<double> theta_dot;
};

/// Fourth-order symplectic (Yoshida) integration of
/// theta'' = -omega0^2 (1 + alpha sin(omega t)) sin(theta), with
/// `steps_per_period` steps per drive period, sampled every step.
AngleSeries nonlinear_trajectory(const DriveParams& drive, double theta0, double theta_dot0,
                                 double t_final, int steps_per_period = 2048);

}  // namespace prethermal
