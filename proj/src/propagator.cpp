#include "prethermal/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "prethermal/errors.hpp"

namespace prethermal {

namespace {

using cd = std::complex<double>;

// Gauss-Legendre nodes and the commutator-free weights (3 -+ 2 sqrt3)/12.
const double kSqrt3 = std::sqrt(3.0);
const double kNode1 = 0.5 - kSqrt3 / 6.0;
const double kNode2 = 0.5 + kSqrt3 / 6.0;
const double kWeightSmall = (3.0 - 2.0 * kSqrt3) / 12.0;
const double kWeightLarge = (3.0 + 2.0 * kSqrt3) / 12.0;

// y <- V diag(exp(-i sign E tau)) V^T y, using real products only.
void apply_exponential(const Eigen::VectorXd& energies, const Eigen::MatrixXd& vectors,
                       double tau, Eigen::MatrixXcd& y) {
  const Eigen::Index n = energies.size();
  const Eigen::MatrixXd yr = y.real();
  const Eigen::MatrixXd yi = y.imag();
  Eigen::MatrixXd re = vectors.transpose() * yr;
  Eigen::MatrixXd im = vectors.transpose() * yi;
  for (Eigen::Index i = 0; i < n; ++i) {
    const cd phase = std::polar(1.0, -energies(i) * tau);
    for (Eigen::Index c = 0; c < re.cols(); ++c) {
      const cd z = phase * cd(re(i, c), im(i, c));
      re(i, c) = z.real();
      im(i, c) = z.imag();
    }
  }
  y.real() = vectors * re;
  y.imag() = vectors * im;
}

}  // namespace

DrivePropagator::DrivePropagator(const DriveParams& drive, const PlaneWaveBasis& basis, int steps)
    : drive_(drive),
      basis_(basis),
      steps_(steps),
      dt_(drive.period() / std::max(steps, 1)),
      sectors_(symmetry_sectors(basis)) {
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
}

DrivePropagator::Substep DrivePropagator::decompose(int k, const Sector& sector) const {
  const double t = k * dt_;
  const double v1 = drive_.depth(t + kNode1 * dt_);
  const double v2 = drive_.depth(t + kNode2 * dt_);
  // a H1 + b H2 with a + b = 1/2 equals (1/2) H at depth 2 (a v1 + b v2).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> early(
      sector.hamiltonian(2.0 * (kWeightLarge * v1 + kWeightSmall * v2)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> late(
      sector.hamiltonian(2.0 * (kWeightSmall * v1 + kWeightLarge * v2)));
  return Substep{{early.eigenvalues(), early.eigenvectors()},
                 {late.eigenvalues(), late.eigenvectors()}};
}

const DrivePropagator::Substep& DrivePropagator::substep(int k, std::size_t s,
                                                         Substep& scratch) const {
  if (!cache_.empty()) return cache_[s][k];
  scratch = decompose(k, sectors_[s]);
  return scratch;
}

void DrivePropagator::apply_sector(int k, std::size_t s, Eigen::MatrixXcd& y, bool inverse) const {
  Substep scratch;
  const Substep& sub = substep(k, s, scratch);
  const double half = 0.5 * dt_;
  if (!inverse) {
    apply_exponential(sub.first.energies, sub.first.vectors, half, y);
    apply_exponential(sub.second.energies, sub.second.vectors, half, y);
  } else {
    apply_exponential(sub.second.energies, sub.second.vectors, -half, y);
    apply_exponential(sub.first.energies, sub.first.vectors, -half, y);
  }
}

void DrivePropagator::step(int k, Eigen::Ref<Eigen::MatrixXcd> x) const {
  if (x.rows() != basis_.dim()) throw DimensionMismatch("state dimension does not match basis");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(x.rows(), x.cols());
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    const Eigen::MatrixXd& e = sectors_[s].embedding;
    Eigen::MatrixXcd y = e.transpose().cast<cd>() * x;
    apply_sector(k, s, y, false);
    out.noalias() += e.cast<cd>() * y;
  }
  x = out;
}

void DrivePropagator::step_back(int k, Eigen::Ref<Eigen::MatrixXcd> x) const {
  if (x.rows() != basis_.dim()) throw DimensionMismatch("state dimension does not match basis");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(x.rows(), x.cols());
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    const Eigen::MatrixXd& e = sectors_[s].embedding;
    Eigen::MatrixXcd y = e.transpose().cast<cd>() * x;
    apply_sector(k, s, y, true);
    out.noalias() += e.cast<cd>() * y;
  }
  x = out;
}

Eigen::MatrixXcd DrivePropagator::period_propagator() const {
  const Eigen::Index n = basis_.dim();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    const Sector& sector = sectors_[s];
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Identity(sector.dim(), sector.dim());
    for (int k = 0; k < steps_; ++k) apply_sector(k, s, y, false);
    const Eigen::MatrixXcd e = sector.embedding.cast<cd>();
    u.noalias() += e * y * e.transpose();
  }
  return u;
}

bool DrivePropagator::enable_cache(std::size_t budget_bytes) {
  if (!cache_.empty()) return true;
  std::size_t need = 0;
  for (const auto& s : sectors_) {
    const auto d = static_cast<std::size_t>(s.dim());
    need += 2 * static_cast<std::size_t>(steps_) * (d * d + d) * sizeof(double);
  }
  if (need > budget_bytes) return false;
  cache_.resize(sectors_.size());
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    cache_[s].reserve(steps_);
    for (int k = 0; k < steps_; ++k) cache_[s].push_back(decompose(k, sectors_[s]));
  }
  return true;
}

int default_steps(const DriveParams& drive) {
  const double scaled = std::ceil(64.0 * drive.alpha() * drive.v0() * drive.period());
  return std::max(512, static_cast<int>(std::min(scaled, 1e8)));
}

VerifiedPropagator verified_period_propagator(const DriveParams& drive,
                                              const PlaneWaveBasis& basis, int steps,
                                              double tolerance) {
  const Eigen::MatrixXcd coarse = DrivePropagator(drive, basis, steps).period_propagator();
  Eigen::MatrixXcd fine = DrivePropagator(drive, basis, 2 * steps).period_propagator();
  const double change = (fine - coarse).cwiseAbs().maxCoeff();
  if (!(change <= tolerance)) {
    std::ostringstream msg;
    msg << "one-period propagator not converged: doubling " << steps << " steps changed U by "
        << change << " (tolerance " << tolerance << ")";
    throw ConvergenceError(msg.str());
  }
  return VerifiedPropagator{std::move(fine), 2 * steps, change};
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace prethermal
