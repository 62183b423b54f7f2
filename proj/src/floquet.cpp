#include "prethermal/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "prethermal/errors.hpp"
#include "prethermal/propagator.hpp"

namespace prethermal {

namespace {

using cd = std::complex<double>;

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index best = 0;
  const double top = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= top * (1.0 - 1e-9)) best = i;
  v *= std::conj(v(best)) / std::abs(v(best));
}

double circular_gap(double a, double b) {
  const double d = std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
  return d;
}

}  // namespace

double fold_quasienergy(double energy, double omega) {
  double folded = energy - omega * std::floor(energy / omega + 0.5);
  if (folded >= 0.5 * omega) folded -= omega;
  if (folded < -0.5 * omega) folded += omega;
  return folded;
}

FloquetSpectrum floquet_modes(const Eigen::MatrixXcd& unitary, const DriveParams& drive,
                              const PlaneWaveBasis& basis) {
  const Eigen::Index n = basis.dim();
  if (unitary.rows() != n || unitary.cols() != n)
    throw DimensionMismatch("propagator dimension does not match basis");
  const double period = drive.period();
  const double omega = drive.omega();

  struct Mode {
    double quasienergy;
    Eigen::VectorXcd vector;
    int parity;
  };
  std::vector<Mode> found;
  found.reserve(n);
  int degenerate = 0;
  double min_gap = 2.0 * std::numbers::pi;
  double leakage = 0.0;

  const auto sectors = symmetry_sectors(basis);
  for (const Sector& sector : sectors) {
    const Eigen::MatrixXcd e = sector.embedding.cast<cd>();
    const Eigen::MatrixXcd ue = unitary * e;
    const Eigen::MatrixXcd block = e.adjoint() * ue;
    if (sectors.size() > 1) leakage = std::max(leakage, (ue - e * block).cwiseAbs().maxCoeff());

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(block);
    Eigen::MatrixXcd q = schur.matrixU();
    const Eigen::VectorXcd lambda = schur.matrixT().diagonal();
    const Eigen::Index d = block.rows();

    std::vector<double> phase(d);
    for (Eigen::Index i = 0; i < d; ++i) phase[i] = std::arg(lambda(i));

    // Walk the eigenphases in circular order; runs closer than the
    // threshold form a degenerate cluster.
    std::vector<Eigen::Index> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return phase[a] < phase[b]; });
    const Eigen::Index pairs = d < 2 ? 0 : (d == 2 ? 1 : d);
    std::vector<bool> tied(d, false);  // tied[i]: order[i] and order[i+1] degenerate
    for (Eigen::Index i = 0; i < pairs; ++i) {
      const double gap = circular_gap(phase[order[i]], phase[order[(i + 1) % d]]);
      min_gap = std::min(min_gap, gap);
      if (gap < kDegeneratePhaseGap) {
        tied[i] = true;
        ++degenerate;
      }
    }
    for (Eigen::Index i = 0; i < d;) {
      Eigen::Index j = i;
      while (j + 1 < d && tied[j]) ++j;
      if (j > i) {
        Eigen::MatrixXcd cluster(d, j - i + 1);
        for (Eigen::Index c = i; c <= j; ++c) cluster.col(c - i) = q.col(order[c]);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(cluster);
        const Eigen::MatrixXcd ortho =
            qr.householderQ() * Eigen::MatrixXcd::Identity(d, cluster.cols());
        for (Eigen::Index c = i; c <= j; ++c) q.col(order[c]) = ortho.col(c - i);
      }
      i = j + 1;
    }

    const Eigen::MatrixXcd modes = e * q;
    for (Eigen::Index i = 0; i < d; ++i) {
      Mode m{fold_quasienergy(-phase[i] / period, omega), modes.col(i), sector.parity};
      fix_phase(m.vector);
      found.push_back(std::move(m));
    }
  }

  std::stable_sort(found.begin(), found.end(),
                   [](const Mode& a, const Mode& b) { return a.quasienergy < b.quasienergy; });

  FloquetSpectrum out{drive, basis, Eigen::VectorXd(n), Eigen::MatrixXcd(n, n), {}};
  out.parity.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.quasienergies(i) = found[i].quasienergy;
    out.modes.col(i) = found[i].vector;
    out.parity.push_back(found[i].parity);
  }
  out.near_degenerate_pairs = degenerate;
  out.min_phase_gap = min_gap;
  out.sector_leakage = leakage;
  return out;
}

Eigen::MatrixXcd FloquetSpectrum::reconstruct() const {
  const double period = drive.period();
  Eigen::VectorXcd phase(size());
  for (Eigen::Index i = 0; i < size(); ++i) phase(i) = std::polar(1.0, -quasienergies(i) * period);
  return modes * phase.asDiagonal() * modes.adjoint();
}

FloquetSpectrum floquet_spectrum(const DriveParams& drive, const PlaneWaveBasis& basis, int steps) {
  const int n = steps > 0 ? steps : default_steps(drive);
  return floquet_modes(DrivePropagator(drive, basis, n).period_propagator(), drive, basis);
}

OverlapVector overlaps(const Eigen::VectorXcd& psi0, const FloquetSpectrum& spectrum) {
  if (psi0.size() != spectrum.modes.rows())
    throw DimensionMismatch("initial state dimension does not match Floquet basis");
  return OverlapVector{spectrum.modes.adjoint() * psi0};
}

double ipr(const OverlapVector& overlaps) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < overlaps.c.size(); ++i) {
    const double p = std::norm(overlaps.c(i));
    sum += p * p;
  }
  return sum;
}

}  // namespace prethermal
