#include <algorithm>
#include "prethermal/lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "prethermal/errors.hpp"

namespace prethermal {

DriveParams::DriveParams(double v0, double alpha, double omega_rel, double phase)
    : v0_(v0), alpha_(alpha), omega_rel_(omega_rel), phase_(phase) {
  if (!(v0 > 0.0) || !std::isfinite(v0)) throw std::invalid_argument("v0 must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be non-negative");
  if (!(omega_rel > 0.0) || !std::isfinite(omega_rel))
    throw std::invalid_argument("omega_rel must be positive");
  if (!std::isfinite(phase)) throw std::invalid_argument("phase must be finite");
}

double DriveParams::omega0() const noexcept { return 2.0 * std::sqrt(v0_); }
double DriveParams::omega() const noexcept { return omega_rel_ * omega0(); }
double DriveParams::period() const noexcept { return 2.0 * std::numbers::pi / omega(); }

double DriveParams::depth(double t) const noexcept {
  return v0_ * (1.0 + alpha_ * std::sin(omega() * t + phase_));
}

double drive_depth(const DriveParams& params, double t) { return params.depth(t); }

PlaneWaveBasis::PlaneWaveBasis(int m_max, double q) : m_max_(m_max), q_(q) {
  if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  if (!(q >= -1.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [-1, 1]");
}

double PlaneWaveBasis::kinetic(Eigen::Index i) const noexcept {
  const double k = 2.0 * momentum(i) + q_;
  return k * k;
}

Eigen::MatrixXd hamiltonian_matrix(const PlaneWaveBasis& basis, double depth) {
  const Eigen::Index n = basis.dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = basis.kinetic(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = depth / 4.0;
    h(i + 1, i) = depth / 4.0;
  }
  return h;
}

Eigen::MatrixXd parity_matrix(const PlaneWaveBasis& basis) {
  const Eigen::Index n = basis.dim();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(n - 1 - i, i) = 1.0;
  return p;
}

Eigen::MatrixXd Sector::hamiltonian(double depth) const {
  const Eigen::Index n = dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = kinetic(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = depth / 4.0 * link_scale(i);
    h(i + 1, i) = h(i, i + 1);
  }
  return h;
}

std::vector<Sector> symmetry_sectors(const PlaneWaveBasis& basis) {
  const Eigen::Index n = basis.dim();
  std::vector<Sector> out;
  if (basis.q() != 0.0) {
    Sector all;
    all.kinetic.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) all.kinetic(i) = basis.kinetic(i);
    all.link_scale = Eigen::VectorXd::Ones(n - 1);
    all.embedding = Eigen::MatrixXd::Identity(n, n);
    out.push_back(std::move(all));
    return out;
  }
  const int mm = basis.m_max();
  const double r = 1.0 / std::sqrt(2.0);

  // Even: |0>, (|m> + |-m>)/sqrt2 for m = 1..m_max. The |0> link carries sqrt2.
  Sector even;
  even.parity = 1;
  even.kinetic.resize(mm + 1);
  even.link_scale = Eigen::VectorXd::Ones(mm);
  even.link_scale(0) = std::sqrt(2.0);
  even.embedding = Eigen::MatrixXd::Zero(n, mm + 1);
  even.kinetic(0) = 0.0;
  even.embedding(basis.index(0), 0) = 1.0;
  for (int m = 1; m <= mm; ++m) {
    even.kinetic(m) = 4.0 * m * m;
    even.embedding(basis.index(m), m) = r;
    even.embedding(basis.index(-m), m) = r;
  }

  // Odd: (|m> - |-m>)/sqrt2 for m = 1..m_max.
  Sector odd;
  odd.parity = -1;
  odd.kinetic.resize(mm);
  odd.link_scale = Eigen::VectorXd::Ones(mm - 1);
  odd.embedding = Eigen::MatrixXd::Zero(n, mm);
  for (int m = 1; m <= mm; ++m) {
    odd.kinetic(m - 1) = 4.0 * m * m;
    odd.embedding(basis.index(m), m - 1) = r;
    odd.embedding(basis.index(-m), m - 1) = -r;
  }
  out.push_back(std::move(even));
  out.push_back(std::move(odd));
  return out;
}

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  const double top = v.cwiseAbs().maxCoeff();
  // Ties (mirror components of parity states) go to the highest index.
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= top * (1.0 - 1e-9)) best = i;
  if (v(best) < 0.0) v = -v;
}

}  // namespace

BlochSpectrum bloch_bands(double v0, const PlaneWaveBasis& basis,
                          std::optional<Eigen::Index> highest_band) {
  const Eigen::Index n = basis.dim();
  if (highest_band && *highest_band >= n - 2)
    throw TruncationError("band " + std::to_string(*highest_band) +
                          " is not converged with m_max = " + std::to_string(basis.m_max()));
  Eigen::VectorXd e(n);
  Eigen::MatrixXd vecs(n, n);
  if (basis.q() == 0.0) {
    // Diagonalize each parity sector so every band has exact parity.
    struct Level { double energy; int parity; Eigen::VectorXd vec; };
    std::vector<Level> levels;
    levels.reserve(static_cast<std::size_t>(n));
    for (const Sector& s : symmetry_sectors(basis)) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.hamiltonian(v0));
      for (Eigen::Index k = 0; k < s.dim(); ++k)
        levels.push_back({es.eigenvalues()(k), s.parity, s.embedding * es.eigenvectors().col(k)});
    }
    // Exact ties (free particle) put the odd state first.
    std::stable_sort(levels.begin(), levels.end(), [](const Level& x, const Level& y) {
      if (x.energy != y.energy) return x.energy < y.energy;
      return x.parity < y.parity;
    });
    for (Eigen::Index b = 0; b < n; ++b) {
      e(b) = levels[static_cast<std::size_t>(b)].energy;
      vecs.col(b) = levels[static_cast<std::size_t>(b)].vec;
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian_matrix(basis, v0));
    e = es.eigenvalues();
    vecs = es.eigenvectors();
  }
  for (Eigen::Index b = 0; b < n; ++b) fix_sign(vecs.col(b));

  return BlochSpectrum{basis, v0, e, vecs.cast<std::complex<double>>()};
}

BlochSpectrum bloch_bands(double v0, double q, int m_max, std::optional<Eigen::Index> highest_band) {
  return bloch_bands(v0, PlaneWaveBasis(m_max, q), highest_band);
}

}  // namespace prethermal
