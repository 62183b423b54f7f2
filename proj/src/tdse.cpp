#include "prethermal/tdse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "prethermal/errors.hpp"
#include "prethermal/propagator.hpp"

namespace prethermal {

std::vector<double> band_populations(const Eigen::VectorXcd& psi, const BlochSpectrum& bands,
                                     Eigen::Index b_max) {
  if (psi.size() != bands.states.rows())
    throw DimensionMismatch("state dimension does not match Bloch basis");
  if (b_max < 0 || b_max >= bands.bands()) throw std::invalid_argument("b_max out of range");
  const Eigen::VectorXcd amp = bands.states.leftCols(b_max + 1).adjoint() * psi;
  std::vector<double> out(static_cast<std::size_t>(b_max + 1));
  for (Eigen::Index b = 0; b <= b_max; ++b) out[b] = std::norm(amp(b));
  return out;
}

std::vector<double> momentum_peak_populations(const Eigen::VectorXcd& psi,
                                              const PlaneWaveBasis& basis) {
  if (psi.size() != basis.dim()) throw DimensionMismatch("state dimension does not match basis");
  std::vector<double> out(static_cast<std::size_t>(basis.m_max() + 1), 0.0);
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    out[static_cast<std::size_t>(std::abs(basis.momentum(i)))] += std::norm(psi(i));
  return out;
}

namespace {

struct Recorder {
  const BlochSpectrum& bands;
  const PlaneWaveBasis& basis;
  Eigen::Index b_max;
  int peak_max;
  TimeSeries& series;

  void operator()(double t, const Eigen::VectorXcd& psi) {
    series.times.push_back(t);
    const auto pops = band_populations(psi, bands, b_max);
    series.channel("f0").push_back(pops[0]);
    for (Eigen::Index b = 1; b <= b_max; ++b)
      series.channel("band" + std::to_string(b)).push_back(pops[b]);
    const auto peaks = momentum_peak_populations(psi, basis);
    for (int p = 0; p <= peak_max; ++p) series.channel("peak" + std::to_string(p)).push_back(peaks[p]);
    series.channel("norm").push_back(psi.squaredNorm());
  }
};

}  // namespace

TimeSeries evolve(const Eigen::VectorXcd& psi0, const DriveParams& drive,
                  const PlaneWaveBasis& basis, double t_final, const SampleSpec& spec) {
  if (psi0.size() != basis.dim()) throw DimensionMismatch("state dimension does not match basis");
  if (std::abs(psi0.norm() - 1.0) > 1e-8) throw std::invalid_argument("psi0 must be normalized");
  if (!(t_final >= 0.0)) throw std::invalid_argument("t_final must be non-negative");
  if (spec.peak_max < 0 || spec.peak_max > basis.m_max())
    throw std::invalid_argument("peak_max must lie in [0, m_max]");
  if (spec.mode == Sampling::uniform && spec.stride < 1)
    throw std::invalid_argument("stride must be at least 1");

  const int steps = spec.steps > 0 ? spec.steps : default_steps(drive);
  const BlochSpectrum bands = bloch_bands(drive.v0(), basis);

  TimeSeries series;
  series.mode = spec.mode;
  series.drive = drive;
  series.add_channel("f0");
  for (Eigen::Index b = 1; b <= spec.b_max; ++b) series.add_channel("band" + std::to_string(b));
  for (int p = 0; p <= spec.peak_max; ++p) series.add_channel("peak" + std::to_string(p));
  series.add_channel("norm");
  series.metadata["steps"] = std::to_string(steps);
  series.metadata["integrator"] = "commutator-free Magnus 4th order";
  Recorder record{bands, basis, spec.b_max, spec.peak_max, series};

  DrivePropagator prop(drive, basis, steps);
  if (spec.verify) {
    const auto checked = verified_period_propagator(drive, basis, steps, spec.tolerance);
    series.metadata["doubling_change"] = std::to_string(checked.doubling_change);
  }

  const double period = drive.period();
  Eigen::VectorXcd psi = psi0;
  if (spec.mode == Sampling::stroboscopic) {
    const Eigen::MatrixXcd u = prop.period_propagator();
    const auto periods = static_cast<long>(std::floor(t_final / period + 1e-9));
    record(0.0, psi);
    for (long nu = 1; nu <= periods; ++nu) {
      psi = u * psi;
      record(nu * period, psi);
    }
  } else {
    prop.enable_cache();
    const int stride = spec.mode == Sampling::per_substep ? 1 : spec.stride;
    const auto total = static_cast<long>(std::floor(t_final / prop.dt() + 1e-9));
    record(0.0, psi);
    for (long s = 1; s <= total; ++s) {
      prop.step(static_cast<int>((s - 1) % steps), psi);
      if (s % stride == 0) record((s / steps) * period + (s % steps) * prop.dt(), psi);
    }
  }

  const double drift = std::abs(psi.squaredNorm() - 1.0);
  if (drift > 1e-8)
    throw ConvergenceError("norm drifted by " + std::to_string(drift) + " during evolution");
  return series;
}

void QuenchProtocol::validate() const {
  if (!(hold_duration >= 0.0)) throw std::invalid_argument("hold_duration must be non-negative");
  if (!(bz_window > 0.0 && bz_window <= 1.0))
    throw std::invalid_argument("bz_window must lie in (0, 1]");
}

QuenchResult double_quench(const Eigen::VectorXcd& psi0, const DriveParams& drive,
                           const PlaneWaveBasis& basis, const QuenchProtocol& protocol,
                           Eigen::Index b_max, int steps) {
  protocol.validate();
  if (psi0.size() != basis.dim()) throw DimensionMismatch("state dimension does not match basis");
  const int n = steps > 0 ? steps : default_steps(drive);
  const DrivePropagator prop(drive, basis, n);
  const double period = drive.period();

  long periods = 0;
  int remainder = 0;
  if (protocol.complete_final_cycle) {
    periods = static_cast<long>(std::ceil(protocol.hold_duration / period - 1e-9));
  } else {
    const auto substeps = static_cast<long>(std::llround(protocol.hold_duration / prop.dt()));
    periods = substeps / n;
    remainder = static_cast<int>(substeps % n);
  }

  Eigen::VectorXcd psi = psi0;
  if (periods > 0) {
    const Eigen::MatrixXcd u = prop.period_propagator();
    for (long nu = 0; nu < periods; ++nu) psi = u * psi;
  }
  for (int k = 0; k < remainder; ++k) prop.step(k, psi);

  QuenchResult out;
  out.time = periods * period + remainder * prop.dt();
  if (protocol.readout == Readout::band_map) {
    out.bands = band_populations(psi, bloch_bands(drive.v0(), basis, b_max), b_max);
  } else {
    out.peaks = momentum_peak_populations(psi, basis);
  }
  return out;
}

std::vector<QuasimomentumWeight> gaussian_q_weights(double sigma, int points, double window) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (points < 1) throw std::invalid_argument("need at least one q point");
  if (!(window > 0.0 && window <= 1.0)) throw std::invalid_argument("window must lie in (0, 1]");
  std::vector<QuasimomentumWeight> out;
  double total = 0.0;
  for (int i = 0; i < points; ++i) {
    const double q = points == 1 ? 0.0 : -window + 2.0 * window * i / (points - 1);
    const double w = std::exp(-0.5 * q * q / (sigma * sigma));
    out.push_back({q, w});
    total += w;
  }
  for (auto& w : out) w.weight /= total;
  return out;
}

QuenchResult bz_averaged_observable(const DriveParams& drive, int m_max,
                                    const QuenchProtocol& protocol,
                                    const std::vector<QuasimomentumWeight>& weights,
                                    Eigen::Index b_max, int steps) {
  protocol.validate();
  double total = 0.0;
  for (const auto& w : weights) {
    if (!(w.weight >= 0.0)) throw std::invalid_argument("weights must be non-negative");
    if (std::abs(w.q) <= protocol.bz_window + 1e-12) total += w.weight;
  }
  if (!(total > 0.0)) throw std::invalid_argument("no quasimomentum weight inside the window");

  QuenchResult out;
  for (const auto& w : weights) {
    if (std::abs(w.q) > protocol.bz_window + 1e-12 || w.weight == 0.0) continue;
    const PlaneWaveBasis basis(m_max, std::clamp(w.q, -1.0, 1.0));
    const BlochSpectrum ground = bloch_bands(drive.v0(), basis);
    const QuenchResult r = double_quench(ground.state(0), drive, basis, protocol, b_max, steps);
    const double f = w.weight / total;
    auto accumulate = [f](std::vector<double>& acc, const std::vector<double>& v) {
      if (acc.empty()) acc.assign(v.size(), 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) acc[i] += f * v[i];
    };
    accumulate(out.bands, r.bands);
    accumulate(out.peaks, r.peaks);
    out.time = r.time;
  }
  return out;
}

}  // namespace prethermal
