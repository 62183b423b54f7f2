#include "prethermal/ensembles.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "prethermal/errors.hpp"
#include "prethermal/propagator.hpp"
#include "prethermal/sweep.hpp"

namespace prethermal {

double BandOccupations::total() const {
  double s = 0.0;
  for (double f : fractions) s += f;
  return s;
}

double BandOccupations::odd_total() const {
  double s = 0.0;
  for (std::size_t b = 1; b < fractions.size(); b += 2) s += fractions[b];
  return s;
}

double BandOccupations::above(std::size_t band) const {
  double s = 0.0;
  for (std::size_t b = band + 1; b < fractions.size(); ++b) s += fractions[b];
  return s;
}

BandOccupations stroboscopic_band_occupations(const OverlapVector& c,
                                              const FloquetSpectrum& spectrum,
                                              const BlochSpectrum& bands, Eigen::Index b_max) {
  const Eigen::Index n = spectrum.size();
  if (c.c.size() != n || bands.states.rows() != spectrum.modes.rows())
    throw DimensionMismatch("overlaps, Floquet modes and Bloch bands must share one basis");
  if (b_max < 0 || b_max >= bands.bands())
    throw std::invalid_argument("b_max must lie in [0, D-1]");

  BandOccupations out;
  out.fractions.assign(static_cast<std::size_t>(b_max + 1), 0.0);
  // <phi_b|n(0)> for all b, n.
  const Eigen::MatrixXcd proj = bands.states.leftCols(b_max + 1).adjoint() * spectrum.modes;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(std::norm(proj(0, i)) - std::norm(c.c(i))) > 1e-10)
      throw std::invalid_argument("overlaps must be taken against the static ground band");
  }
  for (Eigen::Index b = 0; b <= b_max; ++b) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = std::norm(c.c(i));
      // For b = 0 use |c_n|^2 itself so the result matches ipr(c) exactly.
      const double p = b == 0 ? w : std::norm(proj(b, i));
      sum += w * p;
    }
    out.fractions[b] = sum;
  }
  return out;
}

bool PgeCoefficients::present(std::size_t i) const { return std::isfinite(eta.at(i)); }

PgeCoefficients pge_coefficients(const OverlapVector& c, double atom_number) {
  if (!(atom_number > 0.0)) throw std::invalid_argument("atom number must be positive");
  PgeCoefficients out;
  const auto n = static_cast<std::size_t>(c.c.size());
  out.mean_occupations.resize(n);
  out.eta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::norm(c.c(static_cast<Eigen::Index>(i)));
    out.mean_occupations[i] = atom_number * w;
    out.eta[i] = w < kAbsentOverlap ? std::numeric_limits<double>::infinity()
                                    : std::log1p(1.0 / out.mean_occupations[i]);
  }
  return out;
}

CellResult evaluate_cell(double alpha, double omega_rel, const CellSettings& settings) {
  const DriveParams drive(settings.v0, alpha, omega_rel, settings.phase);
  const PlaneWaveBasis basis(settings.m_max, settings.q);
  const BlochSpectrum bands = bloch_bands(settings.v0, basis, settings.b_max);

  CellResult out;
  out.steps = settings.steps > 0 ? settings.steps : default_steps(drive);
  Eigen::MatrixXcd u;
  if (settings.verify) {
    auto checked = verified_period_propagator(drive, basis, out.steps, settings.tolerance);
    out.doubling_change = checked.doubling_change;
    out.steps = checked.steps;
    u = std::move(checked.unitary);
  } else {
    u = DrivePropagator(drive, basis, out.steps).period_propagator();
  }
  const FloquetSpectrum spectrum = floquet_modes(u, drive, basis);
  const OverlapVector c = overlaps(bands.state(0), spectrum);
  out.occupations = stroboscopic_band_occupations(c, spectrum, bands, settings.b_max);
  out.ipr = ipr(c);
  out.near_degenerate_pairs = spectrum.near_degenerate_pairs;
  return out;
}

std::string band_channel(Eigen::Index band) { return "f" + std::to_string(band); }

ParameterMap pge_map(const MapGrid& grid, const PgeMapOptions& options) {
  ParameterMap map(grid);
  for (auto b : options.bands) {
    if (b < 0 || b > options.cell.b_max)
      throw std::invalid_argument("requested band channel exceeds b_max");
    map.add_channel(band_channel(b));
  }
  if (options.diagnostics) {
    map.add_channel("ipr");
    map.add_channel("odd_total");
    map.add_channel("above_b_max");
  }

  const std::size_t n_omega = grid.omega.size();
  std::vector<std::optional<CellResult>> results(grid.cells());
  const auto errors = run_indexed(grid.cells(), options.workers, [&](std::size_t i) {
    results[i] = evaluate_cell(grid.alpha[i / n_omega], grid.omega[i % n_omega], options.cell);
  });

  for (std::size_t i = 0; i < grid.cells(); ++i) {
    const std::size_t ia = i / n_omega, iw = i % n_omega;
    const auto r = static_cast<Eigen::Index>(ia), col = static_cast<Eigen::Index>(iw);
    if (errors[i]) {
      std::string why = "unknown error";
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        why = e.what();
      } catch (...) {
      }
      map.failures.push_back({ia, iw, why});
      continue;
    }
    const CellResult& cell = *results[i];
    for (auto b : options.bands) map.channel(band_channel(b))(r, col) = cell.occupations[b];
    if (options.diagnostics) {
      map.channel("ipr")(r, col) = cell.ipr;
      map.channel("odd_total")(r, col) = cell.occupations.odd_total();
      // Everything not in bands 0..b_max.
      map.channel("above_b_max")(r, col) = std::max(0.0, 1.0 - cell.occupations.total());
    }
    if (cell.near_degenerate_pairs > 0) {
      std::ostringstream why;
      why << cell.near_degenerate_pairs << " near-degenerate eigenphase pair(s)";
      map.flags.push_back({ia, iw, why.str()});
    }
  }
  std::ostringstream settings;
  settings << options.cell.v0;
  map.metadata["v0"] = settings.str();
  map.metadata["m_max"] = std::to_string(options.cell.m_max);
  std::ostringstream phase;
  phase << options.cell.phase;
  map.metadata["phase"] = phase.str();
  map.metadata["b_max"] = std::to_string(options.cell.b_max);
  map.metadata["integrator"] = "commutator-free Magnus 4th order, 2 exponentials per substep";
  map.metadata["steps"] = options.cell.steps > 0 ? std::to_string(options.cell.steps)
                                                 : std::string("max(512, ceil(64 alpha v0 T))");
  return map;
}

}  // namespace prethermal
