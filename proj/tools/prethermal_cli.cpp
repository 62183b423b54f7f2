// prethermal: band structure, Floquet spectra, parameter maps, evolution,
// classical stability and power-law fits for a shaken 1D optical lattice.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>

#include "prethermal/analysis.hpp"
#include "prethermal/classical.hpp"
#include "prethermal/config.hpp"
#include "prethermal/ensembles.hpp"
#include "prethermal/errors.hpp"
#include "prethermal/floquet.hpp"
#include "prethermal/io.hpp"
#include "prethermal/propagator.hpp"
#include "prethermal/tdse.hpp"
#include "prethermal/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace prethermal;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kNumerical = 3, kPartial = 4 };

struct Overrides {
  std::string config_path;
  std::optional<double> v0, alpha, omega, phase, bz_window;
  std::optional<int> m_max, steps;
  std::optional<std::string> grid, out;
  bool svg = false;
  // subcommand-specific
  std::optional<unsigned> workers;
  std::optional<double> duration_us, t_min, t_max;
  std::optional<std::string> sampling, input, channel;
  std::optional<int> band_count;
  bool include_zero_alpha = false;
  bool diagnostics = false;
  bool verify = false;
};

void common_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "YAML run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--v0", o.v0, "static lattice depth, E_R");
  cmd->add_option("--alpha", o.alpha, "relative drive amplitude");
  cmd->add_option("--omega", o.omega, "drive frequency over on-site frequency");
  cmd->add_option("--phase", o.phase, "drive phase at t = 0, radians");
  cmd->add_option("--mmax", o.m_max, "plane-wave cutoff");
  cmd->add_option("--steps", o.steps, "integrator steps per period (0: automatic)");
  cmd->add_option("--grid", o.grid, "a0:a1:na,w0:w1:nw");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--svg", o.svg, "also write SVG heatmaps");
  cmd->add_option("--bz-window", o.bz_window, "quasimomentum window, 0.4 or 1.0");
  cmd->add_flag("--verify", o.verify, "check each propagator against a step doubling");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.v0) c.v0 = *o.v0;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.omega) c.omega = *o.omega;
  if (o.phase) c.phase = *o.phase;
  if (o.m_max) c.m_max = *o.m_max;
  if (o.steps) c.steps = *o.steps;
  if (o.grid) {
    const bool zero = c.grid.include_zero_alpha;
    c.grid = parse_grid_flag(*o.grid);
    c.grid.include_zero_alpha = zero;
  }
  if (o.out) c.out_dir = *o.out;
  if (o.svg) c.svg = true;
  if (o.bz_window) c.bz_window = *o.bz_window;
  if (o.verify) c.verify = true;
  if (o.workers) c.workers = *o.workers;
  if (o.duration_us) c.duration_us = *o.duration_us;
  if (o.t_min) c.fit_t_min = *o.t_min;
  if (o.t_max) c.fit_t_max = *o.t_max;
  if (o.sampling) c.sampling = *o.sampling;
  if (o.input) c.fit_input = *o.input;
  if (o.channel) c.fit_channel = *o.channel;
  if (o.band_count) c.band_count = *o.band_count;
  if (o.include_zero_alpha) c.grid.include_zero_alpha = true;
  if (o.diagnostics) c.diagnostics = true;
  c.validate();
  return c;
}

PhysicalUnits units_of(const RunConfig& c) {
  return c.recoil_frequency_hz > 0.0 ? PhysicalUnits(c.recoil_frequency_hz)
                                     : PhysicalUnits::lithium7_1064nm();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json provenance(const RunConfig& c, const std::string& command) {
  return {{"command", command},
          {"code_version", io::code_version()},
          {"config_hash", config_hash(c)},
          {"config", to_yaml(c)},
          {"timestamp", utc_now()}};
}

json drive_json(const DriveParams& d, const PhysicalUnits& u) {
  return {{"v0", d.v0()},
          {"alpha", d.alpha()},
          {"omega_rel", d.omega_rel()},
          {"phase", d.phase()},
          {"omega", d.omega()},
          {"period", d.period()},
          {"period_us", u.recoil_to_microseconds(d.period())},
          {"drive_frequency_hz", u.angular_to_hz(d.omega()) / (2.0 * M_PI)}};
}

int cmd_bands(const RunConfig& c) {
  const fs::path out = c.out_dir;
  const PhysicalUnits units = units_of(c);
  io::CsvWriter csv(out / "bands.csv");
  std::vector<std::string> cols{"q"};
  for (int b = 0; b < c.band_count; ++b) cols.push_back("E" + std::to_string(b));
  csv.header(cols);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < c.q_points; ++i) {
    const double q = -1.0 + 2.0 * i / (c.q_points - 1);
    const auto spec = bloch_bands(c.v0, q, c.m_max, c.band_count - 1);
    std::vector<double> row{q};
    for (int b = 0; b < c.band_count; ++b) row.push_back(spec.energies(b));
    lo = std::min(lo, spec.energies(0));
    hi = std::max(hi, spec.energies(0));
    csv.row(row);
  }
  csv.close();
  const double bandwidth = hi - lo;
  json meta = provenance(c, "bands");
  meta["units"] = {{"energy", "E_R"}, {"recoil_frequency_hz", units.recoil_frequency_hz()}};
  meta["ground_bandwidth"] = bandwidth;
  meta["tunneling_hz"] = units.energy_to_hz(bandwidth / 4.0);
  meta["site_frequency_hz"] = units.angular_to_hz(2.0 * std::sqrt(c.v0));
  io::write_json(out / "bands.json", meta);
  std::cout << "tunneling " << meta["tunneling_hz"].get<double>() << " Hz, site frequency "
            << meta["site_frequency_hz"].get<double>() << " Hz\n";
  return kOk;
}

FloquetSpectrum spectrum_for(const RunConfig& c, const DriveParams& drive, const PlaneWaveBasis& basis,
                             json& meta) {
  if (!c.verify) {
    auto spec = floquet_spectrum(drive, basis, c.steps);
    meta["steps"] = c.steps > 0 ? c.steps : default_steps(drive);
    return spec;
  }
  const int steps = c.steps > 0 ? c.steps : default_steps(drive);
  const auto v = verified_period_propagator(drive, basis, steps, c.tolerance);
  meta["steps"] = v.steps;
  meta["doubling_change"] = v.doubling_change;
  return floquet_modes(v.unitary, drive, basis);
}

int cmd_floquet(const RunConfig& c) {
  const fs::path out = c.out_dir;
  const PhysicalUnits units = units_of(c);
  const DriveParams drive(c.v0, c.alpha, c.omega, c.phase);
  const PlaneWaveBasis basis(c.m_max, c.q);
  json meta = provenance(c, "floquet");
  const auto spec = spectrum_for(c, drive, basis, meta);
  const auto bands = bloch_bands(c.v0, basis, c.b_max);
  const auto c_n = overlaps(bands.state(0), spec);
  const auto pge = pge_coefficients(c_n, c.atom_number);

  io::CsvWriter csv(out / "floquet.csv");
  csv.header({"mode", "quasienergy", "parity", "weight", "mean_occupation", "eta"});
  for (Eigen::Index n = 0; n < spec.size(); ++n)
    csv.row(std::vector<double>{static_cast<double>(n), spec.quasienergies(n),
                                static_cast<double>(spec.parity[n]), std::norm(c_n.c(n)),
                                pge.mean_occupations[n], pge.eta[n]});
  csv.close();

  meta["drive"] = drive_json(drive, units);
  meta["m_max"] = c.m_max;
  meta["q"] = c.q;
  meta["ipr"] = ipr(c_n);
  meta["near_degenerate_pairs"] = spec.near_degenerate_pairs;
  meta["min_phase_gap"] = spec.min_phase_gap;
  meta["atom_number"] = c.atom_number;
  if (c.q == 0.0) {
    const auto occ = stroboscopic_band_occupations(c_n, spec, bands, c.b_max);
    meta["band_occupations"] = occ.fractions;
    meta["odd_total"] = occ.odd_total();
    meta["above_b_max"] = 1.0 - occ.total();
  }
  io::write_json(out / "floquet.json", meta);
  std::cout << "ipr " << io::format_double(meta["ipr"].get<double>()) << "\n";
  return kOk;
}

void write_svg_safely(const fs::path& path, const ParameterMap& map, const std::string& channel,
                      const std::vector<Polyline>& overlay) {
  try {
    io::write_text(path, io::heatmap_svg(map, channel, overlay));
  } catch (const std::exception& e) {
    std::cerr << "warning: " << path.string() << " not written: " << e.what() << "\n";
  }
}

int cmd_map(const RunConfig& c) {
  const fs::path out = c.out_dir;
  const MapGrid grid = c.grid.grid();
  PgeMapOptions options;
  options.cell.v0 = c.v0;
  options.cell.m_max = c.m_max;
  options.cell.q = c.q;
  options.cell.phase = c.phase;
  options.cell.steps = c.steps;
  options.cell.verify = c.verify;
  options.cell.tolerance = c.tolerance;
  options.cell.b_max = c.b_max;
  options.bands.assign(c.bands.begin(), c.bands.end());
  options.diagnostics = c.diagnostics;
  options.workers = c.workers;
  const ParameterMap map = pge_map(grid, options);
  for (const auto& name : map.channel_names()) io::write_map_csv(map, name, out / (name + ".csv"));

  const auto boundary = stability_boundary(stability_map(grid, c.monodromy_steps, c.workers));
  io::write_boundary_csv(boundary, out / "boundary.csv");

  json meta = io::map_metadata(map);
  meta.update(provenance(c, "map"));
  io::write_json(out / "map.json", meta);
  if (c.svg)
    for (const auto& name : map.channel_names())
      if (name.size() > 1 && name[0] == 'f' && std::isdigit(static_cast<unsigned char>(name[1])))
        write_svg_safely(out / (name + ".svg"), map, name, boundary);

  std::cout << map.channel_names().size() << " channels on " << grid.alpha.size() << "x"
            << grid.omega.size() << " grid, " << map.flags.size() << " flagged, "
            << map.failures.size() << " failed\n";
  if (!map.failures.empty()) {
    json manifest = provenance(c, "map");
    manifest["failed_cells"] = meta["failed_cells"];
    io::write_json(out / "failures.json", manifest);
    return kPartial;
  }
  return kOk;
}

int cmd_evolve(const RunConfig& c) {
  const fs::path out = c.out_dir;
  const PhysicalUnits units = units_of(c);
  const DriveParams drive(c.v0, c.alpha, c.omega, c.phase);
  const PlaneWaveBasis basis(c.m_max, c.q);
  const auto ground = bloch_bands(c.v0, basis, c.b_max).state(0);
  SampleSpec spec;
  spec.mode = sampling_from_string(c.sampling);
  spec.stride = c.stride;
  spec.b_max = c.b_max;
  spec.peak_max = c.peak_max;
  spec.steps = c.steps;
  spec.verify = c.verify;
  spec.tolerance = c.tolerance;
  const double t_final = units.microseconds_to_recoil(c.duration_us);
  const TimeSeries series = evolve(ground, drive, basis, t_final, spec);
  io::write_time_series_csv(series, units, out / "evolve.csv");

  json meta = io::time_series_metadata(series, units);
  meta.update(provenance(c, "evolve"));
  meta["drive"] = drive_json(drive, units);
  if (series.mode == Sampling::stroboscopic) {
    const std::size_t burn_in = series.size() / 10;
    if (series.size() >= burn_in + 10) {
      const auto avg = stroboscopic_average(series, burn_in);
      const auto& f0 = avg.at("f0");
      meta["f0_average"] = {{"burn_in_periods", burn_in}, {"mean", f0.mean},
                            {"stddev", f0.stddev}, {"standard_error", f0.standard_error}};
    }
  }
  if (c.bz_points > 0) {
    QuenchProtocol protocol;
    protocol.hold_duration = t_final;
    protocol.bz_window = c.bz_window;
    const auto weights = gaussian_q_weights(c.bz_sigma, c.bz_points, 1.0);
    const auto r = bz_averaged_observable(drive, c.m_max, protocol, weights, c.b_max, c.steps);
    meta["bz_quench"] = {{"window", c.bz_window}, {"sigma", c.bz_sigma}, {"points", c.bz_points},
                         {"hold", r.time}, {"bands", r.bands}};
  }
  io::write_json(out / "evolve.json", meta);
  const auto& f0 = series.channel("f0");
  std::cout << series.size() << " samples, min f0 "
            << io::format_double(*std::min_element(f0.begin(), f0.end())) << "\n";
  return kOk;
}

int cmd_stability(const RunConfig& c) {
  const fs::path out = c.out_dir;
  const MapGrid grid = c.grid.grid();
  const ParameterMap map = stability_map(grid, c.monodromy_steps, c.workers);
  for (const auto& name : map.channel_names()) io::write_map_csv(map, name, out / (name + ".csv"));
  const auto boundary = stability_boundary(map);
  io::write_boundary_csv(boundary, out / "boundary.csv");
  json meta = io::map_metadata(map);
  meta.update(provenance(c, "stability"));
  meta["boundary_lines"] = boundary.size();
  io::write_json(out / "stability.json", meta);
  if (c.svg) write_svg_safely(out / "stable.svg", map, "stable", boundary);
  std::cout << boundary.size() << " boundary lines\n";
  return kOk;
}

int cmd_fit(const RunConfig& c) {
  if (c.fit_input.empty()) throw ConfigError("no input CSV given", "fit.input");
  const fs::path out = c.out_dir;
  const TimeSeries series = io::read_time_series_csv(c.fit_input);
  const double t_max = c.fit_t_max > 0.0 ? c.fit_t_max : std::numeric_limits<double>::infinity();
  if (!series.has_channel(c.fit_channel))
    throw ConfigError("input has no column '" + c.fit_channel + "'", "fit.channel");
  const auto fit = fit_power_law(series, c.fit_channel, c.fit_t_min, t_max);
  json meta = provenance(c, "fit");
  meta["input"] = c.fit_input;
  meta["channel"] = c.fit_channel;
  meta["time_column"] = series.metadata.at("time_column");
  meta["window"] = {{"t_min", c.fit_t_min}, {"t_max", c.fit_t_max > 0.0 ? json(c.fit_t_max) : json()}};
  meta["exponent"] = fit.exponent;
  meta["amplitude"] = fit.amplitude;
  meta["residual"] = fit.residual;
  meta["samples"] = fit.samples;
  io::write_json(out / "fit.json", meta);
  std::cout << "exponent " << io::format_double(fit.exponent) << " from " << fit.samples
            << " samples\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet, ensemble and stability tools for a shaken optical lattice", "prethermal"};
  app.require_subcommand(1, 1);
  Overrides o;

  auto* bands = app.add_subcommand("bands", "static band structure E_b(q)");
  common_flags(bands, o);
  bands->add_option("--bands", o.band_count, "number of bands");

  auto* floquet = app.add_subcommand("floquet", "quasienergies, overlaps, IPR and PGE coefficients");
  common_flags(floquet, o);

  auto* map = app.add_subcommand("map", "band-occupation maps over (alpha, Omega)");
  common_flags(map, o);
  map->add_option("--workers", o.workers, "worker threads (0: all cores)");
  map->add_flag("--include-zero-alpha", o.include_zero_alpha, "prepend an alpha = 0 row");
  map->add_flag("--diagnostics", o.diagnostics, "also emit ipr, odd_total, above_b_max");

  auto* ev = app.add_subcommand("evolve", "time evolution from the ground band");
  common_flags(ev, o);
  ev->add_option("--duration-us", o.duration_us, "evolution time in microseconds");
  ev->add_option("--sampling", o.sampling, "stroboscopic | uniform | per_substep");

  auto* stab = app.add_subcommand("stability", "classical monodromy stability map");
  common_flags(stab, o);
  stab->add_option("--workers", o.workers, "worker threads (0: all cores)");
  stab->add_flag("--include-zero-alpha", o.include_zero_alpha, "prepend an alpha = 0 row");

  auto* fit = app.add_subcommand("fit", "power-law fit of a CSV column");
  common_flags(fit, o);
  fit->add_option("--input", o.input, "CSV with a time or time_us column");
  fit->add_option("--channel", o.channel, "column to fit");
  fit->add_option("--t-min", o.t_min, "window start, same unit as the time column");
  fit->add_option("--t-max", o.t_max, "window end (0: open)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  RunConfig config;
  try {
    config = resolve(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }

  try {
    if (bands->parsed()) return cmd_bands(config);
    if (floquet->parsed()) return cmd_floquet(config);
    if (map->parsed()) return cmd_map(config);
    if (ev->parsed()) return cmd_evolve(config);
    if (stab->parsed()) return cmd_stability(config);
    if (fit->parsed()) return cmd_fit(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
