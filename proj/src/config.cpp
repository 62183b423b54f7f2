#include "prethermal/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "prethermal/errors.hpp"

namespace prethermal {

MapGrid GridSpec::grid() const {
  return MapGrid::logarithmic(alpha_min, alpha_max, alpha_points, omega_min, omega_max,
                              omega_points, include_zero_alpha);
}

namespace {

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(message, key);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void RunConfig::validate() const {
  require(finite(v0) && v0 >= 0.0 && v0 <= 200.0, "lattice.v0", "must lie in [0, 200]");
  require(m_max >= 1 && m_max <= 64, "lattice.m_max", "must lie in [1, 64]");
  require(finite(q) && q >= -1.0 && q <= 1.0, "lattice.q", "must lie in [-1, 1]");
  require(finite(alpha) && alpha >= 0.0 && alpha <= 100.0, "drive.alpha", "must lie in [0, 100]");
  require(finite(omega) && omega > 0.0 && omega <= 100.0, "drive.omega", "must lie in (0, 100]");
  require(finite(phase) && std::abs(phase) <= 2.0 * M_PI, "drive.phase", "must lie in [-2 pi, 2 pi]");
  require(steps == 0 || (steps >= 16 && steps <= 1000000), "integrator.steps",
          "must be 0 (automatic) or in [16, 1000000]");
  require(finite(tolerance) && tolerance > 0.0 && tolerance < 1.0, "integrator.tolerance",
          "must lie in (0, 1)");

  require(finite(grid.alpha_min) && grid.alpha_min > 0.0, "grid.alpha.min", "must be positive");
  require(finite(grid.alpha_max) && grid.alpha_max > grid.alpha_min, "grid.alpha.max",
          "must exceed grid.alpha.min");
  require(grid.alpha_points >= 2 && grid.alpha_points <= 200, "grid.alpha.points",
          "must lie in [2, 200]");
  require(finite(grid.omega_min) && grid.omega_min > 0.0, "grid.omega.min", "must be positive");
  require(finite(grid.omega_max) && grid.omega_max > grid.omega_min, "grid.omega.max",
          "must exceed grid.omega.min");
  require(grid.omega_points >= 2 && grid.omega_points <= 200, "grid.omega.points",
          "must lie in [2, 200]");

  require(b_max >= 0 && b_max < 2 * m_max - 1, "map.b_max",
          "must lie in [0, 2*m_max - 2] (truncation)");
  require(!bands.empty(), "map.bands", "must not be empty");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    require(bands[i] >= 0 && bands[i] <= b_max, "map.bands", "entries must lie in [0, b_max]");
    require(i == 0 || bands[i] > bands[i - 1], "map.bands", "must be strictly increasing");
  }
  require(workers <= 1024, "map.workers", "must lie in [0, 1024]");

  require(band_count >= 1 && band_count <= 2 * m_max - 1, "bands.count",
          "must lie in [1, 2*m_max - 1]");
  require(q_points >= 2 && q_points <= 10001, "bands.q_points", "must lie in [2, 10001]");

  require(finite(duration_us) && duration_us > 0.0 && duration_us <= 1e6, "evolve.duration_us",
          "must lie in (0, 1e6]");
  require(sampling == "stroboscopic" || sampling == "uniform" || sampling == "per_substep",
          "evolve.sampling", "must be stroboscopic, uniform or per_substep");
  require(stride >= 1, "evolve.stride", "must be at least 1");
  require(peak_max >= 0 && peak_max <= m_max, "evolve.peak_max", "must lie in [0, m_max]");
  require(bz_window == 0.4 || bz_window == 1.0, "evolve.bz_window", "must be 0.4 or 1.0");
  require(bz_points == 0 || (bz_points >= 3 && bz_points <= 401), "evolve.bz_points",
          "must be 0 or in [3, 401]");
  require(finite(bz_sigma) && bz_sigma > 0.0, "evolve.bz_sigma", "must be positive");

  require(monodromy_steps >= 64 && monodromy_steps <= 1000000, "stability.steps",
          "must lie in [64, 1000000]");

  require(finite(fit_t_min) && fit_t_min >= 0.0, "fit.t_min", "must be non-negative");
  require(finite(fit_t_max) && (fit_t_max == 0.0 || fit_t_max > fit_t_min), "fit.t_max",
          "must be 0 (open) or exceed fit.t_min");
  require(!fit_channel.empty(), "fit.channel", "must not be empty");

  require(finite(atom_number) && atom_number > 0.0, "pge.atom_number", "must be positive");
  require(finite(recoil_frequency_hz) && recoil_frequency_hz >= 0.0, "units.recoil_frequency_hz",
          "must be non-negative");
  require(!out_dir.empty(), "output.dir", "must not be empty");
}

namespace {

std::string mark_of(const std::string& source, const YAML::Mark& m) {
  if (m.is_null()) return source;
  return source + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, bool>) return "a boolean";
  else if constexpr (std::is_same_v<T, std::string>) return "a string";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else return "a number";
}

class Parser {
 public:
  Parser(RunConfig& config, std::string source) : c_(config), source_(std::move(source)) {}

  void document(const YAML::Node& root) {
    if (root.IsNull()) return;
    if (!root.IsMap()) throw ConfigError("top level must be a mapping", mark_of(source_, root.Mark()));
    static const std::map<std::string, void (Parser::*)(const YAML::Node&)> sections{
        {"lattice", &Parser::lattice}, {"drive", &Parser::drive},
        {"integrator", &Parser::integrator}, {"grid", &Parser::grid},
        {"map", &Parser::map}, {"bands", &Parser::bands},
        {"evolve", &Parser::evolve}, {"stability", &Parser::stability},
        {"fit", &Parser::fit}, {"pge", &Parser::pge},
        {"units", &Parser::units}, {"output", &Parser::output}};
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      if (key == "seed") {
        c_.seed = scalar<std::uint64_t>(kv.second, "seed");
        continue;
      }
      const auto it = sections.find(key);
      if (it == sections.end()) unknown(kv.first, "");
      if (!kv.second.IsMap() && !kv.second.IsNull())
        throw ConfigError("section '" + key + "' must be a mapping", mark_of(source_, kv.second.Mark()));
      (this->*(it->second))(kv.second);
    }
  }

  const std::map<std::string, YAML::Mark>& marks() const { return marks_; }

 private:
  using Fields = std::map<std::string, std::function<void(const YAML::Node&, const std::string&)>>;

  template <class T>
  T scalar(const YAML::Node& node, const std::string& key) {
    marks_[key] = node.Mark();
    if (!node.IsScalar())
      throw ConfigError("'" + key + "' expects " + type_name<T>(), mark_of(source_, node.Mark()));
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("'" + key + "' expects " + type_name<T>() + ", got '" + node.Scalar() + "'",
                        mark_of(source_, node.Mark()));
    }
  }

  template <class T>
  auto set(T& field) {
    return [this, &field](const YAML::Node& n, const std::string& key) { field = scalar<T>(n, key); };
  }

  [[noreturn]] void unknown(const YAML::Node& key_node, const std::string& prefix) {
    throw ConfigError("unknown key '" + prefix + key_node.as<std::string>() + "'",
                      mark_of(source_, key_node.Mark()));
  }

  void fields(const YAML::Node& node, const std::string& prefix, const Fields& table) {
    if (!node.IsMap()) return;
    for (const auto& kv : node) {
      const auto name = kv.first.as<std::string>();
      const auto it = table.find(name);
      if (it == table.end()) unknown(kv.first, prefix);
      it->second(kv.second, prefix + name);
    }
  }

  void lattice(const YAML::Node& n) {
    fields(n, "lattice.", {{"v0", set(c_.v0)}, {"m_max", set(c_.m_max)}, {"q", set(c_.q)}});
  }
  void drive(const YAML::Node& n) {
    fields(n, "drive.", {{"alpha", set(c_.alpha)}, {"omega", set(c_.omega)}, {"phase", set(c_.phase)}});
  }
  void integrator(const YAML::Node& n) {
    fields(n, "integrator.", {{"steps", set(c_.steps)}, {"verify", set(c_.verify)},
                              {"tolerance", set(c_.tolerance)}});
  }
  void grid(const YAML::Node& n) {
    auto& g = c_.grid;
    auto axis = [this](double& lo, double& hi, int& points) {
      return [this, &lo, &hi, &points](const YAML::Node& node, const std::string& key) {
        if (!node.IsMap())
          throw ConfigError("'" + key + "' must be a mapping with min, max, points",
                            mark_of(source_, node.Mark()));
        marks_[key] = node.Mark();
        fields(node, key + ".", {{"min", set(lo)}, {"max", set(hi)}, {"points", set(points)}});
      };
    };
    fields(n, "grid.", {{"alpha", axis(g.alpha_min, g.alpha_max, g.alpha_points)},
                        {"omega", axis(g.omega_min, g.omega_max, g.omega_points)},
                        {"include_zero_alpha", set(g.include_zero_alpha)}});
  }
  void map(const YAML::Node& n) {
    auto band_list = [this](const YAML::Node& node, const std::string& key) {
      marks_[key] = node.Mark();
      if (!node.IsSequence())
        throw ConfigError("'" + key + "' expects a list of integers", mark_of(source_, node.Mark()));
      c_.bands.clear();
      for (const auto& item : node) c_.bands.push_back(scalar<int>(item, key));
      marks_[key] = node.Mark();
    };
    fields(n, "map.", {{"bands", band_list}, {"b_max", set(c_.b_max)},
                       {"diagnostics", set(c_.diagnostics)}, {"workers", set(c_.workers)}});
  }
  void bands(const YAML::Node& n) {
    fields(n, "bands.", {{"count", set(c_.band_count)}, {"q_points", set(c_.q_points)}});
  }
  void evolve(const YAML::Node& n) {
    fields(n, "evolve.", {{"duration_us", set(c_.duration_us)}, {"sampling", set(c_.sampling)},
                          {"stride", set(c_.stride)}, {"peak_max", set(c_.peak_max)},
                          {"bz_window", set(c_.bz_window)}, {"bz_points", set(c_.bz_points)},
                          {"bz_sigma", set(c_.bz_sigma)}});
  }
  void stability(const YAML::Node& n) { fields(n, "stability.", {{"steps", set(c_.monodromy_steps)}}); }
  void fit(const YAML::Node& n) {
    fields(n, "fit.", {{"input", set(c_.fit_input)}, {"channel", set(c_.fit_channel)},
                       {"t_min", set(c_.fit_t_min)}, {"t_max", set(c_.fit_t_max)}});
  }
  void pge(const YAML::Node& n) { fields(n, "pge.", {{"atom_number", set(c_.atom_number)}}); }
  void units(const YAML::Node& n) {
    fields(n, "units.", {{"recoil_frequency_hz", set(c_.recoil_frequency_hz)}});
  }
  void output(const YAML::Node& n) {
    fields(n, "output.", {{"dir", set(c_.out_dir)}, {"svg", set(c_.svg)}});
  }

  RunConfig& c_;
  std::string source_;
  std::map<std::string, YAML::Mark> marks_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig config;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, mark_of(source, e.mark));
  }
  Parser parser(config, source);
  parser.document(root);
  try {
    config.validate();
  } catch (const ConfigError& e) {
    const auto it = parser.marks().find(e.where());
    const std::string where = it != parser.marks().end() ? mark_of(source, it->second) : source;
    const std::string msg = std::string(e.what()).substr(e.where().size() + 2);
    throw ConfigError(e.where() + " " + msg, where);
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file", path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Keep floats recognisable as floats.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

const char* boolean(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string to_yaml(const RunConfig& c) {
  std::ostringstream s;
  s << "lattice:\n  v0: " << num(c.v0) << "\n  m_max: " << c.m_max << "\n  q: " << num(c.q) << "\n";
  s << "drive:\n  alpha: " << num(c.alpha) << "\n  omega: " << num(c.omega)
    << "\n  phase: " << num(c.phase) << "\n";
  s << "integrator:\n  steps: " << c.steps << "\n  verify: " << boolean(c.verify)
    << "\n  tolerance: " << num(c.tolerance) << "\n";
  s << "grid:\n  alpha: {min: " << num(c.grid.alpha_min) << ", max: " << num(c.grid.alpha_max)
    << ", points: " << c.grid.alpha_points << "}\n  omega: {min: " << num(c.grid.omega_min)
    << ", max: " << num(c.grid.omega_max) << ", points: " << c.grid.omega_points
    << "}\n  include_zero_alpha: " << boolean(c.grid.include_zero_alpha) << "\n";
  s << "map:\n  bands: [";
  for (std::size_t i = 0; i < c.bands.size(); ++i) s << (i ? ", " : "") << c.bands[i];
  s << "]\n  b_max: " << c.b_max << "\n  diagnostics: " << boolean(c.diagnostics)
    << "\n  workers: " << c.workers << "\n";
  s << "bands:\n  count: " << c.band_count << "\n  q_points: " << c.q_points << "\n";
  s << "evolve:\n  duration_us: " << num(c.duration_us) << "\n  sampling: " << c.sampling
    << "\n  stride: " << c.stride << "\n  peak_max: " << c.peak_max
    << "\n  bz_window: " << num(c.bz_window) << "\n  bz_points: " << c.bz_points
    << "\n  bz_sigma: " << num(c.bz_sigma) << "\n";
  s << "stability:\n  steps: " << c.monodromy_steps << "\n";
  s << "fit:\n  input: " << quoted(c.fit_input) << "\n  channel: " << quoted(c.fit_channel)
    << "\n  t_min: " << num(c.fit_t_min) << "\n  t_max: " << num(c.fit_t_max) << "\n";
  s << "pge:\n  atom_number: " << num(c.atom_number) << "\n";
  s << "units:\n  recoil_frequency_hz: " << num(c.recoil_frequency_hz) << "\n";
  s << "output:\n  dir: " << quoted(c.out_dir) << "\n  svg: " << boolean(c.svg) << "\n";
  s << "seed: " << c.seed << "\n";
  return s.str();
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_yaml(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GridSpec parse_grid_flag(const std::string& text) {
  GridSpec g;
  double a0, a1, w0, w1;
  int na, nw;
  char tail;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d,%lf:%lf:%d%c", &a0, &a1, &na, &w0, &w1, &nw, &tail) != 6)
    throw ConfigError("expected \"a0:a1:na,w0:w1:nw\", got \"" + text + "\"", "--grid");
  g.alpha_min = a0;
  g.alpha_max = a1;
  g.alpha_points = na;
  g.omega_min = w0;
  g.omega_max = w1;
  g.omega_points = nw;
  return g;
}

}  // namespace prethermal
