#include "prethermal/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef PRETHERMAL_VERSION
#define PRETHERMAL_VERSION "0.0.0"
#endif

namespace prethermal::io {

const char* code_version() { return PRETHERMAL_VERSION; }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", value);
  return buf.data();
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path) {}

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_double(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::close() { write_text(path_, buffer_); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // Write then rename, so a failed write never leaves a truncated file.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_time_series_csv(const TimeSeries& series, const PhysicalUnits& units,
                           const std::filesystem::path& path) {
  series.validate();
  CsvWriter csv(path);
  std::vector<std::string> cols{"time", "time_us"};
  for (const auto& n : series.channel_names()) cols.push_back(n);
  csv.header(cols);
  std::vector<double> row(cols.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    row[0] = series.times[i];
    row[1] = units.recoil_to_microseconds(series.times[i]);
    std::size_t c = 2;
    for (const auto& n : series.channel_names()) row[c++] = series.channel(n)[i];
    csv.row(row);
  }
  csv.close();
}

nlohmann::json time_series_metadata(const TimeSeries& series, const PhysicalUnits& units) {
  nlohmann::json j;
  j["code_version"] = code_version();
  j["sampling"] = to_string(series.mode);
  j["samples"] = series.size();
  j["channels"] = series.channel_names();
  j["time_unit_s"] = units.time_unit_s();
  j["recoil_frequency_hz"] = units.recoil_frequency_hz();
  if (series.drive) {
    const auto& d = *series.drive;
    j["drive"] = {{"v0", d.v0()},       {"alpha", d.alpha()},   {"omega_rel", d.omega_rel()}, {"phase", d.phase()},
                  {"omega0", d.omega0()}, {"omega", d.omega()}, {"period", d.period()},
                  {"period_us", units.recoil_to_microseconds(d.period())}};
  }
  for (const auto& [k, v] : series.metadata) j["info"][k] = v;
  return j;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_number(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(where + ": not a number: '" + text + "'");
  }
}

}  // namespace

TimeSeries read_time_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path.string() + ": empty file");
  const auto header = split(line, ',');
  if (header.size() < 2) throw std::invalid_argument(path.string() + ": need a time and a value column");
  TimeSeries series;
  series.metadata["source"] = path.string();
  series.metadata["time_column"] = header[0];
  for (std::size_t c = 1; c < header.size(); ++c) series.add_channel(header[c]);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    const auto cells = split(line, ',');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (cells.size() != header.size()) throw std::invalid_argument(where + ": wrong column count");
    series.times.push_back(parse_number(cells[0], where));
    for (std::size_t c = 1; c < cells.size(); ++c)
      series.channel(header[c]).push_back(parse_number(cells[c], where));
  }
  series.validate();
  return series;
}

void write_map_csv(const ParameterMap& map, const std::string& channel,
                   const std::filesystem::path& path) {
  const Eigen::MatrixXd& m = map.channel(channel);
  CsvWriter csv(path);
  csv.header({"alpha", "omega", channel});
  for (std::size_t i = 0; i < map.alpha_axis().size(); ++i)
    for (std::size_t j = 0; j < map.omega_axis().size(); ++j)
      csv.row(std::vector<double>{map.alpha_axis()[i], map.omega_axis()[j],
                                  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  csv.close();
}

nlohmann::json map_metadata(const ParameterMap& map) {
  nlohmann::json j;
  j["code_version"] = code_version();
  j["alpha_axis"] = map.alpha_axis();
  j["omega_axis"] = map.omega_axis();
  j["channels"] = map.channel_names();
  auto cells = [](const std::vector<CellFlag>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : v)
      arr.push_back({{"alpha_index", f.alpha_index}, {"omega_index", f.omega_index}, {"reason", f.reason}});
    return arr;
  };
  j["flagged_cells"] = cells(map.flags);
  j["failed_cells"] = cells(map.failures);
  for (const auto& [k, v] : map.metadata) j["info"][k] = v;
  return j;
}

void write_boundary_csv(const std::vector<Polyline>& lines, const std::filesystem::path& path) {
  CsvWriter csv(path);
  csv.header({"line", "closed", "alpha", "omega"});
  for (std::size_t l = 0; l < lines.size(); ++l)
    for (const auto& p : lines[l].points)
      csv.row(std::vector<std::string>{std::to_string(l), lines[l].closed ? "1" : "0",
                                       format_double(p.x()), format_double(p.y())});
  csv.close();
}

namespace {

// Viridis, sampled at 9 points and linearly interpolated.
std::string ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 9> stops{{{68, 1, 84},
                                                              {71, 44, 122},
                                                              {59, 81, 139},
                                                              {44, 113, 142},
                                                              {33, 144, 141},
                                                              {39, 173, 129},
                                                              {92, 200, 99},
                                                              {170, 220, 50},
                                                              {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  std::array<int, 3> c{};
  for (int k = 0; k < 3; ++k)
    c[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

}  // namespace

std::string heatmap_svg(const ParameterMap& map, const std::string& channel,
                        const std::vector<Polyline>& overlay, double vmin, double vmax) {
  const Eigen::MatrixXd& m = map.channel(channel);
  const auto& alpha = map.alpha_axis();
  const auto& omega = map.omega_axis();
  const std::size_t first = (!alpha.empty() && alpha[0] <= 0.0) ? 1 : 0;
  if (alpha.size() - first < 2 || omega.size() < 2)
    throw std::invalid_argument("heatmap needs at least 2x2 positive-axis cells");

  // Omega on x, alpha on y, both log10.
  const double left = 70, top = 20, width = 400, height = 400;
  const double x0 = std::log10(omega.front()), x1 = std::log10(omega.back());
  const double y0 = std::log10(alpha[first]), y1 = std::log10(alpha.back());
  auto px = [&](double w) { return left + (std::log10(w) - x0) / (x1 - x0) * width; };
  auto py = [&](double a) { return top + height - (std::log10(a) - y0) / (y1 - y0) * height; };
  auto edge = [](const std::vector<double>& axis, std::size_t i, bool upper) {
    // Cell boundaries halfway between neighbours in log space.
    const std::size_t n = axis.size();
    const double l = std::log10(axis[i]);
    if (upper) return std::pow(10.0, i + 1 < n ? 0.5 * (l + std::log10(axis[i + 1])) : l);
    return std::pow(10.0, i > 0 ? 0.5 * (l + std::log10(axis[i - 1])) : l);
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + width + 90 << "\" height=\""
    << top + height + 60 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = first; i < alpha.size(); ++i) {
    for (std::size_t j = 0; j < omega.size(); ++j) {
      const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double xa = px(edge(omega, j, false)), xb = px(edge(omega, j, true));
      const double ya = py(edge(alpha, i, true)), yb = py(edge(alpha, i, false));
      const std::string fill = std::isnan(v) ? "#bbbbbb" : ramp((v - vmin) / (vmax - vmin));
      s << "<rect x=\"" << xa << "\" y=\"" << ya << "\" width=\"" << xb - xa << "\" height=\""
        << yb - ya << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  for (const auto& line : overlay) {
    s << "<polyline fill=\"none\" stroke=\"white\" stroke-width=\"2\" stroke-dasharray=\"4 3\" points=\"";
    for (const auto& p : line.points) s << px(p.y()) << ',' << py(p.x()) << ' ';
    s << "\"/>\n";
  }
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width << "\" height=\"" << height
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(x0 - 1e-9)); d <= std::floor(x1 + 1e-9); ++d) {
    const double x = px(std::pow(10.0, d));
    s << "<line x1=\"" << x << "\" y1=\"" << top + height << "\" x2=\"" << x << "\" y2=\""
      << top + height + 6 << "\" stroke=\"black\"/><text x=\"" << x << "\" y=\"" << top + height + 20
      << "\" text-anchor=\"middle\">10^" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y0 - 1e-9)); d <= std::floor(y1 + 1e-9); ++d) {
    const double y = py(std::pow(10.0, d));
    s << "<line x1=\"" << left - 6 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
      << "\" stroke=\"black\"/><text x=\"" << left - 10 << "\" y=\"" << y + 4
      << "\" text-anchor=\"end\">10^" << d << "</text>\n";
  }
  s << "<text x=\"" << left + width / 2 << "\" y=\"" << top + height + 45
    << "\" text-anchor=\"middle\">Omega</text>\n";
  s << "<text x=\"15\" y=\"" << top + height / 2 << "\" transform=\"rotate(-90 15 " << top + height / 2
    << ")\" text-anchor=\"middle\">alpha</text>\n";
  for (int k = 0; k < 50; ++k) {
    const double t = k / 49.0;
    s << "<rect x=\"" << left + width + 20 << "\" y=\"" << top + height - (k + 1) * height / 50
      << "\" width=\"15\" height=\"" << height / 50 + 0.5 << "\" fill=\"" << ramp(t) << "\"/>\n";
  }
  s << "<text x=\"" << left + width + 40 << "\" y=\"" << top + height << "\">" << format_double(vmin)
    << "</text><text x=\"" << left + width + 40 << "\" y=\"" << top + 10 << "\">"
    << format_double(vmax) << "</text>\n";
  s << "<text x=\"" << left + width / 2 << "\" y=\"14\" text-anchor=\"middle\">" << channel
    << "</text>\n</svg>\n";
  return s.str();
}

}  // namespace prethermal::io
