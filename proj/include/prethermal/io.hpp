#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "prethermal/classical.hpp"
#include "prethermal/param_map.hpp"
#include "prethermal/time_series.hpp"
#include "prethermal/units.hpp"

namespace prethermal::io {

/// Library version written into every output.
const char* code_version();

/// Round-trippable decimal form (17 significant digits, "nan"/"inf").
std::string format_double(double value);

/// One row per line: header then values, comma-separated.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::filesystem::path path_;
  std::string buffer_;
};

/// time, time_us, then every channel in order.
void write_time_series_csv(const TimeSeries& series, const PhysicalUnits& units,
                           const std::filesystem::path& path);

/// Everything about a series that is not tabular.
nlohmann::json time_series_metadata(const TimeSeries& series, const PhysicalUnits& units);

/// Reads a CSV whose first column is time ("time" in hbar/E_R or "time_us")
/// and whose remaining columns become channels.
TimeSeries read_time_series_csv(const std::filesystem::path& path);

/// Long form: alpha, omega, value; rows in grid order (alpha major).
void write_map_csv(const ParameterMap& map, const std::string& channel,
                   const std::filesystem::path& path);

nlohmann::json map_metadata(const ParameterMap& map);

/// line, closed, alpha, omega.
void write_boundary_csv(const std::vector<Polyline>& lines, const std::filesystem::path& path);

/// Heatmap of one channel on log axes with decade ticks, colors on a fixed
/// [vmin, vmax] scale, optional polyline overlay.
std::string heatmap_svg(const ParameterMap& map, const std::string& channel,
                        const std::vector<Polyline>& overlay, double vmin = 0.0,
                        double vmax = 1.0);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace prethermal::io
