#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace prethermal {

/// `points` values log-spaced from lo to hi inclusive.
std::vector<double> log_axis(double lo, double hi, int points);

/// Rectangular (alpha, Omega) grid. Alpha may start at 0; Omega must be
/// positive. Both axes strictly increasing.
struct MapGrid {
  std::vector<double> alpha;
  std::vector<double> omega;

  /// Log-spaced grid, optionally with an extra alpha = 0 row in front.
  static MapGrid logarithmic(double alpha_lo, double alpha_hi, int alpha_points, double omega_lo,
                             double omega_hi, int omega_points, bool include_zero_alpha = false);

  std::size_t cells() const noexcept { return alpha.size() * omega.size(); }
  void validate() const;
};

struct CellFlag {
  std::size_t alpha_index;
  std::size_t omega_index;
  std::string reason;
};

/// One scalar per grid cell per channel. Channel matrices are indexed
/// (alpha, omega); NaN marks a failed cell.
class ParameterMap {
 public:
  explicit ParameterMap(MapGrid grid);

  const MapGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& alpha_axis() const noexcept { return grid_.alpha; }
  const std::vector<double>& omega_axis() const noexcept { return grid_.omega; }

  /// Adds (or returns the existing) channel filled with NaN.
  Eigen::MatrixXd& add_channel(const std::string& name);
  const Eigen::MatrixXd& channel(const std::string& name) const;
  Eigen::MatrixXd& channel(const std::string& name);
  bool has_channel(const std::string& name) const;
  const std::vector<std::string>& channel_names() const noexcept { return names_; }

  std::vector<CellFlag> flags;
  std::vector<CellFlag> failures;
  std::map<std::string, std::string> metadata;

 private:
  MapGrid grid_;
  std::vector<std::string> names_;
  std::map<std::string, Eigen::MatrixXd> channels_;
};

}  // namespace prethermal
