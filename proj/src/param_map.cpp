#include "prethermal/param_map.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace prethermal {

std::vector<double> log_axis(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log axis needs 0 < lo <= hi");
  if (points < 1) throw std::invalid_argument("log axis needs at least one point");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < points; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (points - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

MapGrid MapGrid::logarithmic(double alpha_lo, double alpha_hi, int alpha_points, double omega_lo,
                             double omega_hi, int omega_points, bool include_zero_alpha) {
  MapGrid g;
  if (include_zero_alpha) g.alpha.push_back(0.0);
  const auto a = log_axis(alpha_lo, alpha_hi, alpha_points);
  g.alpha.insert(g.alpha.end(), a.begin(), a.end());
  g.omega = log_axis(omega_lo, omega_hi, omega_points);
  g.validate();
  return g;
}

void MapGrid::validate() const {
  if (alpha.empty() || omega.empty()) throw std::invalid_argument("grid axes must be non-empty");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] >= 0.0)) throw std::invalid_argument("alpha axis must be non-negative");
    if (i > 0 && !(alpha[i] > alpha[i - 1]))
      throw std::invalid_argument("alpha axis must be strictly increasing");
  }
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0)) throw std::invalid_argument("omega axis must be positive");
    if (i > 0 && !(omega[i] > omega[i - 1]))
      throw std::invalid_argument("omega axis must be strictly increasing");
  }
}

ParameterMap::ParameterMap(MapGrid grid) : grid_(std::move(grid)) { grid_.validate(); }

Eigen::MatrixXd& ParameterMap::add_channel(const std::string& name) {
  auto it = channels_.find(name);
  if (it != channels_.end()) return it->second;
  names_.push_back(name);
  return channels_
      .emplace(name, Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(grid_.alpha.size()),
                                               static_cast<Eigen::Index>(grid_.omega.size()),
                                               std::numeric_limits<double>::quiet_NaN()))
      .first->second;
}

const Eigen::MatrixXd& ParameterMap::channel(const std::string& name) const {
  auto it = channels_.find(name);
  if (it == channels_.end()) throw std::out_of_range("no channel named " + name);
  return it->second;
}

Eigen::MatrixXd& ParameterMap::channel(const std::string& name) {
  auto it = channels_.find(name);
  if (it == channels_.end()) throw std::out_of_range("no channel named " + name);
  return it->second;
}

bool ParameterMap::has_channel(const std::string& name) const { return channels_.count(name) > 0; }

}  // namespace prethermal
