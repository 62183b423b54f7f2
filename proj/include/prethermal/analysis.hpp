#pragma once

#include <map>
#include <string>
#include <vector>

#include "prethermal/time_series.hpp"

namespace prethermal {

/// Non-overlapping bins of width `bin_width` starting at the first sample.
/// Each bin's value is the mean of its samples and its time is the mean of
/// its sample times; empty bins are dropped and a partial trailing bin is
/// kept. A "bin_count" channel records how many samples each bin holds.
TimeSeries boxcar(const TimeSeries& series, double bin_width);

struct ChannelAverage {
  double mean = 0.0;
  double stddev = 0.0;
  double standard_error = 0.0;  ///< stddev / sqrt(count)
  std::size_t count = 0;
};

/// Mean of every channel over stroboscopic samples nu >= burn_in_periods
/// (sample index nu is period nu). Throws std::invalid_argument when the
/// series is not stroboscopic or fewer than 10 samples remain.
std::map<std::string, ChannelAverage> stroboscopic_average(const TimeSeries& series,
                                                           std::size_t burn_in_periods);

/// y = amplitude * t^exponent fitted by unweighted least squares in
/// log-log space over t_min <= t <= t_max.
struct PowerLawFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double residual = 0.0;  ///< RMS of log residuals
  std::size_t samples = 0;
};

PowerLawFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values,
                          double t_min, double t_max);
PowerLawFit fit_power_law(const TimeSeries& series, const std::string& channel, double t_min,
                          double t_max);

/// Fraction of a quasimomentum profile lying in the central `window` of
/// the zone, i.e. |q| <= window for q in units of k_L on [-1, 1]. The
/// profile is integrated with the trapezoid rule; q must be increasing and
/// cover [-window, window].
double bz_window_fraction(const std::vector<double>& q, const std::vector<double>& profile,
                          double window);

}  // namespace prethermal
