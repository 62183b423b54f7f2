#include "prethermal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prethermal {

TimeSeries boxcar(const TimeSeries& series, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be positive");
  if (series.size() == 0) throw std::invalid_argument("cannot bin an empty series");
  series.validate();

  TimeSeries out;
  out.mode = Sampling::uniform;
  out.drive = series.drive;
  out.metadata = series.metadata;
  out.metadata["boxcar_bin_width"] = std::to_string(bin_width);
  const auto& names = series.channel_names();
  for (const auto& name : names) out.add_channel(name);
  auto& counts = out.add_channel("bin_count");

  const double t0 = series.times.front();
  std::size_t i = 0;
  while (i < series.size()) {
    const auto bin = static_cast<long>(std::floor((series.times[i] - t0) / bin_width + 1e-9));
    std::size_t j = i;
    double tsum = 0.0;
    while (j < series.size() &&
           static_cast<long>(std::floor((series.times[j] - t0) / bin_width + 1e-9)) == bin) {
      tsum += series.times[j];
      ++j;
    }
    const double n = static_cast<double>(j - i);
    out.times.push_back(j - i == 1 ? series.times[i] : tsum / n);
    for (const auto& name : names) {
      const auto& v = series.channel(name);
      double sum = 0.0;
      for (std::size_t k = i; k < j; ++k) sum += v[k];
      out.channel(name).push_back(j - i == 1 ? v[i] : sum / n);
    }
    counts.push_back(n);
    i = j;
  }
  return out;
}

std::map<std::string, ChannelAverage> stroboscopic_average(const TimeSeries& series,
                                                           std::size_t burn_in_periods) {
  if (series.mode != Sampling::stroboscopic)
    throw std::invalid_argument("stroboscopic_average needs a stroboscopic series");
  series.validate();
  if (series.size() < burn_in_periods + 10)
    throw std::invalid_argument("fewer than 10 samples after burn-in");

  std::map<std::string, ChannelAverage> out;
  for (const auto& name : series.channel_names()) {
    const auto& v = series.channel(name);
    ChannelAverage avg;
    avg.count = v.size() - burn_in_periods;
    double sum = 0.0;
    for (std::size_t k = burn_in_periods; k < v.size(); ++k) sum += v[k];
    avg.mean = sum / static_cast<double>(avg.count);
    double var = 0.0;
    for (std::size_t k = burn_in_periods; k < v.size(); ++k) var += (v[k] - avg.mean) * (v[k] - avg.mean);
    avg.stddev = std::sqrt(var / static_cast<double>(avg.count));
    avg.standard_error = avg.stddev / std::sqrt(static_cast<double>(avg.count));
    out.emplace(name, avg);
  }
  return out;
}

PowerLawFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values,
                          double t_min, double t_max) {
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  if (!(t_min > 0.0) || !(t_max > t_min)) throw std::invalid_argument("need 0 < t_min < t_max");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min || times[i] > t_max) continue;
    if (!(values[i] > 0.0)) throw std::invalid_argument("power-law fit needs positive values");
    x.push_back(std::log(times[i]));
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 5) throw std::invalid_argument("fit window holds fewer than 5 samples");

  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit window needs distinct times");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.amplitude = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + fit.exponent * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.samples = x.size();
  return fit;
}

PowerLawFit fit_power_law(const TimeSeries& series, const std::string& channel, double t_min,
                          double t_max) {
  return fit_power_law(series.times, series.channel(channel), t_min, t_max);
}

namespace {

// Integral of the piecewise-linear interpolant over [lo, hi].
double clipped_trapezoid(const std::vector<double>& q, const std::vector<double>& f, double lo,
                         double hi) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    const double a = std::max(q[i], lo), b = std::min(q[i + 1], hi);
    if (!(b > a)) continue;
    const double slope = (f[i + 1] - f[i]) / (q[i + 1] - q[i]);
    const double fa = f[i] + slope * (a - q[i]);
    const double fb = f[i] + slope * (b - q[i]);
    sum += 0.5 * (fa + fb) * (b - a);
  }
  return sum;
}

}  // namespace

double bz_window_fraction(const std::vector<double>& q, const std::vector<double>& profile,
                          double window) {
  if (q.size() != profile.size()) throw std::invalid_argument("q and profile differ in length");
  if (!(window > 0.0 && window <= 1.0)) throw std::invalid_argument("window must lie in (0, 1]");
  if (q.size() < 2) throw std::invalid_argument("insufficient quasimomentum coverage");
  for (std::size_t i = 1; i < q.size(); ++i)
    if (!(q[i] > q[i - 1])) throw std::invalid_argument("q must be strictly increasing");
  const double tol = 1e-12;
  if (q.front() > -window + tol || q.back() < window - tol)
    throw std::invalid_argument("insufficient quasimomentum coverage for the window");

  const double total = clipped_trapezoid(q, profile, q.front(), q.back());
  if (!(total > 0.0)) throw std::invalid_argument("profile integrates to zero");
  return clipped_trapezoid(q, profile, -window, window) / total;
}

}  // namespace prethermal
