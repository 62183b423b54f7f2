#include "prethermal/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "prethermal/errors.hpp"
#include "prethermal/sweep.hpp"

namespace prethermal {

namespace {

const double kCbrt2 = std::cbrt(2.0);
const std::array<double, 3> kYoshida{1.0 / (2.0 - kCbrt2), -kCbrt2 / (2.0 - kCbrt2),
                                     1.0 / (2.0 - kCbrt2)};

// x' = A(t) x for a 2-vector, A = [[0, w], [-w g(t), 0]].
using Rhs = std::function<Eigen::Matrix2d(double)>;

// exp(A) for traceless 2x2 A; det is 1 by construction.
Eigen::Matrix2d expm_traceless(const Eigen::Matrix2d& a) {
  const double s2 = -a.determinant();
  double c, sh;  // cosh(s), sinh(s)/s
  if (std::abs(s2) < 1e-8) {
    c = 1.0 + s2 / 2.0 + s2 * s2 / 24.0;
    sh = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
  } else if (s2 > 0.0) {
    const double s = std::sqrt(s2);
    c = std::cosh(s);
    sh = std::sinh(s) / s;
  } else {
    const double s = std::sqrt(-s2);
    c = std::cos(s);
    sh = std::sin(s) / s;
  }
  return c * Eigen::Matrix2d::Identity() + sh * a;
}

// Fourth-order commutator-free Magnus with two exponentials per step.
Eigen::Matrix2d integrate_cf4(const Rhs& generator, double span, int steps) {
  const double h = span / steps;
  const double r = std::sqrt(3.0) / 6.0;
  const double c1 = 0.5 - r, c2 = 0.5 + r;
  const double b1 = 0.25 - r, b2 = 0.25 + r;
  Eigen::Matrix2d x = Eigen::Matrix2d::Identity();
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Eigen::Matrix2d a1 = generator(t + c1 * h);
    const Eigen::Matrix2d a2 = generator(t + c2 * h);
    x = expm_traceless(h * (b1 * a1 + b2 * a2)) * expm_traceless(h * (b2 * a1 + b1 * a2)) * x;
  }
  return x;
}

MonodromyResult finish(const Eigen::Matrix2d& m) {
  MonodromyResult r;
  r.matrix = m;
  r.trace = m.trace();
  r.stable = std::abs(r.trace) <= 2.0;
  return r;
}

MonodromyResult verified(const Rhs& generator, double span, int steps, double tolerance) {
  if (steps < 64) throw std::invalid_argument("monodromy needs at least 64 steps");
  const Eigen::Matrix2d coarse = integrate_cf4(generator, span, steps);
  const Eigen::Matrix2d fine = integrate_cf4(generator, span, 2 * steps);
  const double scale = std::max(1.0, std::abs(fine.trace()));
  const double change = std::abs(fine.trace() - coarse.trace()) / scale;
  if (!(change <= tolerance) || !fine.allFinite()) {
    std::ostringstream msg;
    msg << "monodromy not converged: doubling " << steps << " steps changed the trace by "
        << change << " (relative)";
    throw ConvergenceError(msg.str());
  }
  return finish(fine);
}

}  // namespace

double MonodromyResult::area_error() const {
  const double terms = std::abs(matrix(0, 0) * matrix(1, 1)) + std::abs(matrix(0, 1) * matrix(1, 0));
  return std::abs(determinant() - 1.0) / std::max(1.0, terms);
}

double MonodromyResult::log_multiplier() const {
  const double t = std::abs(trace);
  if (t <= 2.0) return 0.0;
  // Multipliers solve mu^2 - tr mu + det = 0 with det = 1.
  return std::log(0.5 * (t + std::sqrt(t * t - 4.0)));
}

MathieuPoint mathieu_parameters(double alpha, double omega_rel) {
  const double w2 = omega_rel * omega_rel;
  return {4.0 / w2, 2.0 * alpha / w2};
}

void drive_from_mathieu(double a, double q, double& alpha, double& omega_rel) {
  if (!(a > 0.0) || !(q >= 0.0)) throw std::invalid_argument("need a > 0 and q >= 0");
  omega_rel = 2.0 / std::sqrt(a);
  alpha = 2.0 * q / a;
}

MonodromyResult linearized_monodromy(const DriveParams& drive, int steps, double tolerance) {
  const double w0 = drive.omega0();
  const double alpha = drive.alpha();
  // Resolve the fastest local oscillation, sqrt(1 + alpha) omega0.
  const double cycles = std::sqrt(1.0 + alpha) / drive.omega_rel();
  const int n = std::max(steps, static_cast<int>(std::ceil(256.0 * cycles)));
  const Rhs generator = [=](double t) {
    Eigen::Matrix2d a;
    a << 0.0, w0, -w0 * drive.depth(t) / drive.v0(), 0.0;
    return a;
  };
  if (steps < 64) throw std::invalid_argument("monodromy needs at least 64 steps");
  return verified(generator, drive.period(), n, tolerance);
}

MonodromyResult mathieu_monodromy(double a, double q, int steps, double tolerance) {
  const double cycles = std::sqrt(std::abs(a) + 2.0 * std::abs(q)) / 2.0;
  const int n = std::max(steps, static_cast<int>(std::ceil(256.0 * cycles)));
  const Rhs generator = [=](double tau) {
    Eigen::Matrix2d m;
    m << 0.0, 1.0, -(a - 2.0 * q * std::cos(2.0 * tau)), 0.0;
    return m;
  };
  if (steps < 64) throw std::invalid_argument("monodromy needs at least 64 steps");
  return verified(generator, std::numbers::pi, n, tolerance);
}

ParameterMap stability_map(const MapGrid& grid, int steps, unsigned workers) {
  ParameterMap map(grid);
  map.add_channel("abs_trace");
  map.add_channel("stable");
  const std::size_t n_omega = grid.omega.size();
  std::vector<MonodromyResult> results(grid.cells());
  const auto errors = run_indexed(grid.cells(), workers, [&](std::size_t i) {
    // The pendulum frequency is omega0, so any v0 gives the same map.
    results[i] = linearized_monodromy(DriveParams(1.0, grid.alpha[i / n_omega], grid.omega[i % n_omega]),
                                      steps);
  });
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    const auto r = static_cast<Eigen::Index>(i / n_omega), c = static_cast<Eigen::Index>(i % n_omega);
    if (errors[i]) {
      std::string why = "unknown error";
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        why = e.what();
      } catch (...) {
      }
      map.failures.push_back({i / n_omega, i % n_omega, why});
      continue;
    }
    map.channel("abs_trace")(r, c) = std::abs(results[i].trace);
    map.channel("stable")(r, c) = results[i].stable ? 1.0 : 0.0;
  }
  map.metadata["model"] = "linearized pendulum at omega0, CF4 Magnus monodromy";
  return map;
}

std::vector<Polyline> stability_boundary(const ParameterMap& map) {
  const auto& alpha = map.alpha_axis();
  const auto& omega = map.omega_axis();
  const Eigen::MatrixXd& trace = map.channel("abs_trace");
  // alpha = 0 has no place on a log axis.
  const std::size_t first = (!alpha.empty() && alpha[0] <= 0.0) ? 1 : 0;
  const std::size_t rows = alpha.size() - first;
  const std::size_t cols = omega.size();
  std::vector<Polyline> out;
  if (rows < 2 || cols < 2) return out;

  auto x = [&](std::size_t i) { return std::log10(alpha[i + first]); };
  auto y = [&](std::size_t j) { return std::log10(omega[j]); };
  // Smooth monotone transform of |trace| - 2; NaN cells count as stable.
  auto level = [&](std::size_t i, std::size_t j) {
    const double t = trace(static_cast<Eigen::Index>(i + first), static_cast<Eigen::Index>(j));
    return std::isnan(t) ? -1.0 : std::asinh(t) - std::asinh(2.0);
  };

  // Edge ids: horizontal (i, j)-(i, j+1) -> 2*(i*cols + j); vertical
  // (i, j)-(i+1, j) -> 2*(i*cols + j) + 1.
  auto h_edge = [&](std::size_t i, std::size_t j) { return 2 * (i * cols + j); };
  auto v_edge = [&](std::size_t i, std::size_t j) { return 2 * (i * cols + j) + 1; };
  std::map<std::size_t, Eigen::Vector2d> crossing;
  auto cross = [&](std::size_t id, std::size_t i0, std::size_t j0, std::size_t i1,
                   std::size_t j1) {
    if (crossing.count(id)) return;
    const double f0 = level(i0, j0), f1 = level(i1, j1);
    const double s = f0 / (f0 - f1);
    crossing[id] = {x(i0) + s * (x(i1) - x(i0)), y(j0) + s * (y(j1) - y(j0))};
  };

  std::multimap<std::size_t, std::size_t> touching;  // edge -> segment
  std::vector<std::array<std::size_t, 2>> segments;
  auto add_segment = [&](std::size_t a, std::size_t b) {
    touching.emplace(a, segments.size());
    touching.emplace(b, segments.size());
    segments.push_back({a, b});
  };

  for (std::size_t i = 0; i + 1 < rows; ++i) {
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      // Corners counter-clockwise: (i,j), (i+1,j), (i+1,j+1), (i,j+1).
      const std::array<double, 4> f{level(i, j), level(i + 1, j), level(i + 1, j + 1),
                                    level(i, j + 1)};
      const std::array<std::size_t, 4> edge{v_edge(i, j), h_edge(i + 1, j), v_edge(i, j + 1),
                                            h_edge(i, j)};
      std::array<bool, 4> cut{};
      for (int e = 0; e < 4; ++e) cut[e] = (f[e] > 0.0) != (f[(e + 1) % 4] > 0.0);
      if (cut[0]) cross(edge[0], i, j, i + 1, j);
      if (cut[1]) cross(edge[1], i + 1, j, i + 1, j + 1);
      if (cut[2]) cross(edge[2], i, j + 1, i + 1, j + 1);
      if (cut[3]) cross(edge[3], i, j, i, j + 1);
      std::vector<int> cuts;
      for (int e = 0; e < 4; ++e)
        if (cut[e]) cuts.push_back(e);
      if (cuts.size() == 2) {
        add_segment(edge[cuts[0]], edge[cuts[1]]);
      } else if (cuts.size() == 4) {
        // Saddle: the center value decides which corners connect.
        const double center = 0.25 * (f[0] + f[1] + f[2] + f[3]);
        if ((center > 0.0) == (f[0] > 0.0)) {
          add_segment(edge[0], edge[1]);
          add_segment(edge[2], edge[3]);
        } else {
          add_segment(edge[3], edge[0]);
          add_segment(edge[1], edge[2]);
        }
      }
    }
  }

  std::vector<bool> used(segments.size(), false);
  auto walk = [&](std::size_t start_edge, std::size_t seg) {
    Polyline line;
    std::size_t at = start_edge;
    line.points.push_back(crossing[at]);
    while (true) {
      used[seg] = true;
      at = segments[seg][0] == at ? segments[seg][1] : segments[seg][0];
      line.points.push_back(crossing[at]);
      std::size_t next = segments.size();
      auto range = touching.equal_range(at);
      for (auto it = range.first; it != range.second; ++it)
        if (!used[it->second]) next = it->second;
      if (next == segments.size()) break;
      seg = next;
    }
    line.closed = line.points.size() > 2 && at == start_edge;
    for (auto& p : line.points) p = {std::pow(10.0, p.x()), std::pow(10.0, p.y())};
    return line;
  };
  // Open lines first, starting from their grid-edge ends.
  for (const auto& [edge_id, seg] : touching) {
    if (used[seg] || touching.count(edge_id) != 1) continue;
    out.push_back(walk(edge_id, seg));
  }
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) out.push_back(walk(segments[s][0], s));
  return out;
}

AngleSeries nonlinear_trajectory(const DriveParams& drive, double theta0, double theta_dot0,
                                 double t_final, int steps_per_period) {
  if (!std::isfinite(theta0) || !std::isfinite(theta_dot0))
    throw std::invalid_argument("initial conditions must be finite");
  if (steps_per_period < 16) throw std::invalid_argument("need at least 16 steps per period");
  if (!(t_final >= 0.0)) throw std::invalid_argument("t_final must be non-negative");
  const double h = drive.period() / steps_per_period;
  // Keep the step well below the fastest local oscillation period.
  const double fastest = drive.omega0() * std::sqrt(1.0 + drive.alpha());
  if (h * fastest > 0.5)
    throw ConvergenceError("step size too large for the pendulum frequency; raise steps_per_period");
  const double w0sq = drive.omega0() * drive.omega0();
  auto accel = [&](double t, double th) {
    return -w0sq * drive.depth(t) / drive.v0() * std::sin(th);
  };

  const auto n = static_cast<long>(std::floor(t_final / h + 1e-9));
  AngleSeries out;
  out.times.reserve(n + 1);
  out.theta.reserve(n + 1);
  out.theta_dot.reserve(n + 1);
  double th = theta0, v = theta_dot0;
  out.times.push_back(0.0);
  out.theta.push_back(th);
  out.theta_dot.push_back(v);
  for (long k = 0; k < n; ++k) {
    const double t = k * h;
    // Yoshida's fourth-order composition of drift-kick-drift.
    double tt = t;
    for (double w : kYoshida) {
      th += 0.5 * w * h * v;
      tt += 0.5 * w * h;
      v += w * h * accel(tt, th);
      th += 0.5 * w * h * v;
      tt += 0.5 * w * h;
    }
    if (!std::isfinite(th) || !std::isfinite(v)) throw ConvergenceError("trajectory diverged");
    out.times.push_back((k + 1) * h);
    out.theta.push_back(th);
    out.theta_dot.push_back(v);
  }
  return out;
}

}  // namespace prethermal
