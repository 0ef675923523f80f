#include "fracgibc/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracgibc/errors.hpp"
#include "fracgibc/freq_solver.hpp"

namespace fracgibc {

namespace {

constexpr double kPi = std::numbers::pi;

struct ContourNodes {
  std::vector<std::complex<double>> s;        // nodes with Im >= 0 (index 0 on the axis)
  std::vector<std::complex<double>> weight;   // h * s'(x_k) / (2 pi i)
};

// Hyperbola s(x) = mu (1 - sin(phi) cosh x + i cos(phi) sinh x), trapezoid in x.
// The mapped integrand is analytic for shifts |y| < (theta_max - pi/2)/2 when
// phi sits in the middle of that strip, so the step h is chosen to balance
// the resulting discretization error exp(mu t - 2 pi d / h) against the
// truncation error exp(mu t (1 - sin(phi) cosh(h K))).
ContourNodes hyperbola_nodes(const ContourSpec& spec, double alpha, double t_min) {
  const double theta_max = spec.theta_max(alpha);
  const double strip = 0.5 * (theta_max - kPi / 2.0);
  const double phi = spec.half_angle.value_or(strip);
  if (!(phi > 0.02)) {
    throw InvalidInput("contour: sector too narrow for a hyperbolic contour at this alpha");
  }
  const int half = std::max(spec.node_count / 2, 4);
  const double k_half = static_cast<double>(half);
  const double sin_phi = std::sin(phi);

  // Feasible region: sin(phi) cosh(h K) > 1. Minimize the balanced log-error
  // (2 pi d / h) (1 - sc) / sc over a deterministic grid.
  const double x_floor = std::acosh(1.0 / sin_phi);
  double best_h = 0.0, best_log = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double x_max = x_floor + 0.05 + 12.0 * i / 400.0;
    const double h_try = x_max / k_half;
    const double sc = sin_phi * std::cosh(x_max);
    const double log_err = (2.0 * kPi * strip / h_try) * (1.0 - sc) / sc;
    if (best_h == 0.0 || log_err < best_log) {
      best_h = h_try;
      best_log = log_err;
    }
  }
  const double h = best_h;
  const double x_max = h * k_half;
  double mu;
  if (spec.scale) {
    mu = *spec.scale;
  } else {
    mu = 2.0 * kPi * strip /
         (h * t_min * sin_phi * std::cosh(x_max));
  }

  ContourNodes nodes;
  nodes.s.reserve(static_cast<std::size_t>(half) + 1);
  nodes.weight.reserve(static_cast<std::size_t>(half) + 1);
  const std::complex<double> i_unit(0.0, 1.0);
  for (int k = 0; k <= half; ++k) {
    const double x = h * k;
    const std::complex<double> s(mu * (1.0 - std::sin(phi) * std::cosh(x)),
                                 mu * std::cos(phi) * std::sinh(x));
    const std::complex<double> ds(-mu * std::sin(phi) * std::sinh(x),
                                  mu * std::cos(phi) * std::cosh(x));
    if (std::abs(std::arg(s)) > theta_max) {
      throw NumericalFailure("contour: node outside the admissible sector");
    }
    nodes.s.push_back(s);
    nodes.weight.push_back(h * ds / (2.0 * kPi * i_unit));
  }
  return nodes;
}

// Vertical line s = sigma0 + i y, algebraic convergence; fallback contour.
ContourNodes bromwich_nodes(const ContourSpec& spec, double t_min) {
  const double sigma0 = spec.scale.value_or(std::max(1.0, 2.0 / t_min));
  const int half = std::max(spec.node_count / 2, 4);
  // Truncate where |G|-type decay ~ 1/|s|^2 makes the tail negligible at the
  // working tolerance of this contour type.
  const double y_max = std::max(50.0, 20.0 / t_min) * sigma0;
  const double h = y_max / half;
  ContourNodes nodes;
  const std::complex<double> i_unit(0.0, 1.0);
  for (int k = 0; k <= half; ++k) {
    nodes.s.emplace_back(sigma0, h * k);
    nodes.weight.push_back(h * i_unit / (2.0 * kPi * i_unit));
  }
  return nodes;
}

}  // namespace

double ContourSpec::theta_max(double alpha) const {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw InvalidInput("alpha must lie in (0,1)");
  return std::min(kPi, kPi / (2.0 * alpha)) - sector_margin;
}

TimeTrajectory invert(const ContourSpec& contour, double alpha,
                      const std::function<Eigen::VectorXcd(std::complex<double>)>& evaluator,
                      const std::vector<double>& times) {
  if (times.empty()) throw InvalidInput("invert: no evaluation times");
  for (double t : times) {
    if (!(t > 0.0)) throw InvalidInput("invert: times must be positive");
  }

  TimeTrajectory traj;
  traj.provenance = TimeTrajectory::Provenance::ContourInversion;
  traj.times = times;
  traj.values.resize(times.size());

  // Group times into windows [T, 2T): one contour per window keeps the
  // parameter balance while sharing frequency solves.
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

  std::size_t start = 0;
  while (start < order.size()) {
    const double t_min = times[order[start]];
    std::size_t end = start;
    while (end < order.size() && times[order[end]] < 2.0 * t_min * (1.0 + 1e-12)) ++end;

    const ContourNodes nodes = (contour.type == ContourSpec::Type::Hyperbolic)
                                   ? hyperbola_nodes(contour, alpha, t_min)
                                   : bromwich_nodes(contour, t_min);
    std::vector<Eigen::VectorXcd> values(nodes.s.size());
    for (std::size_t k = 0; k < nodes.s.size(); ++k) values[k] = evaluator(nodes.s[k]);

    for (std::size_t idx = start; idx < end; ++idx) {
      const double t = times[order[idx]];
      Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(values[0].size());
      for (std::size_t k = 0; k < nodes.s.size(); ++k) {
        const std::complex<double> term = std::exp(nodes.s[k] * t) * nodes.weight[k];
        if (k == 0) {
          acc += term * values[k];
        } else {
          // The mirror node at -x contributes the conjugate term.
          acc += term * values[k] + (std::conj(term) * values[k].conjugate());
        }
      }
      traj.values[order[idx]] = acc.real();
    }
    start = end;
  }
  return traj;
}

TimeTrajectory invert_self_validating(
    const ContourSpec& contour, double alpha,
    const std::function<Eigen::VectorXcd(std::complex<double>)>& evaluator,
    const std::vector<double>& times, double tol, int max_doublings) {
  ContourSpec spec = contour;
  TimeTrajectory prev = invert(spec, alpha, evaluator, times);
  for (int round = 0; round < max_doublings; ++round) {
    spec.node_count *= 2;
    TimeTrajectory next = invert(spec, alpha, evaluator, times);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      diff = std::max(diff, (next.values[i] - prev.values[i]).cwiseAbs().maxCoeff());
      scale = std::max(scale, next.values[i].cwiseAbs().maxCoeff());
    }
    if (diff <= tol * std::max(scale, 1e-300)) return next;
    prev = std::move(next);
  }
  throw NumericalFailure("invert: node doubling did not reach the requested agreement");
}

PartialTransform partial_transform(const TimeTrajectory& traj, double T,
                                   std::complex<double> s) {
  if (traj.times.empty()) throw InvalidInput("partial_transform: empty trajectory");
  if (!(s.real() > 0.0)) throw InvalidInput("partial_transform: Re(s) must be positive");

  const auto integrate = [&](int stride) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(traj.dim());
    std::size_t prev = 0;
    for (std::size_t i = static_cast<std::size_t>(stride); i < traj.times.size();
         i += static_cast<std::size_t>(stride)) {
      const double t0 = traj.times[prev];
      double t1 = traj.times[i];
      if (t0 >= T) break;
      Eigen::VectorXd v1 = traj.values[i];
      if (t1 > T) {
        // Linear interpolation of the last partial interval.
        const double w = (T - t0) / (t1 - t0);
        v1 = (1.0 - w) * traj.values[prev] + w * traj.values[i];
        t1 = T;
      }
      const std::complex<double> w0 = std::exp(-s * t0);
      const std::complex<double> w1 = std::exp(-s * t1);
      acc += 0.5 * (t1 - t0) *
             (w0 * traj.values[prev].cast<std::complex<double>>() +
              w1 * v1.cast<std::complex<double>>());
      prev = i;
      if (t1 >= T) break;
    }
    return acc;
  };

  PartialTransform out;
  out.value = integrate(1);
  if (traj.times.size() > 4) {
    const Eigen::VectorXcd coarse = integrate(2);
    out.grid_error = (out.value - coarse).norm();
  }
  return out;
}

TruncationStudy truncation_decay_study(
    const TimeTrajectory& traj, const Eigen::VectorXcd& reference, std::complex<double> s,
    const std::vector<double>& horizons,
    const std::function<double(const Eigen::VectorXcd&)>& norm) {
  if (horizons.size() < 2) throw InvalidInput("truncation study: need at least two horizons");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 1.0) throw InvalidInput("truncation study: horizons must be >= 1");
    if (i > 0 && horizons[i] <= horizons[i - 1]) {
      throw InvalidInput("truncation study: horizons must be increasing");
    }
  }

  TruncationStudy study;
  study.horizons = horizons;
  for (double T : horizons) {
    const auto pt = partial_transform(traj, T, s);
    const double e = norm(reference - pt.value);
    if (e <= 0.0) throw NumericalFailure("truncation study: error hit the floating-point floor");
    study.errors.push_back(e);
  }

  // Least squares for log e = c0 + m log T - rate T.
  const auto n = static_cast<Eigen::Index>(horizons.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = std::log(horizons[static_cast<std::size_t>(i)]);
    X(i, 2) = -horizons[static_cast<std::size_t>(i)];
    y(i) = std::log(study.errors[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(y);
  study.fitted_log_c = beta(0);
  study.fitted_m = beta(1);
  study.fitted_rate = beta(2);
  return study;
}

}  // namespace fracgibc
