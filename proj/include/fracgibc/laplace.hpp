#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "fracgibc/signals.hpp"

namespace fracgibc {

/// Quadrature contour for the inverse Laplace transform. Hyperbolic contours
/// give geometric convergence inside the analyticity sector; a vertical
/// Bromwich line is available as a fallback. Auto-tuned per evaluation time
/// unless scale/half_angle are pinned.
struct ContourSpec {
  enum class Type { Hyperbolic, BromwichLine };
  Type type = Type::Hyperbolic;
  int node_count = 64;          // quadrature nodes on the full contour
  double sector_margin = 0.1;   // delta in theta_max = min(pi, pi/(2 alpha)) - delta
  std::optional<double> scale;       // mu (hyperbola) or line abscissa sigma0
  std::optional<double> half_angle;  // hyperbola shape angle phi

  double theta_max(double alpha) const;
};

/// Time samples of a (vector-valued) causal function.
struct TimeTrajectory {
  enum class Provenance { ContourInversion, L1Oracle };
  std::vector<double> times;
  std::vector<Eigen::VectorXd> values;
  Provenance provenance = Provenance::ContourInversion;

  Eigen::Index dim() const { return values.empty() ? 0 : values.front().size(); }
};

/// Numerical inverse Laplace transform of an analytic, conjugate-symmetric
/// evaluator (U(conj s) = conj U(s)). Every quadrature node is checked
/// against the sector cap; violations throw.
TimeTrajectory invert(const ContourSpec& contour, double alpha,
                      const std::function<Eigen::VectorXcd(std::complex<double>)>& evaluator,
                      const std::vector<double>& times);

/// Doubles the node count until two successive trajectories agree to tol in
/// the max norm (relative to the trajectory scale); returns the finer one.
TimeTrajectory invert_self_validating(const ContourSpec& contour, double alpha,
                                      const std::function<Eigen::VectorXcd(std::complex<double>)>& evaluator,
                                      const std::vector<double>& times, double tol,
                                      int max_doublings = 4);

/// Truncated transform int_0^T u(t) e^{-st} dt by trapezoid quadrature on the
/// trajectory grid. grid_error estimates the quadrature error by comparing
/// against the half-resolution grid.
struct PartialTransform {
  Eigen::VectorXcd value;
  double grid_error = 0.0;
};

PartialTransform partial_transform(const TimeTrajectory& traj, double T,
                                   std::complex<double> s);

/// Truncation error study e(T) = ||reference - partial_transform(traj, T)||,
/// fitted as log e = log C + m log T - rate * T.
struct TruncationStudy {
  std::vector<double> horizons;
  std::vector<double> errors;
  double fitted_rate = 0.0;   // estimate of Re(s)
  double fitted_m = 0.0;
  double fitted_log_c = 0.0;
};

TruncationStudy truncation_decay_study(
    const TimeTrajectory& traj, const Eigen::VectorXcd& reference, std::complex<double> s,
    const std::vector<double>& horizons,
    const std::function<double(const Eigen::VectorXcd&)>& norm);

}  // namespace fracgibc
