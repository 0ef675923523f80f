#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fracgibc {

enum class CurveKind { Circle, Ellipse, Star };

/// Closed C^2 planar curve, parameterized counterclockwise by an angle
/// theta in [0, 2*pi). Star curves carry a strictly positive radius given by
/// a trigonometric polynomial r(theta) = c0 + sum_k a_k cos(k theta) + b_k sin(k theta).
class Curve {
 public:
  static Curve circle(const Eigen::Vector2d& center, double radius);
  static Curve ellipse(const Eigen::Vector2d& center, double a, double b);
  /// coeffs = {c0, a1, b1, a2, b2, ...}
  static Curve star(const Eigen::Vector2d& center, std::vector<double> coeffs);

  CurveKind kind() const { return kind_; }
  const Eigen::Vector2d& center() const { return center_; }

  Eigen::Vector2d point(double theta) const;
  Eigen::Vector2d derivative(double theta) const;
  double speed(double theta) const { return derivative(theta).norm(); }

  /// Arc length from theta = 0 to theta, by adaptive quadrature of the speed
  /// (relative accuracy 1e-10).
  double arc_length(double theta) const;

  /// Total curve length.
  double length() const { return total_length_; }

  /// Radius along the ray at angle theta, measured from the center.
  double radius(double theta) const;

  std::string describe() const;

 private:
  Curve() = default;
  void finalize();

  CurveKind kind_ = CurveKind::Circle;
  Eigen::Vector2d center_ = Eigen::Vector2d::Zero();
  double a_ = 1.0;
  double b_ = 1.0;
  std::vector<double> coeffs_;
  double total_length_ = 0.0;
};

}  // namespace fracgibc
