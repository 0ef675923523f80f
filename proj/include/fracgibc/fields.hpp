#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace fracgibc {

/// Value at sigma of the real trigonometric basis element with the given
/// index on a cycle of length ell: index 0 is the constant 1, odd indices
/// 2k-1 are cos(2 pi k sigma / ell), even indices 2k are sin(2 pi k sigma / ell).
double trig_basis_value(int index, double ell, double sigma);

/// Evaluate a coefficient vector in the trigonometric basis above.
double trig_eval(const std::vector<double>& coeffs, double ell, double sigma);

/// Derivative d/dsigma of trig_basis_value.
double trig_basis_derivative(int index, double ell, double sigma);

/// Symmetric elliptic coefficients of the spatial operator div(A grad) - c.
/// A must be symmetric positive definite with certified lower bound A_min,
/// c nonnegative; both are sampled at quadrature points during assembly.
struct CoefficientField {
  std::function<Eigen::Matrix2d(const Eigen::Vector2d&)> A;
  std::function<double(const Eigen::Vector2d&)> c;
  double A_min = 1.0;

  static CoefficientField identity();
  static CoefficientField constant(const Eigen::Matrix2d& A, double c);
  /// Isotropic field A(x) = (base + slope |x|^2) I with constant c.
  static CoefficientField iso_quadratic(double base, double slope, double c);
};

/// Impedance parameters eta, gamma as functions of arc length on Gamma0,
/// with certified positive lower bounds. Periodic with the Gamma0 length.
struct ImpedanceField {
  std::function<double(double)> eta;
  std::function<double(double)> gamma;
  double eta_min = 0.0;
  double gamma_min = 0.0;

  static ImpedanceField constant(double eta, double gamma);
  /// Trigonometric expansions on [0, ell0); lower bounds from dense sampling.
  static ImpedanceField trig(const std::vector<double>& eta_coeffs,
                             const std::vector<double>& gamma_coeffs, double ell0);
};

}  // namespace fracgibc
