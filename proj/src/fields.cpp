#include "fracgibc/fields.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fracgibc/errors.hpp"

namespace fracgibc {

double trig_basis_value(int index, double ell, double sigma) {
  if (index == 0) return 1.0;
  const int k = (index + 1) / 2;
  const double arg = 2.0 * std::numbers::pi * k * sigma / ell;
  return (index % 2 == 1) ? std::cos(arg) : std::sin(arg);
}

double trig_basis_derivative(int index, double ell, double sigma) {
  if (index == 0) return 0.0;
  const int k = (index + 1) / 2;
  const double w = 2.0 * std::numbers::pi * k / ell;
  const double arg = w * sigma;
  return (index % 2 == 1) ? -w * std::sin(arg) : w * std::cos(arg);
}

double trig_eval(const std::vector<double>& coeffs, double ell, double sigma) {
  double v = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    v += coeffs[i] * trig_basis_value(static_cast<int>(i), ell, sigma);
  }
  return v;
}

CoefficientField CoefficientField::identity() {
  return constant(Eigen::Matrix2d::Identity(), 0.0);
}

CoefficientField CoefficientField::constant(const Eigen::Matrix2d& A, double c) {
  if ((A - A.transpose()).norm() > 1e-14 * A.norm()) {
    throw InvalidInput("coefficient matrix A must be symmetric");
  }
  if (c < 0.0) throw InvalidInput("coefficient c must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(A);
  const double a_min = es.eigenvalues().minCoeff();
  if (!(a_min > 0.0)) throw InvalidInput("coefficient matrix A must be positive definite");
  CoefficientField f;
  f.A = [A](const Eigen::Vector2d&) { return A; };
  f.c = [c](const Eigen::Vector2d&) { return c; };
  f.A_min = a_min;
  return f;
}

CoefficientField CoefficientField::iso_quadratic(double base, double slope, double c) {
  if (!(base > 0.0) || slope < 0.0 || c < 0.0) {
    throw InvalidInput("iso_quadratic: base must be positive, slope and c nonnegative");
  }
  CoefficientField f;
  f.A = [base, slope](const Eigen::Vector2d& x) {
    return Eigen::Matrix2d((base + slope * x.squaredNorm()) * Eigen::Matrix2d::Identity());
  };
  f.c = [c](const Eigen::Vector2d&) { return c; };
  f.A_min = base;
  return f;
}

ImpedanceField ImpedanceField::constant(double eta, double gamma) {
  if (!(eta > 0.0) || !(gamma > 0.0)) {
    throw InvalidInput("impedance parameters must have positive lower bounds");
  }
  ImpedanceField f;
  f.eta = [eta](double) { return eta; };
  f.gamma = [gamma](double) { return gamma; };
  f.eta_min = eta;
  f.gamma_min = gamma;
  return f;
}

ImpedanceField ImpedanceField::trig(const std::vector<double>& eta_coeffs,
                                    const std::vector<double>& gamma_coeffs, double ell0) {
  if (!(ell0 > 0.0)) throw InvalidInput("impedance: cycle length must be positive");
  auto sampled_min = [ell0](const std::vector<double>& coeffs) {
    double m = std::numeric_limits<double>::infinity();
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
      m = std::min(m, trig_eval(coeffs, ell0, ell0 * i / n));
    }
    return m;
  };
  const double eta_min = sampled_min(eta_coeffs);
  const double gamma_min = sampled_min(gamma_coeffs);
  if (!(eta_min > 0.0)) throw InvalidInput("impedance: eta must be strictly positive");
  if (!(gamma_min > 0.0)) throw InvalidInput("impedance: gamma must be strictly positive");
  ImpedanceField f;
  f.eta = [eta_coeffs, ell0](double s) { return trig_eval(eta_coeffs, ell0, s); };
  f.gamma = [gamma_coeffs, ell0](double s) { return trig_eval(gamma_coeffs, ell0, s); };
  f.eta_min = eta_min;
  f.gamma_min = gamma_min;
  return f;
}

}  // namespace fracgibc
