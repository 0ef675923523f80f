#include "fracgibc/geometry.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "fracgibc/errors.hpp"

namespace fracgibc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Adaptive Simpson with absolute tolerance spread over the interval.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

Curve Curve::circle(const Eigen::Vector2d& center, double radius) {
  if (!(radius > 0.0)) throw InvalidInput("circle radius must be positive");
  Curve c;
  c.kind_ = CurveKind::Circle;
  c.center_ = center;
  c.a_ = radius;
  c.b_ = radius;
  c.finalize();
  return c;
}

Curve Curve::ellipse(const Eigen::Vector2d& center, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("ellipse semi-axes must be positive");
  Curve c;
  c.kind_ = CurveKind::Ellipse;
  c.center_ = center;
  c.a_ = a;
  c.b_ = b;
  c.finalize();
  return c;
}

Curve Curve::star(const Eigen::Vector2d& center, std::vector<double> coeffs) {
  if (coeffs.empty()) throw InvalidInput("star curve needs at least the constant radius term");
  Curve c;
  c.kind_ = CurveKind::Star;
  c.center_ = center;
  c.coeffs_ = std::move(coeffs);
  // Positivity by dense sampling; a nonpositive radius means the curve
  // degenerates or self-intersects.
  const int n_samples = 4096;
  for (int i = 0; i < n_samples; ++i) {
    const double theta = kTwoPi * i / n_samples;
    if (!(c.radius(theta) > 1e-12)) {
      throw InvalidInput("star radius function must be strictly positive");
    }
  }
  c.finalize();
  return c;
}

void Curve::finalize() {
  const auto f = [this](double t) { return speed(t); };
  // Scale-aware absolute tolerance gives ~1e-12 relative accuracy.
  const double rough = speed(0.0) * kTwoPi;
  total_length_ = integrate(f, 0.0, kTwoPi, 1e-12 * std::max(rough, 1.0));
}

double Curve::radius(double theta) const {
  switch (kind_) {
    case CurveKind::Circle:
      return a_;
    case CurveKind::Ellipse: {
      // Polar radius along the ray at angle theta (not the parameter angle).
      const double c = std::cos(theta), s = std::sin(theta);
      return a_ * b_ / std::sqrt(b_ * b_ * c * c + a_ * a_ * s * s);
    }
    case CurveKind::Star: {
      double r = coeffs_[0];
      const int n_modes = static_cast<int>((coeffs_.size() - 1 + 1) / 2);
      for (int k = 1; k <= n_modes; ++k) {
        const std::size_t ia = static_cast<std::size_t>(2 * k - 1);
        const std::size_t ib = static_cast<std::size_t>(2 * k);
        if (ia < coeffs_.size()) r += coeffs_[ia] * std::cos(k * theta);
        if (ib < coeffs_.size()) r += coeffs_[ib] * std::sin(k * theta);
      }
      return r;
    }
  }
  return 0.0;
}

Eigen::Vector2d Curve::point(double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  switch (kind_) {
    case CurveKind::Circle:
      return center_ + a_ * Eigen::Vector2d(c, s);
    case CurveKind::Ellipse:
      return center_ + Eigen::Vector2d(a_ * c, b_ * s);
    case CurveKind::Star:
      return center_ + radius(theta) * Eigen::Vector2d(c, s);
  }
  return center_;
}

Eigen::Vector2d Curve::derivative(double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  switch (kind_) {
    case CurveKind::Circle:
      return a_ * Eigen::Vector2d(-s, c);
    case CurveKind::Ellipse:
      return Eigen::Vector2d(-a_ * s, b_ * c);
    case CurveKind::Star: {
      double r = coeffs_[0];
      double dr = 0.0;
      const int n_modes = static_cast<int>(coeffs_.size() / 2);
      for (int k = 1; k <= n_modes; ++k) {
        const std::size_t ia = static_cast<std::size_t>(2 * k - 1);
        const std::size_t ib = static_cast<std::size_t>(2 * k);
        const double ck = std::cos(k * theta), sk = std::sin(k * theta);
        if (ia < coeffs_.size()) {
          r += coeffs_[ia] * ck;
          dr += -coeffs_[ia] * k * sk;
        }
        if (ib < coeffs_.size()) {
          r += coeffs_[ib] * sk;
          dr += coeffs_[ib] * k * ck;
        }
      }
      return Eigen::Vector2d(dr * c - r * s, dr * s + r * c);
    }
  }
  return Eigen::Vector2d::Zero();
}

double Curve::arc_length(double theta) const {
  if (theta <= 0.0) return 0.0;
  if (theta >= kTwoPi) return total_length_;
  const auto f = [this](double t) { return speed(t); };
  return integrate(f, 0.0, theta, 1e-12 * std::max(total_length_, 1.0));
}

std::string Curve::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case CurveKind::Circle:
      os << "circle r=" << a_;
      break;
    case CurveKind::Ellipse:
      os << "ellipse a=" << a_ << " b=" << b_;
      break;
    case CurveKind::Star:
      os << "star n_coeffs=" << coeffs_.size();
      break;
  }
  os << " center=(" << center_.x() << "," << center_.y() << ")";
  return os.str();
}

}  // namespace fracgibc
