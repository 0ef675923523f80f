#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m));
  const double frm = f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 52);
}

RadialProfile::RadialProfile(double R0, double R1, std::complex<double> kappa,
                             std::complex<double> neumann, std::complex<double> gamma0)
    : r0_(R0), r1_(R1), kappa_(kappa), neumann_(neumann), gamma0_(gamma0) {
  if (!(R1 > R0) || !(R0 > 0.0)) throw std::invalid_argument("radial oracle: bad radii");
  int n = 256;
  solve(n);
  std::vector<std::complex<double>> prev = u_;
  for (int round = 0; round < 8; ++round) {
    n *= 2;
    solve(n);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      diff = std::max(diff, std::abs(u_[2 * i] - prev[i]));
      scale = std::max(scale, std::abs(u_[2 * i]));
    }
    if (diff <= 1e-11 * std::max(scale, 1e-30)) return;
    prev = u_;
  }
  throw std::runtime_error("radial oracle: refinement did not converge");
}

void RadialProfile::solve(int n) {
  h_ = (r1_ - r0_) / n;
  u_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  v_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  // U'' = -U'/r + kappa U as a first-order system, RK4.
  std::complex<double> u = 1.0, v = gamma0_;
  u_[0] = u;
  v_[0] = v;
  const auto rate = [this](double r, std::complex<double> uu, std::complex<double> vv) {
    return std::pair{vv, -vv / r + kappa_ * uu};
  };
  for (int i = 0; i < n; ++i) {
    const double r = r0_ + i * h_;
    const auto [k1u, k1v] = rate(r, u, v);
    const auto [k2u, k2v] = rate(r + 0.5 * h_, u + 0.5 * h_ * k1u, v + 0.5 * h_ * k1v);
    const auto [k3u, k3v] = rate(r + 0.5 * h_, u + 0.5 * h_ * k2u, v + 0.5 * h_ * k2v);
    const auto [k4u, k4v] = rate(r + h_, u + h_ * k3u, v + h_ * k3v);
    u += h_ / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h_ / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    u_[static_cast<std::size_t>(i) + 1] = u;
    v_[static_cast<std::size_t>(i) + 1] = v;
  }
  // Scale so that U'(R1) matches the Neumann datum.
  const std::complex<double> scale = neumann_ / v_.back();
  for (auto& x : u_) x *= scale;
  for (auto& x : v_) x *= scale;
}

std::complex<double> RadialProfile::value(double r) const {
  const double clamped = std::min(std::max(r, r0_), r1_);
  const double x = (clamped - r0_) / h_;
  const auto i = static_cast<std::size_t>(
      std::min<double>(x, static_cast<double>(u_.size() - 2)));
  const double t = x - static_cast<double>(i);
  // Cubic Hermite using the stored derivative.
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * u_[i] + (t3 - 2.0 * t2 + t) * h_ * v_[i] +
         (-2.0 * t3 + 3.0 * t2) * u_[i + 1] + (t3 - t2) * h_ * v_[i + 1];
}

std::complex<double> RadialProfile::derivative(double r) const {
  const double clamped = std::min(std::max(r, r0_), r1_);
  const double x = (clamped - r0_) / h_;
  const auto i = static_cast<std::size_t>(
      std::min<double>(x, static_cast<double>(v_.size() - 2)));
  const double t = x - static_cast<double>(i);
  return (1.0 - t) * v_[i] + t * v_[i + 1];
}

H1Error radial_h1_error(const fracgibc::Mesh& mesh, const Eigen::VectorXcd& u_fem,
                        const RadialProfile& profile, const Eigen::Vector2d& center) {
  double err2 = 0.0, ref2 = 0.0;
  for (const auto& tri : mesh.triangles()) {
    const Eigen::Vector2d p0 = mesh.vertices()[static_cast<std::size_t>(tri[0])];
    const Eigen::Vector2d p1 = mesh.vertices()[static_cast<std::size_t>(tri[1])];
    const Eigen::Vector2d p2 = mesh.vertices()[static_cast<std::size_t>(tri[2])];
    const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                       (p2.x() - p0.x()) * (p1.y() - p0.y());
    const double area = 0.5 * det;
    const Eigen::Vector2d grads[3] = {
        Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / det,
        Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / det,
        Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / det};
    Eigen::Vector2cd grad_fem = Eigen::Vector2cd::Zero();
    for (int k = 0; k < 3; ++k) grad_fem += u_fem[tri[static_cast<std::size_t>(k)]] * grads[k];

    const Eigen::Vector2d mids[3] = {0.5 * (p0 + p1), 0.5 * (p1 + p2), 0.5 * (p2 + p0)};
    const double bary[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
    for (int q = 0; q < 3; ++q) {
      const Eigen::Vector2d x = mids[q] - center;
      const double r = x.norm();
      const std::complex<double> u_ref = profile.value(r);
      const Eigen::Vector2d rhat = x / r;
      const std::complex<double> du = profile.derivative(r);
      std::complex<double> u_h = 0.0;
      for (int k = 0; k < 3; ++k) u_h += bary[q][k] * u_fem[tri[static_cast<std::size_t>(k)]];
      const double w = area / 3.0;
      const std::complex<double> gx = grad_fem.x() - du * rhat.x();
      const std::complex<double> gy = grad_fem.y() - du * rhat.y();
      err2 += w * (std::norm(u_h - u_ref) + std::norm(gx) + std::norm(gy));
      ref2 += w * (std::norm(u_ref) + std::norm(du));
    }
  }
  H1Error e;
  e.absolute = std::sqrt(err2);
  e.reference = std::sqrt(ref2);
  return e;
}

double graph_norm_direct(const fracgibc::Mesh& mesh, const Eigen::VectorXcd& v) {
  // Volume: exact P1 integrals, no assembled matrices.
  double total = 0.0;
  for (const auto& tri : mesh.triangles()) {
    const Eigen::Vector2d p0 = mesh.vertices()[static_cast<std::size_t>(tri[0])];
    const Eigen::Vector2d p1 = mesh.vertices()[static_cast<std::size_t>(tri[1])];
    const Eigen::Vector2d p2 = mesh.vertices()[static_cast<std::size_t>(tri[2])];
    const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                       (p2.x() - p0.x()) * (p1.y() - p0.y());
    const double area = 0.5 * det;
    const Eigen::Vector2d grads[3] = {
        Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / det,
        Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / det,
        Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / det};
    Eigen::Vector2cd g = Eigen::Vector2cd::Zero();
    for (int k = 0; k < 3; ++k) g += v[tri[static_cast<std::size_t>(k)]] * grads[k];
    total += area * (std::norm(g.x()) + std::norm(g.y()));
    // Exact P1 mass: area/12 * [2 1 1; 1 2 1; 1 1 2].
    const std::complex<double> a = v[tri[0]], b = v[tri[1]], c = v[tri[2]];
    total += area / 12.0 *
             (2.0 * (std::norm(a) + std::norm(b) + std::norm(c)) +
              2.0 * ((a * std::conj(b)).real() + (b * std::conj(c)).real() +
                     (c * std::conj(a)).real()));
  }
  // Gamma0 trace terms: exact edgewise integrals of the P1 trace.
  for (const auto& e : mesh.boundary(fracgibc::BoundaryTag::Gamma0)) {
    const Eigen::Vector2d pa = mesh.vertices()[static_cast<std::size_t>(e.a)];
    const Eigen::Vector2d pb = mesh.vertices()[static_cast<std::size_t>(e.b)];
    const double len = (pb - pa).norm();
    const std::complex<double> ua = v[e.a], ub = v[e.b];
    total += std::norm(ub - ua) / len;  // tangential derivative term
    total += len / 6.0 * (2.0 * std::norm(ua) + 2.0 * std::norm(ub) +
                          2.0 * (ua * std::conj(ub)).real());
  }
  return std::sqrt(total);
}

}  // namespace oracles
