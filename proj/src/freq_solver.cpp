#include "fracgibc/freq_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracgibc/errors.hpp"

namespace fracgibc {

namespace {
constexpr double kPi = std::numbers::pi;
}

Complex caputo_symbol(Complex s, double alpha) {
  if (s == Complex(0.0, 0.0)) throw InvalidInput("caputo_symbol: s must be nonzero");
  const double r = std::abs(s);
  const double theta = std::arg(s);
  return std::polar(std::pow(r, alpha), alpha * theta);
}

double admissible_arg_bound(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw InvalidInput("alpha must lie in (0,1)");
  }
  return std::min(kPi - 1e-9, kPi / (2.0 * alpha) - 0.01);
}

SpMatC system_matrix(const FormSet& forms, Complex s, double alpha) {
  if (std::abs(std::arg(s)) > admissible_arg_bound(alpha)) {
    throw InvalidInput("system_matrix: s outside the admissible sector");
  }
  const Complex sa = caputo_symbol(s, alpha);
  SpMat real_part = forms.K_A + forms.M_c + forms.B_eta + forms.B_gamma;
  SpMatC m = real_part.cast<Complex>();
  m += sa * forms.M.cast<Complex>();
  return m;
}

FrequencyOperator::FrequencyOperator(const FormSet& forms, Complex s, double alpha)
    : forms_(&forms), s_(s), alpha_(alpha), matrix_(system_matrix(forms, s, alpha)) {
  lu_ = std::make_shared<Eigen::SparseLU<SpMatC>>();
  lu_->compute(matrix_);
  if (lu_->info() != Eigen::Success) {
    throw NumericalFailure("frequency solve: factorization failed (coercivity violated?)");
  }
}

FrequencySolution FrequencyOperator::solve(const Eigen::VectorXd& load,
                                           Complex G_value) const {
  FrequencySolution sol;
  sol.s = s_;
  sol.alpha = alpha_;
  sol.G_value = G_value;
  const VectorXc rhs = G_value * load.cast<Complex>();
  sol.U = lu_->solve(rhs);
  if (lu_->info() != Eigen::Success) {
    throw NumericalFailure("frequency solve: back substitution failed");
  }
  const double rhs_norm = rhs.norm();
  const double res = (matrix_ * sol.U - rhs).norm();
  sol.residual = rhs_norm > 0.0 ? res / rhs_norm : res;
  if (rhs_norm > 0.0 && sol.residual > 1e-10) {
    throw NumericalFailure("frequency solve: residual above tolerance");
  }
  return sol;
}

std::vector<TraceSample> trace(const Mesh& mesh, const VectorXc& U, BoundaryTag tag) {
  const auto& nodes = mesh.boundary_nodes(tag);
  const auto& sigmas = mesh.boundary_sigmas(tag);
  std::vector<TraceSample> out;
  out.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out.push_back({sigmas[i], U[nodes[i]]});
  }
  return out;
}

VectorXc conormal_gamma0(const Mesh& mesh, const FormSet& forms,
                         const FrequencySolution& sol, const Eigen::VectorXd& load) {
  const Complex sa = caputo_symbol(sol.s, sol.alpha);
  const SpMat vol = forms.K_A + forms.M_c;
  VectorXc r = vol.cast<Complex>() * sol.U + sa * (forms.M.cast<Complex>() * sol.U) -
               sol.G_value * load.cast<Complex>();
  const auto& nodes = mesh.boundary_nodes(BoundaryTag::Gamma0);
  VectorXc out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[static_cast<Eigen::Index>(i)] = r[nodes[i]];
  return out;
}

VectorXc conormal_gamma0_gibc(const Mesh& mesh, const FormSet& forms,
                              const FrequencySolution& sol) {
  const SpMat b = forms.B_eta + forms.B_gamma;
  VectorXc r = -(b.cast<Complex>() * sol.U);
  const auto& nodes = mesh.boundary_nodes(BoundaryTag::Gamma0);
  VectorXc out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[static_cast<Eigen::Index>(i)] = r[nodes[i]];
  return out;
}

Eigen::VectorXcd conormal_values_from_functional(const Mesh& mesh, const VectorXc& functional) {
  const auto& edges = mesh.boundary(BoundaryTag::Gamma0);
  const auto& nodes = mesh.boundary_nodes(BoundaryTag::Gamma0);
  std::vector<double> lumped(nodes.size(), 0.0);
  // Map node id -> position in sigma order.
  std::vector<int> pos(static_cast<std::size_t>(mesh.n_vertices()), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) pos[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
  for (const auto& e : edges) {
    const double len = (mesh.vertices()[static_cast<std::size_t>(e.b)] -
                        mesh.vertices()[static_cast<std::size_t>(e.a)])
                           .norm();
    lumped[static_cast<std::size_t>(pos[static_cast<std::size_t>(e.a)])] += 0.5 * len;
    lumped[static_cast<std::size_t>(pos[static_cast<std::size_t>(e.b)])] += 0.5 * len;
  }
  VectorXc out(functional.size());
  for (Eigen::Index i = 0; i < functional.size(); ++i) {
    out[i] = functional[i] / lumped[static_cast<std::size_t>(i)];
  }
  return out;
}

CoercivityReport coercivity_check(const FormSet& forms, Complex s, double alpha,
                                  int n_samples, Rng& rng) {
  if (n_samples < 1) throw InvalidInput("coercivity_check: need at least one sample");
  const double theta = std::arg(s);
  if (std::abs(theta) > admissible_arg_bound(alpha)) {
    throw InvalidInput("coercivity_check: s outside the admissible sector");
  }

  CoercivityReport report;
  report.s = s;
  report.alpha = alpha;

  const double lower = forms.coercivity_lower_bound();
  double bound_factor;
  if (s.real() > 0.0) {
    // Half-plane bound from the coercivity statements.
    bound_factor = std::cos(alpha * kPi / 2.0) * lower *
                   std::min(1.0, std::pow(s.real(), alpha));
  } else {
    // Sector extension: replace cos(alpha pi/2) by cos(alpha |Arg s|) and
    // Re(s)^alpha by |s|^alpha.
    bound_factor = std::cos(alpha * std::abs(theta)) * lower *
                   std::min(1.0, std::pow(std::abs(s), alpha));
  }
  report.bound_factor = bound_factor;

  const Complex sa = caputo_symbol(s, alpha);
  const Complex rot = std::polar(1.0, -alpha * theta);
  report.margins.reserve(static_cast<std::size_t>(n_samples));
  double min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    VectorXc u(forms.n);
    for (int i = 0; i < forms.n; ++i) u[i] = rng.complex_normal();
    // (a_s + b)(U,U) with real symmetric blocks.
    const double q_real = quadratic_form(forms.K_A, u) + quadratic_form(forms.M_c, u) +
                          quadratic_form(forms.B_eta, u) + quadratic_form(forms.B_gamma, u);
    const double q_mass = quadratic_form(forms.M, u);
    const Complex form_value = Complex(q_real, 0.0) + sa * q_mass;
    const double lhs = (rot * form_value).real();
    const double gn = graph_norm(forms, u);
    const double margin = lhs - bound_factor * gn * gn;
    report.margins.push_back(margin);
    min_margin = std::min(min_margin, margin);
  }
  report.min_margin = min_margin;
  report.passed = min_margin >= -1e-10;
  if (!report.passed) {
    throw NumericalFailure("coercivity_check: sampled margin negative (assembly bug?)");
  }
  return report;
}

}  // namespace fracgibc
