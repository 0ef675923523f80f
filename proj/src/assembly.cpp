#include "fracgibc/assembly.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "fracgibc/errors.hpp"

namespace fracgibc {

namespace {

// 2-point Gauss on [0,1].
constexpr double kGaussA = 0.5 - 0.28867513459481288225;  // 0.5 - 1/(2 sqrt 3)
constexpr double kGaussB = 0.5 + 0.28867513459481288225;

struct TriGeometry {
  Eigen::Vector2d grad[3];  // gradients of the barycentric basis
  double area;
  Eigen::Vector2d mid[3];   // edge midpoints (quadrature points)
};

TriGeometry tri_geometry(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                         const Eigen::Vector2d& p2) {
  TriGeometry g;
  const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                     (p2.x() - p0.x()) * (p1.y() - p0.y());
  g.area = 0.5 * det;
  g.grad[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / det;
  g.grad[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / det;
  g.grad[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / det;
  g.mid[0] = 0.5 * (p0 + p1);
  g.mid[1] = 0.5 * (p1 + p2);
  g.mid[2] = 0.5 * (p2 + p0);
  return g;
}

// Barycentric coordinates of the three midpoint quadrature nodes.
constexpr double kMidBary[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};

void check_spd(const Eigen::Matrix2d& A, double a_min) {
  const double scale = std::max(A.norm(), 1.0);
  if ((A - A.transpose()).norm() > 1e-12 * scale) {
    throw InvalidInput("assembly: A not symmetric at a quadrature point");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(A);
  if (es.eigenvalues().minCoeff() < a_min * (1.0 - 1e-10) - 1e-14) {
    throw InvalidInput("assembly: A violates its certified ellipticity bound");
  }
}

}  // namespace

Eigen::Matrix3d element_stiffness(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                  const Eigen::Vector2d& p2) {
  const TriGeometry g = tri_geometry(p0, p1, p2);
  Eigen::Matrix3d k;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      k(a, b) = g.area * g.grad[a].dot(g.grad[b]);
    }
  }
  return k;
}

void assemble_volume(const Mesh& mesh, const CoefficientField& coeffs, SpMat& K_A,
                     SpMat& M_c, SpMat& M) {
  const int n = mesh.n_vertices();
  std::vector<Eigen::Triplet<double>> tk, tc, tm;
  tk.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
  tc.reserve(tk.capacity());
  tm.reserve(tk.capacity());

  for (const auto& tri : mesh.triangles()) {
    const auto& p0 = mesh.vertices()[static_cast<std::size_t>(tri[0])];
    const auto& p1 = mesh.vertices()[static_cast<std::size_t>(tri[1])];
    const auto& p2 = mesh.vertices()[static_cast<std::size_t>(tri[2])];
    const TriGeometry g = tri_geometry(p0, p1, p2);
    const double w = g.area / 3.0;

    Eigen::Matrix2d a_sum = Eigen::Matrix2d::Zero();
    double ke[3][3] = {};
    double me[3][3] = {};
    double ce[3][3] = {};
    for (int q = 0; q < 3; ++q) {
      const Eigen::Matrix2d a = coeffs.A(g.mid[q]);
      check_spd(a, coeffs.A_min);
      a_sum += w * a;
      const double cq = coeffs.c(g.mid[q]);
      if (cq < -1e-14) throw InvalidInput("assembly: c negative at a quadrature point");
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double phi = kMidBary[q][i] * kMidBary[q][j];
          me[i][j] += w * phi;
          ce[i][j] += w * cq * phi;
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        ke[i][j] = g.grad[i].dot(a_sum * g.grad[j]);
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        tk.emplace_back(tri[i], tri[j], ke[i][j]);
        tc.emplace_back(tri[i], tri[j], ce[i][j]);
        tm.emplace_back(tri[i], tri[j], me[i][j]);
      }
    }
  }
  K_A.resize(n, n);
  M_c.resize(n, n);
  M.resize(n, n);
  K_A.setFromTriplets(tk.begin(), tk.end());
  M_c.setFromTriplets(tc.begin(), tc.end());
  M.setFromTriplets(tm.begin(), tm.end());
}

namespace {

SpMat edge_form(const Mesh& mesh, BoundaryTag tag,
                const std::function<double(double)>& weight, bool tangential) {
  const auto& edges = mesh.boundary(tag);
  if (edges.empty()) throw InvalidInput("assembly: missing boundary tag");
  const int n = mesh.n_vertices();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(edges.size() * 4);
  for (const auto& e : edges) {
    const auto& pa = mesh.vertices()[static_cast<std::size_t>(e.a)];
    const auto& pb = mesh.vertices()[static_cast<std::size_t>(e.b)];
    const double len = (pb - pa).norm();
    const double s0 = e.sigma_a + kGaussA * (e.sigma_b - e.sigma_a);
    const double s1 = e.sigma_a + kGaussB * (e.sigma_b - e.sigma_a);
    const double w0 = weight(s0), w1 = weight(s1);
    if (tangential) {
      // P1 trace has constant tangential derivative (ub - ua)/len on the edge.
      const double coeff = 0.5 * (w0 + w1) / len;
      trip.emplace_back(e.a, e.a, coeff);
      trip.emplace_back(e.b, e.b, coeff);
      trip.emplace_back(e.a, e.b, -coeff);
      trip.emplace_back(e.b, e.a, -coeff);
    } else {
      // Basis values at the two Gauss points.
      const double la0 = 1.0 - kGaussA, lb0 = kGaussA;
      const double la1 = 1.0 - kGaussB, lb1 = kGaussB;
      const double half = 0.5 * len;
      trip.emplace_back(e.a, e.a, half * (w0 * la0 * la0 + w1 * la1 * la1));
      trip.emplace_back(e.b, e.b, half * (w0 * lb0 * lb0 + w1 * lb1 * lb1));
      const double off = half * (w0 * la0 * lb0 + w1 * la1 * lb1);
      trip.emplace_back(e.a, e.b, off);
      trip.emplace_back(e.b, e.a, off);
    }
  }
  SpMat m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

SpMat boundary_mass(const Mesh& mesh, BoundaryTag tag,
                    const std::function<double(double)>& weight) {
  return edge_form(mesh, tag, weight, false);
}

SpMat boundary_tangential_stiffness(const Mesh& mesh, BoundaryTag tag,
                                    const std::function<double(double)>& weight) {
  return edge_form(mesh, tag, weight, true);
}

void assemble_gibc(const Mesh& mesh, const ImpedanceField& imp, SpMat& B_eta,
                   SpMat& B_gamma) {
  const double ell0 = mesh.boundary_length(BoundaryTag::Gamma0);
  // Periodicity of the coefficients on the closed curve.
  if (std::abs(imp.eta(0.0) - imp.eta(ell0)) > 1e-9 * std::max(1.0, std::abs(imp.eta(0.0))) ||
      std::abs(imp.gamma(0.0) - imp.gamma(ell0)) > 1e-9 * std::max(1.0, std::abs(imp.gamma(0.0)))) {
    throw InvalidInput("assembly: impedance coefficients are not periodic on Gamma0");
  }
  // Positivity at quadrature points against the certified bounds.
  for (const auto& e : mesh.boundary(BoundaryTag::Gamma0)) {
    for (double t : {kGaussA, kGaussB}) {
      const double s = e.sigma_a + t * (e.sigma_b - e.sigma_a);
      if (imp.eta(s) < imp.eta_min * (1.0 - 1e-10)) {
        throw InvalidInput("assembly: eta violates its lower bound");
      }
      if (imp.gamma(s) < imp.gamma_min * (1.0 - 1e-10)) {
        throw InvalidInput("assembly: gamma violates its lower bound");
      }
    }
  }
  B_eta = boundary_tangential_stiffness(mesh, BoundaryTag::Gamma0, imp.eta);
  B_gamma = boundary_mass(mesh, BoundaryTag::Gamma0, imp.gamma);
}

Eigen::VectorXd assemble_flux_load(const Mesh& mesh,
                                   const std::function<double(double)>& f) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.n_vertices());
  for (const auto& e : mesh.boundary(BoundaryTag::Gamma1)) {
    const auto& pa = mesh.vertices()[static_cast<std::size_t>(e.a)];
    const auto& pb = mesh.vertices()[static_cast<std::size_t>(e.b)];
    const double half = 0.5 * (pb - pa).norm();
    for (double t : {kGaussA, kGaussB}) {
      const double s = e.sigma_a + t * (e.sigma_b - e.sigma_a);
      const double fv = f(s);
      load[e.a] += half * fv * (1.0 - t);
      load[e.b] += half * fv * t;
    }
  }
  return load;
}

FormSet assemble(const Mesh& mesh, const CoefficientField& coeffs,
                 const ImpedanceField& imp) {
  FormSet forms;
  forms.n = mesh.n_vertices();
  assemble_volume(mesh, coeffs, forms.K_A, forms.M_c, forms.M);
  assemble_gibc(mesh, imp, forms.B_eta, forms.B_gamma);

  SpMat mc_unused, m_unused;
  assemble_volume(mesh, CoefficientField::identity(), forms.K_I, mc_unused, m_unused);
  const auto one = [](double) { return 1.0; };
  forms.B_unit_tan = boundary_tangential_stiffness(mesh, BoundaryTag::Gamma0, one);
  forms.B_unit_mass = boundary_mass(mesh, BoundaryTag::Gamma0, one);
  forms.gamma1_mass = boundary_mass(mesh, BoundaryTag::Gamma1, one);

  forms.A_min = coeffs.A_min;
  forms.eta_min = imp.eta_min;
  forms.gamma_min = imp.gamma_min;
  return forms;
}

double FormSet::coercivity_lower_bound() const {
  return std::min({1.0, A_min, eta_min, gamma_min});
}

double quadratic_form(const SpMat& S, const VectorXc& v) {
  // v^H S v for real symmetric S: the cross terms cancel.
  const Eigen::VectorXd re = v.real();
  const Eigen::VectorXd im = v.imag();
  return re.dot(S * re) + im.dot(S * im);
}

double graph_norm(const FormSet& forms, const VectorXc& v) {
  const double vol = quadratic_form(forms.K_I, v) + quadratic_form(forms.M, v);
  const double bnd = quadratic_form(forms.B_unit_tan, v) + quadratic_form(forms.B_unit_mass, v);
  return std::sqrt(std::max(0.0, vol + bnd));
}

double graph_norm(const FormSet& forms, const Eigen::VectorXd& v) {
  const double vol = v.dot(forms.K_I * v) + v.dot(forms.M * v);
  const double bnd = v.dot(forms.B_unit_tan * v) + v.dot(forms.B_unit_mass * v);
  return std::sqrt(std::max(0.0, vol + bnd));
}

double gamma1_l2_norm(const FormSet& forms, const VectorXc& v) {
  return std::sqrt(std::max(0.0, quadratic_form(forms.gamma1_mass, v)));
}

Eigen::MatrixXd boundary_block(const Mesh& mesh, BoundaryTag tag, const SpMat& m) {
  const auto& nodes = mesh.boundary_nodes(tag);
  const int n = static_cast<int>(nodes.size());
  std::vector<int> pos(static_cast<std::size_t>(mesh.n_vertices()), -1);
  for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)])] = i;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      const int r = pos[static_cast<std::size_t>(it.row())];
      const int c = pos[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) block(r, c) = it.value();
    }
  }
  return block;
}

void write_coordinate_format(std::ostream& os, const SpMat& m) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      os << buf;
    }
  }
}

}  // namespace fracgibc
