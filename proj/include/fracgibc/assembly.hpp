#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <functional>
#include <iosfwd>

#include "fracgibc/fields.hpp"
#include "fracgibc/mesh.hpp"

namespace fracgibc {

using SpMat = Eigen::SparseMatrix<double>;
using VectorXc = Eigen::VectorXcd;

/// Assembled P1 forms of the variational problem: volume stiffness/mass
/// blocks, the Gamma0 impedance blocks, and unit-coefficient copies used for
/// the H^1(D1, Gamma0) graph norm and trace norms. Immutable after assembly
/// and safe to share read-only.
struct FormSet {
  SpMat K_A;       // A-weighted stiffness
  SpMat M_c;       // c-weighted mass
  SpMat M;         // mass
  SpMat B_eta;     // Gamma0 tangential stiffness, eta weight
  SpMat B_gamma;   // Gamma0 mass, gamma weight

  // Unit-coefficient copies (A=I, eta=gamma=1) for norms.
  SpMat K_I;
  SpMat B_unit_tan;
  SpMat B_unit_mass;
  SpMat gamma1_mass;  // unit-weight mass on Gamma1 for trace norms

  int n = 0;  // number of mesh vertices

  double coercivity_lower_bound() const;  // min(1, A_min, eta_min, gamma_min)
  double A_min = 1.0;
  double eta_min = 1.0;
  double gamma_min = 1.0;
};

/// Volume forms: K_A, M_c, M. Rejects A that fails the SPD sampling check.
void assemble_volume(const Mesh& mesh, const CoefficientField& coeffs, SpMat& K_A,
                     SpMat& M_c, SpMat& M);

/// Gamma0 impedance forms B_eta (tangential stiffness) and B_gamma (mass).
void assemble_gibc(const Mesh& mesh, const ImpedanceField& imp, SpMat& B_eta,
                   SpMat& B_gamma);

/// Load vector with entries int_{Gamma1} f phi_j dsigma; f is given as a
/// function of arc length on Gamma1.
Eigen::VectorXd assemble_flux_load(const Mesh& mesh,
                                   const std::function<double(double)>& f);

/// Weighted mass matrix on one boundary cycle (unit weight by default).
SpMat boundary_mass(const Mesh& mesh, BoundaryTag tag,
                    const std::function<double(double)>& weight);

/// Weighted tangential stiffness on one boundary cycle.
SpMat boundary_tangential_stiffness(const Mesh& mesh, BoundaryTag tag,
                                    const std::function<double(double)>& weight);

/// Everything needed by the solvers in one pass.
FormSet assemble(const Mesh& mesh, const CoefficientField& coeffs,
                 const ImpedanceField& imp);

/// Graph norm of H^1(D1, Gamma0): sqrt(V^H (K_I + M) V + V^H (B_1^tan + B_1^mass) V).
double graph_norm(const FormSet& forms, const VectorXc& v);
double graph_norm(const FormSet& forms, const Eigen::VectorXd& v);

/// L2(Gamma1) norm of a nodal trace via the Gamma1 mass matrix.
double gamma1_l2_norm(const FormSet& forms, const VectorXc& v);

/// Real quadratic form v^H S v (S real symmetric).
double quadratic_form(const SpMat& S, const VectorXc& v);

/// Dense restriction of a matrix to the nodes of one boundary cycle, rows and
/// columns in arc-length order.
Eigen::MatrixXd boundary_block(const Mesh& mesh, BoundaryTag tag, const SpMat& m);

/// Coordinate text export: "row col value" per stored entry.
void write_coordinate_format(std::ostream& os, const SpMat& m);

/// P1 element stiffness for constant unit diffusivity on one triangle.
Eigen::Matrix3d element_stiffness(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                  const Eigen::Vector2d& p2);

}  // namespace fracgibc
