#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <complex>
#include <memory>
#include <vector>

#include "fracgibc/assembly.hpp"
#include "fracgibc/mesh.hpp"
#include "fracgibc/rng.hpp"

namespace fracgibc {

using Complex = std::complex<double>;
using SpMatC = Eigen::SparseMatrix<Complex>;

/// Principal-branch fractional power s^alpha = |s|^alpha exp(i alpha Arg s).
Complex caputo_symbol(Complex s, double alpha);

/// Largest admissible |Arg s| for the frequency problem at this alpha:
/// cos(alpha Arg s) must stay positive with a small safety margin.
double admissible_arg_bound(double alpha);

/// Nodal solution of the frequency-domain problem at one complex frequency.
struct FrequencySolution {
  Complex s;
  double alpha = 0.5;
  VectorXc U;
  Complex G_value = 1.0;
  double residual = 0.0;  // relative to ||G l||
};

struct TraceSample {
  double sigma;
  Complex value;
};

/// System matrix T(s) = K_A + M_c + s^alpha M + B_eta + B_gamma
/// (complex symmetric, no conjugation).
SpMatC system_matrix(const FormSet& forms, Complex s, double alpha);

/// Factorization of T(s) reusable across right-hand sides.
class FrequencyOperator {
 public:
  FrequencyOperator(const FormSet& forms, Complex s, double alpha);

  /// Solve T(s) U = G(s) * load; verifies the residual to 1e-10 relative.
  FrequencySolution solve(const Eigen::VectorXd& load, Complex G_value) const;

  Complex s() const { return s_; }
  double alpha() const { return alpha_; }

 private:
  const FormSet* forms_;
  Complex s_;
  double alpha_;
  SpMatC matrix_;
  std::shared_ptr<Eigen::SparseLU<SpMatC>> lu_;
};

/// Boundary nodal values in arc-length order.
std::vector<TraceSample> trace(const Mesh& mesh, const VectorXc& U, BoundaryTag tag);

/// Weak conormal derivative on Gamma0 as a nodal functional: for each Gamma0
/// node j, the value of the residual functional
///   r_j = ((K_A + M_c + s^alpha M) U - G l)_j ,
/// which equals int_{Gamma0} (dnu_A U) phi_j dsigma in the discrete sense.
/// Returned in arc-length order.
VectorXc conormal_gamma0(const Mesh& mesh, const FormSet& forms,
                         const FrequencySolution& sol, const Eigen::VectorXd& load);

/// The same functional computed through the impedance identity
/// -((B_eta + B_gamma) U)_j; agrees with conormal_gamma0 to solver tolerance.
VectorXc conormal_gamma0_gibc(const Mesh& mesh, const FormSet& forms,
                              const FrequencySolution& sol);

/// Pointwise conormal values: functional divided by the Gamma0 lumped mass.
Eigen::VectorXcd conormal_values_from_functional(const Mesh& mesh, const VectorXc& functional);

/// Sampled verification of the coercivity lower bound
///   Re(e^{-i alpha Arg s} (a_s + b)(U, U))
///     >= cos(alpha pi/2) min(1, A_min, eta_min, gamma_min) min(1, Re(s)^alpha) ||U||^2
/// on random complex vectors. For sector points with Re(s) <= 0 the bound is
/// evaluated in its sector form with cos(alpha theta_max) and |s|^alpha.
struct CoercivityReport {
  Complex s;
  double alpha = 0.5;
  double bound_factor = 0.0;            // multiplier of ||U||^2 in the bound
  std::vector<double> margins;          // lhs - bound, one per sample
  double min_margin = 0.0;
  bool passed = false;
};

CoercivityReport coercivity_check(const FormSet& forms, Complex s, double alpha,
                                  int n_samples, Rng& rng);

}  // namespace fracgibc
