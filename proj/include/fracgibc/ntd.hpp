#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "fracgibc/assembly.hpp"
#include "fracgibc/freq_solver.hpp"
#include "fracgibc/laplace.hpp"
#include "fracgibc/mesh.hpp"
#include "fracgibc/rng.hpp"
#include "fracgibc/signals.hpp"

namespace fracgibc {

/// Trigonometric flux family on Gamma1 arc length: element 0 is the constant,
/// elements 2k-1 / 2k are cos / sin of frequency k. Pairwise L2-orthogonal.
struct FluxBasis {
  double ell1 = 0.0;
  explicit FluxBasis(double gamma1_length) : ell1(gamma1_length) {}
  double eval(int j, double sigma) const;
  std::function<double(double)> element(int j) const;
};

/// Columns of the (Laplace-domain) Neumann-to-Dirichlet map: Gamma1 traces of
/// the frequency solutions, one column per flux element.
struct NtdDataset {
  std::complex<double> s;
  std::vector<double> sigmas;     // Gamma1 node coordinates
  Eigen::MatrixXcd columns;       // rows = Gamma1 nodes, cols = fluxes
  std::optional<double> horizon;  // truncation time T when applicable
};

NtdDataset synthesize_ntd(const Mesh& mesh, const FormSet& forms, int n_flux, double s,
                          double alpha, const TemporalSignal& g);

/// Laplace transform of the time-windowed NtD data: per-flux Gamma1 trace
/// trajectories on [0, T_max], integrated up to T.
NtdDataset truncated_ntd(const Mesh& mesh,
                         const std::vector<TimeTrajectory>& trace_trajectories, double T,
                         std::complex<double> s);

/// Gamma1 trace restriction of a full-field trajectory.
TimeTrajectory restrict_to_boundary(const Mesh& mesh, const TimeTrajectory& traj,
                                    BoundaryTag tag);

/// Per-flux Cauchy pairs on Gamma0 at a fixed real frequency: nodal traces
/// and weak conormal functionals.
struct CauchyDataGamma0 {
  double s = 1.0;
  double alpha = 0.5;
  std::vector<double> sigmas;  // Gamma0 node coordinates
  Eigen::MatrixXd traces;      // rows = Gamma0 nodes, cols = fluxes
  Eigen::MatrixXd conormals;   // residual functional values, same layout
};

CauchyDataGamma0 gather_cauchy_gamma0(const Mesh& mesh, const FormSet& forms, int n_flux,
                                      double s, double alpha, const TemporalSignal& g);

CauchyDataGamma0 add_multiplicative_noise(const CauchyDataGamma0& data, double level,
                                          Rng& rng);

/// Recovered impedance coefficients in the trigonometric basis on [0, ell0).
struct InversionResult {
  Eigen::VectorXd eta_coeffs;
  Eigen::VectorXd gamma_coeffs;
  double lambda = 0.0;
  double residual = 0.0;
  double min_eta = 0.0;        // sampled minimum of the reconstruction
  double min_gamma = 0.0;
  bool rank_deficient = false; // flagged when lambda = 0 and the system is near-singular
};

/// Least-squares recovery of (eta, gamma) from the Gamma0 Cauchy pairs: one
/// equation per (flux, test function) enforcing the weak impedance identity,
/// Tikhonov-regularized by lambda >= 0.
///
/// test_modes = 0 tests against every P1 hat on Gamma0 (one row per node).
/// test_modes = M > 0 tests against the P1 interpolants of the first M
/// trigonometric modes instead; these rows are linear combinations of the hat
/// rows, so noise-free consistency is preserved while measurement noise is
/// averaged out instead of being differentiated at grid scale.
InversionResult recover_impedance(const Mesh& mesh, const CauchyDataGamma0& data,
                                  int m_eta, int m_gamma, double lambda,
                                  int test_modes = 0);

/// Discrepancy-principle choice of lambda for a known relative noise level
/// (e.g. 0.01 for 1% multiplicative noise). test_modes < 0 selects the
/// default smoothing basis.
InversionResult recover_impedance_discrepancy(const Mesh& mesh,
                                              const CauchyDataGamma0& data, int m_eta,
                                              int m_gamma, double noise_level,
                                              int test_modes = -1);

/// Relative max-norm error of a trig-coefficient reconstruction against a
/// reference function of arc length, over a dense sigma sample.
double rel_linf_error(const Eigen::VectorXd& coeffs, double ell,
                      const std::function<double(double)>& truth);

/// Max over fluxes of the L2(Gamma1) distance between the NtD columns of two
/// impedance pairs (same mesh, coefficients, frequency, forcing).
double injectivity_probe(const Mesh& mesh, const CoefficientField& coeffs,
                         const ImpedanceField& imp1, const ImpedanceField& imp2,
                         int n_flux, double s, double alpha, const TemporalSignal& g);

/// L2(Gamma0) residuals of projecting a target onto the span of the Gamma0
/// traces of the first n flux solutions, for each n in sizes.
struct DensityProbe {
  std::vector<int> sizes;
  std::vector<double> residuals;
  std::vector<int> effective_ranks;
};

DensityProbe density_probe(const Mesh& mesh, const FormSet& forms,
                           const std::function<double(double)>& target,
                           const std::vector<int>& sizes, double s, double alpha,
                           const TemporalSignal& g);

}  // namespace fracgibc
