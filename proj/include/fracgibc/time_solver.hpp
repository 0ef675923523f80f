#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fracgibc/assembly.hpp"
#include "fracgibc/laplace.hpp"
#include "fracgibc/signals.hpp"

namespace fracgibc {

/// L1 weights w_k = (k+1)^(1-alpha) - k^(1-alpha), k = 0..N-1.
std::vector<double> l1_weights(double alpha, int n);

/// L1 discretization of the Caputo derivative of order alpha on a uniform
/// grid with step dt: prefactor dt^-alpha / Gamma(2-alpha) and weights above.
struct L1Scheme {
  double alpha = 0.5;
  double dt = 0.0;
  int steps = 0;
  std::vector<double> weights;
  double prefactor = 0.0;

  L1Scheme(double alpha, double dt, int steps);
};

/// Time-domain solve of M d_t^alpha u + (K_A + M_c + B_eta + B_gamma) u = g(t) load
/// with u(0) = 0, by L1 stepping. History is kept in full (O(N^2) work).
TimeTrajectory solve_time_domain(const FormSet& forms, const TemporalSignal& g,
                                 const Eigen::VectorXd& load, double alpha, double dt,
                                 int steps);

/// Halve dt until two successive runs differ by less than tol (relative to
/// the trajectory peak) at the coarse output times. Step budget 2^20.
TimeTrajectory refine_until(const FormSet& forms, const TemporalSignal& g,
                            const Eigen::VectorXd& load, double alpha, double t_end,
                            double dt0, double tol);

/// Scalar variant d_t^alpha y + lambda y = g(t), y(0) = 0, same scheme.
std::vector<double> l1_solve_scalar(double alpha, double lambda, const TemporalSignal& g,
                                    double dt, int steps);

}  // namespace fracgibc
