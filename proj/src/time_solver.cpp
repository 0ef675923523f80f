#include "fracgibc/time_solver.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

#include "fracgibc/errors.hpp"

namespace fracgibc {

std::vector<double> l1_weights(double alpha, int n) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw InvalidInput("l1_weights: alpha must lie in (0,1)");
  if (n < 1) throw InvalidInput("l1_weights: need at least one weight");
  std::vector<double> w(static_cast<std::size_t>(n));
  const double e = 1.0 - alpha;
  for (int k = 0; k < n; ++k) {
    w[static_cast<std::size_t>(k)] = std::pow(k + 1.0, e) - std::pow(static_cast<double>(k), e);
  }
  return w;
}

L1Scheme::L1Scheme(double alpha_in, double dt_in, int steps_in)
    : alpha(alpha_in), dt(dt_in), steps(steps_in) {
  if (!(dt > 0.0)) throw InvalidInput("L1Scheme: dt must be positive");
  weights = l1_weights(alpha, steps);
  prefactor = std::pow(dt, -alpha) / std::tgamma(2.0 - alpha);
}

namespace {

// d_t^alpha u(t_n) ~ prefactor * [w_0 u^n - sum_{k=1}^{n-1} (w_{k-1} - w_k) u^{n-k} - w_{n-1} u^0]
// With u^0 = 0 the last term drops; the history accumulates into the rhs.
template <typename Solve>
TimeTrajectory l1_march(const L1Scheme& scheme, const TemporalSignal& g,
                        const Eigen::VectorXd& load, Solve&& solve_step) {
  TimeTrajectory traj;
  traj.provenance = TimeTrajectory::Provenance::L1Oracle;
  traj.times.reserve(static_cast<std::size_t>(scheme.steps) + 1);
  traj.values.reserve(traj.times.capacity());
  traj.times.push_back(0.0);
  traj.values.push_back(Eigen::VectorXd::Zero(load.size()));

  for (int n = 1; n <= scheme.steps; ++n) {
    const double t_n = n * scheme.dt;
    Eigen::VectorXd history = Eigen::VectorXd::Zero(load.size());
    for (int k = 1; k < n; ++k) {
      const double coeff = scheme.weights[static_cast<std::size_t>(k - 1)] -
                           scheme.weights[static_cast<std::size_t>(k)];
      history += coeff * traj.values[static_cast<std::size_t>(n - k)];
    }
    traj.times.push_back(t_n);
    traj.values.push_back(solve_step(g.eval(t_n), history));
  }
  return traj;
}

}  // namespace

TimeTrajectory solve_time_domain(const FormSet& forms, const TemporalSignal& g,
                                 const Eigen::VectorXd& load, double alpha, double dt,
                                 int steps) {
  const L1Scheme scheme(alpha, dt, steps);
  const SpMat stiffness = forms.K_A + forms.M_c + forms.B_eta + forms.B_gamma;
  SpMat step_matrix = stiffness + scheme.prefactor * forms.M;
  Eigen::SimplicialLDLT<SpMat> solver(step_matrix);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("time solve: step matrix factorization failed");
  }
  return l1_march(scheme, g, load,
                  [&](double g_n, const Eigen::VectorXd& history) -> Eigen::VectorXd {
                    const Eigen::VectorXd rhs =
                        g_n * load + scheme.prefactor * (forms.M * history);
                    return solver.solve(rhs);
                  });
}

TimeTrajectory refine_until(const FormSet& forms, const TemporalSignal& g,
                            const Eigen::VectorXd& load, double alpha, double t_end,
                            double dt0, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("refine_until: tol must be positive");
  if (!(t_end > 0.0)) throw InvalidInput("refine_until: t_end must be positive");

  int steps = std::max(1, static_cast<int>(std::llround(t_end / dt0)));
  double dt = t_end / steps;
  TimeTrajectory coarse = solve_time_domain(forms, g, load, alpha, dt, steps);
  if (!std::isfinite(tol)) return coarse;

  while (true) {
    if (2LL * steps > (1LL << 20)) {
      throw NumericalFailure("refine_until: step budget exceeded");
    }
    steps *= 2;
    dt = t_end / steps;
    TimeTrajectory fine = solve_time_domain(forms, g, load, alpha, dt, steps);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < coarse.times.size(); ++i) {
      diff = std::max(diff,
                      (fine.values[2 * i] - coarse.values[i]).cwiseAbs().maxCoeff());
      scale = std::max(scale, fine.values[2 * i].cwiseAbs().maxCoeff());
    }
    if (diff < tol * std::max(scale, 1e-300)) return fine;
    coarse = std::move(fine);
  }
}

std::vector<double> l1_solve_scalar(double alpha, double lambda, const TemporalSignal& g,
                                    double dt, int steps) {
  const L1Scheme scheme(alpha, dt, steps);
  std::vector<double> y(static_cast<std::size_t>(steps) + 1, 0.0);
  for (int n = 1; n <= steps; ++n) {
    double history = 0.0;
    for (int k = 1; k < n; ++k) {
      const double coeff = scheme.weights[static_cast<std::size_t>(k - 1)] -
                           scheme.weights[static_cast<std::size_t>(k)];
      history += coeff * y[static_cast<std::size_t>(n - k)];
    }
    y[static_cast<std::size_t>(n)] =
        (g.eval(n * dt) + scheme.prefactor * history) / (scheme.prefactor + lambda);
  }
  return y;
}

}  // namespace fracgibc
