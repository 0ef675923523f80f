#include "fracgibc/ntd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracgibc/errors.hpp"
#include "fracgibc/fields.hpp"

namespace fracgibc {

double FluxBasis::eval(int j, double sigma) const {
  return trig_basis_value(j, ell1, sigma);
}

std::function<double(double)> FluxBasis::element(int j) const {
  const double ell = ell1;
  return [j, ell](double sigma) { return trig_basis_value(j, ell, sigma); };
}

namespace {

// Forward solves for the first n flux elements at one frequency.
std::vector<FrequencySolution> solve_flux_family(const Mesh& mesh, const FormSet& forms,
                                                 int n_flux, std::complex<double> s,
                                                 double alpha, const TemporalSignal& g,
                                                 std::vector<Eigen::VectorXd>* loads_out) {
  if (n_flux < 1) throw InvalidInput("ntd: need at least one flux element");
  const FluxBasis basis(mesh.boundary_length(BoundaryTag::Gamma1));
  const std::complex<double> G = g.transform(s);
  FrequencyOperator op(forms, s, alpha);
  std::vector<FrequencySolution> sols;
  sols.reserve(static_cast<std::size_t>(n_flux));
  for (int j = 0; j < n_flux; ++j) {
    Eigen::VectorXd load = assemble_flux_load(mesh, basis.element(j));
    sols.push_back(op.solve(load, G));
    if (loads_out) loads_out->push_back(std::move(load));
  }
  return sols;
}

}  // namespace

NtdDataset synthesize_ntd(const Mesh& mesh, const FormSet& forms, int n_flux, double s,
                          double alpha, const TemporalSignal& g) {
  if (!(s > 0.0)) throw InvalidInput("synthesize_ntd: s must be a positive real number");
  if (std::abs(g.transform(s)) < 1e-14) {
    throw InvalidInput("synthesize_ntd: G(s) vanishes at this frequency");
  }
  const auto sols = solve_flux_family(mesh, forms, n_flux, s, alpha, g, nullptr);

  NtdDataset data;
  data.s = s;
  data.sigmas = mesh.boundary_sigmas(BoundaryTag::Gamma1);
  const auto& nodes = mesh.boundary_nodes(BoundaryTag::Gamma1);
  data.columns.resize(static_cast<Eigen::Index>(nodes.size()), n_flux);
  for (int j = 0; j < n_flux; ++j) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      data.columns(static_cast<Eigen::Index>(i), j) = sols[static_cast<std::size_t>(j)].U[nodes[i]];
    }
  }
  return data;
}

TimeTrajectory restrict_to_boundary(const Mesh& mesh, const TimeTrajectory& traj,
                                    BoundaryTag tag) {
  const auto& nodes = mesh.boundary_nodes(tag);
  TimeTrajectory out;
  out.provenance = traj.provenance;
  out.times = traj.times;
  out.values.reserve(traj.values.size());
  for (const auto& v : traj.values) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) r[static_cast<Eigen::Index>(i)] = v[nodes[i]];
    out.values.push_back(std::move(r));
  }
  return out;
}

NtdDataset truncated_ntd(const Mesh& mesh,
                         const std::vector<TimeTrajectory>& trace_trajectories, double T,
                         std::complex<double> s) {
  if (T < 1.0) throw InvalidInput("truncated_ntd: horizon T must be >= 1");
  if (trace_trajectories.empty()) throw InvalidInput("truncated_ntd: no trajectories");

  NtdDataset data;
  data.s = s;
  data.horizon = T;
  data.sigmas = mesh.boundary_sigmas(BoundaryTag::Gamma1);
  const Eigen::Index rows = trace_trajectories.front().dim();
  data.columns.resize(rows, static_cast<Eigen::Index>(trace_trajectories.size()));
  for (std::size_t j = 0; j < trace_trajectories.size(); ++j) {
    const auto pt = partial_transform(trace_trajectories[j], T, s);
    data.columns.col(static_cast<Eigen::Index>(j)) = pt.value;
  }
  return data;
}

CauchyDataGamma0 gather_cauchy_gamma0(const Mesh& mesh, const FormSet& forms, int n_flux,
                                      double s, double alpha, const TemporalSignal& g) {
  if (!(s > 0.0)) throw InvalidInput("gather_cauchy_gamma0: s must be a positive real number");
  std::vector<Eigen::VectorXd> loads;
  const auto sols = solve_flux_family(mesh, forms, n_flux, s, alpha, g, &loads);

  CauchyDataGamma0 data;
  data.s = s;
  data.alpha = alpha;
  data.sigmas = mesh.boundary_sigmas(BoundaryTag::Gamma0);
  const auto& nodes = mesh.boundary_nodes(BoundaryTag::Gamma0);
  data.traces.resize(static_cast<Eigen::Index>(nodes.size()), n_flux);
  data.conormals.resize(static_cast<Eigen::Index>(nodes.size()), n_flux);
  for (int j = 0; j < n_flux; ++j) {
    const auto& sol = sols[static_cast<std::size_t>(j)];
    const VectorXc cn = conormal_gamma0(mesh, forms, sol, loads[static_cast<std::size_t>(j)]);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      data.traces(static_cast<Eigen::Index>(i), j) = sol.U[nodes[i]].real();
      data.conormals(static_cast<Eigen::Index>(i), j) = cn[static_cast<Eigen::Index>(i)].real();
    }
  }
  return data;
}

CauchyDataGamma0 add_multiplicative_noise(const CauchyDataGamma0& data, double level,
                                          Rng& rng) {
  CauchyDataGamma0 noisy = data;
  for (Eigen::Index j = 0; j < noisy.traces.cols(); ++j) {
    for (Eigen::Index i = 0; i < noisy.traces.rows(); ++i) {
      noisy.traces(i, j) *= 1.0 + level * rng.normal();
      noisy.conormals(i, j) *= 1.0 + level * rng.normal();
    }
  }
  return noisy;
}

namespace {

struct RecoverySystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

// One equation per (flux, test function): the weak impedance identity
//   int phi dnu_A U_i + eta U_i' phi' + gamma U_i phi dsigma = 0
// is linear in the trigonometric coefficients of eta and gamma. Tests are
// the P1 hats (test_modes = 0) or P1 interpolants of trigonometric modes.
RecoverySystem build_recovery_system(const Mesh& mesh, const CauchyDataGamma0& data,
                                     int m_eta, int m_gamma, int test_modes) {
  const auto& nodes = mesh.boundary_nodes(BoundaryTag::Gamma0);
  const auto& sigmas = mesh.boundary_sigmas(BoundaryTag::Gamma0);
  const double ell0 = mesh.boundary_length(BoundaryTag::Gamma0);
  const int n_nodes = static_cast<int>(nodes.size());
  const int n_flux = static_cast<int>(data.traces.cols());
  if (data.traces.rows() != n_nodes) {
    throw InvalidInput("recover_impedance: data does not match the mesh");
  }

  std::vector<SpMat> eta_mats, gamma_mats;
  for (int p = 0; p < m_eta; ++p) {
    eta_mats.push_back(boundary_tangential_stiffness(
        mesh, BoundaryTag::Gamma0,
        [p, ell0](double sg) { return trig_basis_value(p, ell0, sg); }));
  }
  for (int q = 0; q < m_gamma; ++q) {
    gamma_mats.push_back(boundary_mass(
        mesh, BoundaryTag::Gamma0,
        [q, ell0](double sg) { return trig_basis_value(q, ell0, sg); }));
  }

  // Test vectors on the Gamma0 nodes, in sigma order.
  const int n_tests = test_modes > 0 ? test_modes : n_nodes;
  Eigen::MatrixXd tests;
  if (test_modes > 0) {
    tests.resize(n_nodes, n_tests);
    for (int l = 0; l < n_tests; ++l) {
      for (int k = 0; k < n_nodes; ++k) {
        tests(k, l) = trig_basis_value(l, ell0, sigmas[static_cast<std::size_t>(k)]);
      }
    }
  }

  RecoverySystem sys;
  sys.A.resize(static_cast<Eigen::Index>(n_flux) * n_tests, m_eta + m_gamma);
  sys.b.resize(sys.A.rows());
  Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh.n_vertices());
  Eigen::VectorXd restricted(n_nodes);
  const auto emit = [&](int flux, int col, const Eigen::VectorXd& w) {
    for (int k = 0; k < n_nodes; ++k) restricted[k] = w[nodes[static_cast<std::size_t>(k)]];
    if (test_modes > 0) {
      sys.A.block(static_cast<Eigen::Index>(flux) * n_tests, col, n_tests, 1) =
          tests.transpose() * restricted;
    } else {
      sys.A.block(static_cast<Eigen::Index>(flux) * n_tests, col, n_tests, 1) = restricted;
    }
  };
  for (int i = 0; i < n_flux; ++i) {
    for (int k = 0; k < n_nodes; ++k) full[nodes[static_cast<std::size_t>(k)]] = data.traces(k, i);
    for (int p = 0; p < m_eta; ++p) emit(i, p, eta_mats[static_cast<std::size_t>(p)] * full);
    for (int q = 0; q < m_gamma; ++q) emit(i, m_eta + q, gamma_mats[static_cast<std::size_t>(q)] * full);
    if (test_modes > 0) {
      sys.b.segment(static_cast<Eigen::Index>(i) * n_tests, n_tests) =
          -(tests.transpose() * data.conormals.col(i));
    } else {
      sys.b.segment(static_cast<Eigen::Index>(i) * n_tests, n_tests) = -data.conormals.col(i);
    }
    for (int k = 0; k < n_nodes; ++k) full[nodes[static_cast<std::size_t>(k)]] = 0.0;
  }
  return sys;
}

InversionResult finish_result(const Mesh& mesh, const RecoverySystem& sys,
                              const Eigen::VectorXd& x, int m_eta, int m_gamma,
                              double lambda, bool rank_deficient) {
  InversionResult result;
  result.eta_coeffs = x.head(m_eta);
  result.gamma_coeffs = x.tail(m_gamma);
  result.lambda = lambda;
  result.residual = (sys.A * x - sys.b).norm();
  result.rank_deficient = rank_deficient;
  const double ell0 = mesh.boundary_length(BoundaryTag::Gamma0);
  double min_eta = std::numeric_limits<double>::infinity();
  double min_gamma = min_eta;
  std::vector<double> eta_c(result.eta_coeffs.data(), result.eta_coeffs.data() + m_eta);
  std::vector<double> gamma_c(result.gamma_coeffs.data(), result.gamma_coeffs.data() + m_gamma);
  for (int i = 0; i < 1024; ++i) {
    const double sg = ell0 * i / 1024;
    min_eta = std::min(min_eta, trig_eval(eta_c, ell0, sg));
    min_gamma = std::min(min_gamma, trig_eval(gamma_c, ell0, sg));
  }
  result.min_eta = min_eta;
  result.min_gamma = min_gamma;
  return result;
}

}  // namespace

InversionResult recover_impedance(const Mesh& mesh, const CauchyDataGamma0& data,
                                  int m_eta, int m_gamma, double lambda,
                                  int test_modes) {
  if (m_eta < 1 || m_gamma < 1) throw InvalidInput("recover_impedance: basis sizes must be >= 1");
  if (lambda < 0.0) throw InvalidInput("recover_impedance: lambda must be >= 0");
  const RecoverySystem sys = build_recovery_system(mesh, data, m_eta, m_gamma, test_modes);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const bool deficient = sv(sv.size() - 1) < 1e-10 * sv(0);
  Eigen::VectorXd x;
  if (lambda == 0.0) {
    x = svd.solve(sys.b);
  } else {
    const Eigen::VectorXd utb = svd.matrixU().transpose() * sys.b;
    Eigen::VectorXd filtered(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      filtered[i] = sv[i] * utb[i] / (sv[i] * sv[i] + lambda);
    }
    x = svd.matrixV() * filtered;
  }
  return finish_result(mesh, sys, x, m_eta, m_gamma, lambda, lambda == 0.0 && deficient);
}

InversionResult recover_impedance_discrepancy(const Mesh& mesh,
                                              const CauchyDataGamma0& data, int m_eta,
                                              int m_gamma, double noise_level,
                                              int test_modes) {
  if (!(noise_level > 0.0)) throw InvalidInput("discrepancy: noise level must be positive");
  if (test_modes < 0) {
    // Default smoothing basis: a few modes beyond the unknown band, small
    // enough to average the data noise.
    test_modes = std::min(m_eta + m_gamma + 3, static_cast<int>(data.traces.rows()));
  }
  const RecoverySystem sys = build_recovery_system(mesh, data, m_eta, m_gamma, test_modes);
  const double delta = noise_level * sys.b.norm();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const Eigen::VectorXd utb = svd.matrixU().transpose() * sys.b;

  const auto solve_for = [&](double lambda) {
    Eigen::VectorXd filtered(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      filtered[i] = sv[i] * utb[i] / (sv[i] * sv[i] + lambda);
    }
    return Eigen::VectorXd(svd.matrixV() * filtered);
  };
  const auto residual_of = [&](double lambda) {
    return (sys.A * solve_for(lambda) - sys.b).norm();
  };

  const double target = 1.05 * delta;
  const double s_max2 = sv(0) * sv(0);
  double lo = 1e-14 * s_max2, hi = 1e4 * s_max2;
  double lambda;
  if (residual_of(lo) >= target) {
    lambda = 0.0;  // already at or above the discrepancy level
  } else if (residual_of(hi) <= target) {
    lambda = hi;
  } else {
    for (int it = 0; it < 80; ++it) {
      const double mid = std::sqrt(lo * hi);
      (residual_of(mid) < target ? lo : hi) = mid;
    }
    lambda = std::sqrt(lo * hi);
  }
  const Eigen::VectorXd x = solve_for(lambda);
  return finish_result(mesh, sys, x, m_eta, m_gamma, lambda, false);
}

double rel_linf_error(const Eigen::VectorXd& coeffs, double ell,
                      const std::function<double(double)>& truth) {
  std::vector<double> c(coeffs.data(), coeffs.data() + coeffs.size());
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < 2048; ++i) {
    const double sg = ell * i / 2048;
    const double t = truth(sg);
    err = std::max(err, std::abs(trig_eval(c, ell, sg) - t));
    scale = std::max(scale, std::abs(t));
  }
  return err / std::max(scale, 1e-300);
}

double injectivity_probe(const Mesh& mesh, const CoefficientField& coeffs,
                         const ImpedanceField& imp1, const ImpedanceField& imp2,
                         int n_flux, double s, double alpha, const TemporalSignal& g) {
  const FormSet forms1 = assemble(mesh, coeffs, imp1);
  const FormSet forms2 = assemble(mesh, coeffs, imp2);
  const NtdDataset d1 = synthesize_ntd(mesh, forms1, n_flux, s, alpha, g);
  const NtdDataset d2 = synthesize_ntd(mesh, forms2, n_flux, s, alpha, g);

  double max_diff = 0.0;
  for (Eigen::Index j = 0; j < d1.columns.cols(); ++j) {
    VectorXc diff_full = VectorXc::Zero(mesh.n_vertices());
    const auto& nodes = mesh.boundary_nodes(BoundaryTag::Gamma1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      diff_full[nodes[i]] = d1.columns(static_cast<Eigen::Index>(i), j) -
                            d2.columns(static_cast<Eigen::Index>(i), j);
    }
    max_diff = std::max(max_diff, gamma1_l2_norm(forms1, diff_full));
  }
  return max_diff;
}

DensityProbe density_probe(const Mesh& mesh, const FormSet& forms,
                           const std::function<double(double)>& target,
                           const std::vector<int>& sizes, double s, double alpha,
                           const TemporalSignal& g) {
  if (sizes.empty()) throw InvalidInput("density_probe: no subspace sizes");
  const int n_max = *std::max_element(sizes.begin(), sizes.end());
  const auto sols = solve_flux_family(mesh, forms, n_max, s, alpha, g, nullptr);

  const auto& nodes = mesh.boundary_nodes(BoundaryTag::Gamma0);
  const int n_nodes = static_cast<int>(nodes.size());

  // Dense Gamma0 mass block for the L2(Gamma0) inner product.
  const Eigen::MatrixXd W = boundary_block(mesh, BoundaryTag::Gamma0, forms.B_unit_mass);

  Eigen::MatrixXd traces(n_nodes, n_max);
  for (int j = 0; j < n_max; ++j) {
    for (int i = 0; i < n_nodes; ++i) {
      traces(i, j) = sols[static_cast<std::size_t>(j)].U[nodes[static_cast<std::size_t>(i)]].real();
    }
  }
  Eigen::VectorXd tau(n_nodes);
  const auto& sigmas = mesh.boundary_sigmas(BoundaryTag::Gamma0);
  for (int i = 0; i < n_nodes; ++i) tau[i] = target(sigmas[static_cast<std::size_t>(i)]);

  DensityProbe probe;
  probe.sizes = sizes;
  for (int n : sizes) {
    if (n < 1 || n > n_max) throw InvalidInput("density_probe: bad subspace size");
    const Eigen::MatrixXd T = traces.leftCols(n);
    const Eigen::MatrixXd G = T.transpose() * W * T;
    const Eigen::VectorXd rhs = T.transpose() * W * tau;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const double lam_max = es.eigenvalues().maxCoeff();
    const double threshold = 1e-12 * std::max(lam_max, 0.0);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    int rank = 0;
    for (int k = 0; k < n; ++k) {
      const double lam = es.eigenvalues()[k];
      if (lam > threshold) {
        c += es.eigenvectors().col(k) * (es.eigenvectors().col(k).dot(rhs) / lam);
        ++rank;
      }
    }
    const Eigen::VectorXd r = tau - T * c;
    probe.residuals.push_back(std::sqrt(std::max(0.0, r.dot(W * r))));
    probe.effective_ranks.push_back(rank);
  }
  return probe;
}

}  // namespace fracgibc
