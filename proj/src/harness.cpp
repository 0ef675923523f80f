#include "fracgibc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "fracgibc/assembly.hpp"
#include "fracgibc/errors.hpp"
#include "fracgibc/freq_solver.hpp"
#include "fracgibc/laplace.hpp"
#include "fracgibc/mesh.hpp"
#include "fracgibc/ntd.hpp"
#include "fracgibc/time_solver.hpp"
#include "fracgibc/version.hpp"

namespace fracgibc {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string file_header(const StudyConfig& cfg) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(cfg.hash));
  return std::string("# fracgibc ") + kVersion + "\n# config_hash=" + buf + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open " + path.string() + " for writing");
  os << content;
}

void append_manifest(const std::filesystem::path& dir, const StudyConfig& cfg,
                     const std::string& command, std::uint64_t seed,
                     const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["command"] = command;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(cfg.hash));
  j["config_hash"] = buf;
  j["seed"] = seed;
  j["version"] = kVersion;
  j["outputs"] = outputs;
  std::ofstream os(dir / "manifest.jsonl", std::ios::app | std::ios::binary);
  os << j.dump() << "\n";
}

struct Problem {
  Mesh mesh;
  CoefficientField coeffs;
  ImpedanceField imp;
  FormSet forms;
  TemporalSignal signal;
};

Problem setup(const StudyConfig& cfg, double h) {
  Problem p{build_annulus_mesh(cfg.make_outer(), cfg.make_inner(), h),
            cfg.make_coefficients(),
            ImpedanceField::constant(1.0, 1.0),
            FormSet{},
            cfg.make_signal()};
  p.imp = cfg.make_impedance(p.mesh.boundary_length(BoundaryTag::Gamma0));
  p.forms = assemble(p.mesh, p.coeffs, p.imp);
  return p;
}

double require_real_s(const StudyConfig& cfg) {
  const auto s = cfg.s_list.front();
  if (s.imag() != 0.0 || !(s.real() > 0.0)) {
    throw InvalidInput("this command needs a positive real frequency s");
  }
  return s.real();
}

std::string trajectory_text(const StudyConfig& cfg, const TimeTrajectory& traj) {
  std::string out = file_header(cfg);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out += fmt_g(traj.times[i]);
    const auto& v = traj.values[i];
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      out += ' ';
      out += fmt_g(v[k]);
    }
    out += '\n';
  }
  return out;
}

void cmd_mesh(const StudyConfig& cfg, const std::filesystem::path& dir,
              std::uint64_t seed) {
  const Problem p = setup(cfg, cfg.h);
  std::ostringstream os;
  os << file_header(cfg);
  p.mesh.save(os);
  write_file(dir / "mesh.txt", os.str());
  append_manifest(dir, cfg, "mesh", seed, {"mesh.txt"});
}

void cmd_solve_freq(const StudyConfig& cfg, const std::filesystem::path& dir,
                    std::uint64_t seed) {
  const Problem p = setup(cfg, cfg.h);
  const FluxBasis basis(p.mesh.boundary_length(BoundaryTag::Gamma1));
  const Eigen::VectorXd load = assemble_flux_load(p.mesh, basis.element(cfg.flux_mode));
  std::vector<std::string> outputs;
  for (std::size_t k = 0; k < cfg.s_list.size(); ++k) {
    const auto s = cfg.s_list[k];
    FrequencyOperator op(p.forms, s, cfg.alpha);
    const FrequencySolution sol = op.solve(load, p.signal.transform(s));

    std::string field = file_header(cfg);
    for (int i = 0; i < p.mesh.n_vertices(); ++i) {
      const auto& v = p.mesh.vertices()[static_cast<std::size_t>(i)];
      field += fmt_g(v.x()) + " " + fmt_g(v.y()) + " " + fmt_g(sol.U[i].real()) + " " +
               fmt_g(sol.U[i].imag()) + "\n";
    }
    const std::string field_name = "solution_" + std::to_string(k) + ".txt";
    write_file(dir / field_name, field);

    std::string tr = file_header(cfg);
    for (const auto& sample : trace(p.mesh, sol.U, BoundaryTag::Gamma1)) {
      tr += fmt_g(sample.sigma) + " " + fmt_g(sample.value.real()) + " " +
            fmt_g(sample.value.imag()) + "\n";
    }
    const std::string trace_name = "trace_" + std::to_string(k) + ".txt";
    write_file(dir / trace_name, tr);
    outputs.push_back(field_name);
    outputs.push_back(trace_name);
  }
  append_manifest(dir, cfg, "solve-freq", seed, outputs);
}

void cmd_solve_time(const StudyConfig& cfg, const std::filesystem::path& dir,
                    std::uint64_t seed) {
  const Problem p = setup(cfg, cfg.h);
  const FluxBasis basis(p.mesh.boundary_length(BoundaryTag::Gamma1));
  const Eigen::VectorXd load = assemble_flux_load(p.mesh, basis.element(cfg.flux_mode));
  const int steps = std::max(1, static_cast<int>(std::llround(cfg.t_end / cfg.dt)));
  const TimeTrajectory traj =
      solve_time_domain(p.forms, p.signal, load, cfg.alpha, cfg.t_end / steps, steps);
  write_file(dir / "trajectory.txt", trajectory_text(cfg, traj));
  append_manifest(dir, cfg, "solve-time", seed, {"trajectory.txt"});
}

void cmd_invert_laplace(const StudyConfig& cfg, const std::filesystem::path& dir,
                        std::uint64_t seed) {
  const Problem p = setup(cfg, cfg.h);
  const FluxBasis basis(p.mesh.boundary_length(BoundaryTag::Gamma1));
  const Eigen::VectorXd load = assemble_flux_load(p.mesh, basis.element(cfg.flux_mode));
  ContourSpec contour;
  contour.node_count = cfg.contour_nodes;
  const auto evaluator = [&](std::complex<double> s) -> Eigen::VectorXcd {
    FrequencyOperator op(p.forms, s, cfg.alpha);
    return op.solve(load, p.signal.transform(s)).U;
  };
  const TimeTrajectory traj = invert(contour, cfg.alpha, evaluator, cfg.times);
  write_file(dir / "trajectory_contour.txt", trajectory_text(cfg, traj));
  append_manifest(dir, cfg, "invert-laplace", seed, {"trajectory_contour.txt"});
}

void cmd_ntd(const StudyConfig& cfg, const std::filesystem::path& dir,
             std::uint64_t seed) {
  const Problem p = setup(cfg, cfg.h);
  const double s = require_real_s(cfg);
  const NtdDataset data =
      synthesize_ntd(p.mesh, p.forms, cfg.flux_basis_size, s, cfg.alpha, p.signal);
  std::string csv = file_header(cfg);
  csv += "sigma";
  for (int j = 0; j < cfg.flux_basis_size; ++j) {
    csv += ",f" + std::to_string(j) + "_re,f" + std::to_string(j) + "_im";
  }
  csv += "\n";
  for (std::size_t i = 0; i < data.sigmas.size(); ++i) {
    csv += fmt_g(data.sigmas[i]);
    for (Eigen::Index j = 0; j < data.columns.cols(); ++j) {
      const auto v = data.columns(static_cast<Eigen::Index>(i), j);
      csv += "," + fmt_g(v.real()) + "," + fmt_g(v.imag());
    }
    csv += "\n";
  }
  write_file(dir / "ntd.csv", csv);
  append_manifest(dir, cfg, "ntd", seed, {"ntd.csv"});
}

void cmd_invert_impedance(const StudyConfig& cfg, const std::filesystem::path& dir,
                          std::uint64_t seed) {
  const Problem p = setup(cfg, cfg.h);
  const double s = require_real_s(cfg);
  CauchyDataGamma0 data =
      gather_cauchy_gamma0(p.mesh, p.forms, cfg.flux_basis_size, s, cfg.alpha, p.signal);
  if (cfg.noise > 0.0) {
    Rng rng(seed);
    data = add_multiplicative_noise(data, cfg.noise, rng);
  }
  InversionResult result;
  if (cfg.lambda_auto) {
    result = recover_impedance_discrepancy(p.mesh, data, cfg.m_eta, cfg.m_gamma,
                                           std::max(cfg.noise, 1e-12));
  } else {
    result = recover_impedance(p.mesh, data, cfg.m_eta, cfg.m_gamma, cfg.lambda);
  }

  const double ell0 = p.mesh.boundary_length(BoundaryTag::Gamma0);
  const double err_eta = rel_linf_error(result.eta_coeffs, ell0, p.imp.eta);
  const double err_gamma = rel_linf_error(result.gamma_coeffs, ell0, p.imp.gamma);

  std::string report = file_header(cfg);
  report += "s = " + fmt_g(s) + "\n";
  report += "n_flux = " + std::to_string(cfg.flux_basis_size) + "\n";
  report += "lambda = " + fmt_g(result.lambda) + "\n";
  report += "residual = " + fmt_g(result.residual) + "\n";
  report += std::string("rank_deficient = ") + (result.rank_deficient ? "1" : "0") + "\n";
  report += "eta_coeffs =";
  for (Eigen::Index i = 0; i < result.eta_coeffs.size(); ++i) {
    report += " " + fmt_g(result.eta_coeffs[i]);
  }
  report += "\ngamma_coeffs =";
  for (Eigen::Index i = 0; i < result.gamma_coeffs.size(); ++i) {
    report += " " + fmt_g(result.gamma_coeffs[i]);
  }
  report += "\nmin_eta = " + fmt_g(result.min_eta) + "\n";
  report += "min_gamma = " + fmt_g(result.min_gamma) + "\n";
  report += "rel_linf_eta = " + fmt_g(err_eta) + "\n";
  report += "rel_linf_gamma = " + fmt_g(err_gamma) + "\n";
  write_file(dir / "recovery_report.txt", report);
  append_manifest(dir, cfg, "invert-impedance", seed, {"recovery_report.txt"});
}

void cmd_study_coercivity(const StudyConfig& cfg, const std::filesystem::path& dir,
                          std::uint64_t seed) {
  const Problem p = setup(cfg, cfg.h);
  Rng rng(seed);
  std::string csv = file_header(cfg);
  csv += "alpha,s_re,s_im,sample,margin,bound_factor\n";
  for (const auto s : cfg.s_list) {
    const CoercivityReport report =
        coercivity_check(p.forms, s, cfg.alpha, cfg.coercivity_samples, rng);
    for (std::size_t k = 0; k < report.margins.size(); ++k) {
      csv += fmt_g(cfg.alpha) + "," + fmt_g(s.real()) + "," + fmt_g(s.imag()) + "," +
             std::to_string(k) + "," + fmt_g(report.margins[k]) + "," +
             fmt_g(report.bound_factor) + "\n";
    }
  }
  write_file(dir / "coercivity.csv", csv);
  append_manifest(dir, cfg, "study-coercivity", seed, {"coercivity.csv"});
}

void cmd_study_truncation(const StudyConfig& cfg, const std::filesystem::path& dir,
                          std::uint64_t seed) {
  const Problem p = setup(cfg, cfg.h);
  const double s = require_real_s(cfg);
  const FluxBasis basis(p.mesh.boundary_length(BoundaryTag::Gamma1));
  const Eigen::VectorXd load = assemble_flux_load(p.mesh, basis.element(cfg.flux_mode));

  const double t_max = 2.0 * cfg.horizons.back();
  const int steps = std::max(1, static_cast<int>(std::llround(t_max / cfg.dt)));
  const TimeTrajectory traj =
      solve_time_domain(p.forms, p.signal, load, cfg.alpha, t_max / steps, steps);
  const TimeTrajectory gamma1_traj = restrict_to_boundary(p.mesh, traj, BoundaryTag::Gamma1);

  FrequencyOperator op(p.forms, s, cfg.alpha);
  const FrequencySolution sol = op.solve(load, p.signal.transform(s));
  const auto& nodes = p.mesh.boundary_nodes(BoundaryTag::Gamma1);
  Eigen::VectorXcd reference(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    reference[static_cast<Eigen::Index>(i)] = sol.U[nodes[i]];
  }

  const Eigen::MatrixXd W = boundary_block(p.mesh, BoundaryTag::Gamma1, p.forms.gamma1_mass);
  const auto norm = [&](const Eigen::VectorXcd& v) {
    return std::sqrt(std::abs(v.dot(W.cast<std::complex<double>>() * v)));
  };
  const TruncationStudy study =
      truncation_decay_study(gamma1_traj, reference, s, cfg.horizons, norm);

  const int m = static_cast<int>(
      std::ceil(cfg.alpha + std::abs(1.0 - p.signal.decay_exponent())));
  const double c_cal = study.errors.front() /
                       (std::pow(study.horizons.front(), m) *
                        std::exp(-s * study.horizons.front()));
  std::string csv = file_header(cfg);
  csv += "T,error,bound\n";
  for (std::size_t i = 0; i < study.horizons.size(); ++i) {
    const double bound =
        c_cal * std::pow(study.horizons[i], m) * std::exp(-s * study.horizons[i]);
    csv += fmt_g(study.horizons[i]) + "," + fmt_g(study.errors[i]) + "," + fmt_g(bound) + "\n";
    if (study.errors[i] > bound * (1.0 + 1e-9)) {
      throw NumericalFailure("truncation study: error exceeds the calibrated bound");
    }
  }
  write_file(dir / "truncation.csv", csv);
  append_manifest(dir, cfg, "study-truncation", seed, {"truncation.csv"});
}

void cmd_study_convergence(const StudyConfig& cfg, const std::filesystem::path& dir,
                           std::uint64_t seed) {
  const double s_real = require_real_s(cfg);
  std::string csv = file_header(cfg);
  csv += "h,mesh_size,n_vertices,graph_norm,trace_mean\n";
  for (double h : cfg.h_list) {
    const Problem p = setup(cfg, h);
    const FluxBasis basis(p.mesh.boundary_length(BoundaryTag::Gamma1));
    const Eigen::VectorXd load = assemble_flux_load(p.mesh, basis.element(cfg.flux_mode));
    FrequencyOperator op(p.forms, s_real, cfg.alpha);
    const FrequencySolution sol = op.solve(load, p.signal.transform(s_real));

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(p.mesh.n_vertices());
    const double gamma1_len = ones.dot(p.forms.gamma1_mass * ones);
    const double trace_mean =
        (p.forms.gamma1_mass.cast<std::complex<double>>() * sol.U).sum().real() / gamma1_len;
    csv += fmt_g(h) + "," + fmt_g(p.mesh.mesh_size()) + "," +
           std::to_string(p.mesh.n_vertices()) + "," + fmt_g(graph_norm(p.forms, sol.U)) +
           "," + fmt_g(trace_mean) + "\n";
  }
  write_file(dir / "convergence.csv", csv);
  append_manifest(dir, cfg, "study-convergence", seed, {"convergence.csv"});
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "mesh",           "solve-freq",      "solve-time",
      "invert-laplace", "ntd",             "invert-impedance",
      "study-coercivity", "study-truncation", "study-convergence"};
  return names;
}

void run_command(const std::string& command, const StudyConfig& config,
                 const std::string& out_dir, std::uint64_t seed) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  if (command == "mesh") {
    cmd_mesh(config, dir, seed);
  } else if (command == "solve-freq") {
    cmd_solve_freq(config, dir, seed);
  } else if (command == "solve-time") {
    cmd_solve_time(config, dir, seed);
  } else if (command == "invert-laplace") {
    cmd_invert_laplace(config, dir, seed);
  } else if (command == "ntd") {
    cmd_ntd(config, dir, seed);
  } else if (command == "invert-impedance") {
    cmd_invert_impedance(config, dir, seed);
  } else if (command == "study-coercivity") {
    cmd_study_coercivity(config, dir, seed);
  } else if (command == "study-truncation") {
    cmd_study_truncation(config, dir, seed);
  } else if (command == "study-convergence") {
    cmd_study_convergence(config, dir, seed);
  } else {
    throw InvalidInput("unknown command '" + command + "'");
  }
}

}  // namespace fracgibc
