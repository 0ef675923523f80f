#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracgibc/assembly.hpp"
#include "fracgibc/config.hpp"
#include "fracgibc/fields.hpp"
#include "fracgibc/freq_solver.hpp"
#include "fracgibc/geometry.hpp"
#include "fracgibc/laplace.hpp"
#include "fracgibc/mesh.hpp"
#include "fracgibc/ntd.hpp"
#include "fracgibc/signals.hpp"
#include "fracgibc/time_solver.hpp"
#include "fracgibc/version.hpp"

namespace py = pybind11;
using namespace fracgibc;

namespace {

/// Mesh + assembled forms for one impedance problem; the unit entry point
/// for the python-facing operations.
struct Problem {
  Mesh mesh;
  CoefficientField coeffs;
  ImpedanceField imp;
  FormSet forms;

  Problem(const Curve& outer, const Curve& inner, double h,
          const std::vector<double>& eta_coeffs, const std::vector<double>& gamma_coeffs,
          double c)
      : mesh(build_annulus_mesh(outer, inner, h)),
        coeffs(CoefficientField::constant(Eigen::Matrix2d::Identity(), c)),
        imp(ImpedanceField::trig(eta_coeffs, gamma_coeffs,
                                 mesh.boundary_length(BoundaryTag::Gamma0))),
        forms(assemble(mesh, coeffs, imp)) {}

  Eigen::VectorXd flux_load(int mode) const {
    const FluxBasis basis(mesh.boundary_length(BoundaryTag::Gamma1));
    return assemble_flux_load(mesh, basis.element(mode));
  }

  py::dict solve_freq(std::complex<double> s, double alpha, int flux_mode, int q,
                      double beta) const {
    const TemporalSignal g = TemporalSignal::monomial_exp(q, beta);
    FrequencyOperator op(forms, s, alpha);
    const FrequencySolution sol = op.solve(flux_load(flux_mode), g.transform(s));
    py::dict out;
    out["graph_norm"] = graph_norm(forms, sol.U);
    out["residual"] = sol.residual;
    std::vector<double> sigmas;
    std::vector<std::complex<double>> values;
    for (const auto& t : trace(mesh, sol.U, BoundaryTag::Gamma1)) {
      sigmas.push_back(t.sigma);
      values.push_back(t.value);
    }
    out["trace_sigma"] = sigmas;
    out["trace_values"] = values;
    return out;
  }

  py::dict solve_time(double alpha, double dt, int steps, int flux_mode, int q,
                      double beta) const {
    const TemporalSignal g = TemporalSignal::monomial_exp(q, beta);
    const TimeTrajectory traj = solve_time_domain(forms, g, flux_load(flux_mode), alpha, dt, steps);
    py::dict out;
    out["times"] = traj.times;
    std::vector<double> norms;
    for (const auto& v : traj.values) norms.push_back(graph_norm(forms, v));
    out["graph_norms"] = norms;
    const TimeTrajectory tr = restrict_to_boundary(mesh, traj, BoundaryTag::Gamma1);
    out["gamma1_trace"] = tr.values;
    return out;
  }

  py::dict invert_laplace(double alpha, const std::vector<double>& times, int flux_mode,
                          int q, double beta, int nodes) const {
    const TemporalSignal g = TemporalSignal::monomial_exp(q, beta);
    const Eigen::VectorXd load = flux_load(flux_mode);
    ContourSpec contour;
    contour.node_count = nodes;
    const auto evaluator = [&](std::complex<double> s) -> Eigen::VectorXcd {
      FrequencyOperator op(forms, s, alpha);
      return op.solve(load, g.transform(s)).U;
    };
    const TimeTrajectory traj = invert(contour, alpha, evaluator, times);
    py::dict out;
    out["times"] = traj.times;
    std::vector<double> norms;
    for (const auto& v : traj.values) norms.push_back(graph_norm(forms, v));
    out["graph_norms"] = norms;
    return out;
  }

  Eigen::MatrixXcd ntd(int n_flux, double s, double alpha, int q, double beta) const {
    const TemporalSignal g = TemporalSignal::monomial_exp(q, beta);
    return synthesize_ntd(mesh, forms, n_flux, s, alpha, g).columns;
  }

  py::dict recover(int n_flux, double s, double alpha, int q, double beta, int m_eta,
                   int m_gamma, double lambda, double noise, std::uint64_t seed) const {
    const TemporalSignal g = TemporalSignal::monomial_exp(q, beta);
    CauchyDataGamma0 data = gather_cauchy_gamma0(mesh, forms, n_flux, s, alpha, g);
    if (noise > 0.0) {
      Rng rng(seed);
      data = add_multiplicative_noise(data, noise, rng);
    }
    InversionResult result;
    if (lambda < 0.0) {
      result = recover_impedance_discrepancy(mesh, data, m_eta, m_gamma,
                                             std::max(noise, 1e-12));
    } else {
      result = recover_impedance(mesh, data, m_eta, m_gamma, lambda);
    }
    py::dict out;
    out["eta_coeffs"] = result.eta_coeffs;
    out["gamma_coeffs"] = result.gamma_coeffs;
    out["lambda"] = result.lambda;
    out["residual"] = result.residual;
    out["rank_deficient"] = result.rank_deficient;
    return out;
  }

  py::dict density(const std::vector<int>& sizes, double s, double alpha, int q,
                   double beta) const {
    const TemporalSignal g = TemporalSignal::monomial_exp(q, beta);
    const DensityProbe probe =
        density_probe(mesh, forms, [](double) { return 1.0; }, sizes, s, alpha, g);
    py::dict out;
    out["sizes"] = probe.sizes;
    out["residuals"] = probe.residuals;
    return out;
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "FEM solver for time-fractional diffusion with a generalized impedance "
            "subregion, with impedance recovery from Neumann-to-Dirichlet data";

  py::class_<Curve>(m, "Curve")
      .def_static("circle",
                  [](double cx, double cy, double r) {
                    return Curve::circle(Eigen::Vector2d(cx, cy), r);
                  },
                  py::arg("cx"), py::arg("cy"), py::arg("r"))
      .def_static("ellipse",
                  [](double cx, double cy, double a, double b) {
                    return Curve::ellipse(Eigen::Vector2d(cx, cy), a, b);
                  },
                  py::arg("cx"), py::arg("cy"), py::arg("a"), py::arg("b"))
      .def_static("star",
                  [](double cx, double cy, const std::vector<double>& coeffs) {
                    return Curve::star(Eigen::Vector2d(cx, cy), coeffs);
                  },
                  py::arg("cx"), py::arg("cy"), py::arg("coeffs"))
      .def("length", &Curve::length)
      .def("arc_length", &Curve::arc_length)
      .def("__repr__", &Curve::describe);

  py::class_<Mesh>(m, "Mesh")
      .def("n_vertices", &Mesh::n_vertices)
      .def("n_triangles", &Mesh::n_triangles)
      .def("area", &Mesh::area)
      .def("mesh_size", &Mesh::mesh_size)
      .def("boundary_length",
           [](const Mesh& mesh, int tag) {
             return mesh.boundary_length(tag == 0 ? BoundaryTag::Gamma0 : BoundaryTag::Gamma1);
           })
      .def("save", &Mesh::save_file)
      .def_static("load", &Mesh::load_file);

  m.def("build_annulus_mesh", &build_annulus_mesh, py::arg("outer"), py::arg("inner"),
        py::arg("h"));
  m.def("separation", &separation);
  m.def("caputo_symbol", &caputo_symbol, py::arg("s"), py::arg("alpha"));
  m.def("l1_weights", &l1_weights, py::arg("alpha"), py::arg("n"));
  m.def("l1_solve_scalar",
        [](double alpha, double lambda, int q, double beta, double dt, int steps) {
          return l1_solve_scalar(alpha, lambda, TemporalSignal::monomial_exp(q, beta), dt,
                                 steps);
        },
        py::arg("alpha"), py::arg("lambda"), py::arg("q"), py::arg("beta"), py::arg("dt"),
        py::arg("steps"));
  m.def("signal_transform",
        [](int q, double beta, std::complex<double> s) {
          return TemporalSignal::monomial_exp(q, beta).transform(s);
        },
        py::arg("q"), py::arg("beta"), py::arg("s"));

  py::class_<Problem>(m, "Problem")
      .def(py::init<const Curve&, const Curve&, double, const std::vector<double>&,
                    const std::vector<double>&, double>(),
           py::arg("outer"), py::arg("inner"), py::arg("h"), py::arg("eta_coeffs"),
           py::arg("gamma_coeffs"), py::arg("c") = 0.0)
      .def_property_readonly("n_vertices", [](const Problem& p) { return p.mesh.n_vertices(); })
      .def_property_readonly("area", [](const Problem& p) { return p.mesh.area(); })
      .def("solve_freq", &Problem::solve_freq, py::arg("s"), py::arg("alpha") = 0.5,
           py::arg("flux_mode") = 0, py::arg("q") = 1, py::arg("beta") = 1.0)
      .def("solve_time", &Problem::solve_time, py::arg("alpha") = 0.5, py::arg("dt") = 0.01,
           py::arg("steps") = 100, py::arg("flux_mode") = 0, py::arg("q") = 1,
           py::arg("beta") = 1.0)
      .def("invert_laplace", &Problem::invert_laplace, py::arg("alpha"), py::arg("times"),
           py::arg("flux_mode") = 0, py::arg("q") = 1, py::arg("beta") = 1.0,
           py::arg("nodes") = 64)
      .def("ntd", &Problem::ntd, py::arg("n_flux"), py::arg("s") = 1.0,
           py::arg("alpha") = 0.5, py::arg("q") = 1, py::arg("beta") = 1.0)
      .def("recover", &Problem::recover, py::arg("n_flux"), py::arg("s") = 1.0,
           py::arg("alpha") = 0.5, py::arg("q") = 1, py::arg("beta") = 1.0,
           py::arg("m_eta") = 3, py::arg("m_gamma") = 3, py::arg("lambda") = 0.0,
           py::arg("noise") = 0.0, py::arg("seed") = 0)
      .def("density", &Problem::density, py::arg("sizes"), py::arg("s") = 1.0,
           py::arg("alpha") = 0.5, py::arg("q") = 1, py::arg("beta") = 1.0);

  m.attr("__version__") = kVersion;
}
