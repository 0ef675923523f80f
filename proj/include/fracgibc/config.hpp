#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "fracgibc/fields.hpp"
#include "fracgibc/geometry.hpp"
#include "fracgibc/signals.hpp"

namespace fracgibc {

/// Parsed, validated study configuration (INI-like sectioned key = value text).
struct StudyConfig {
  // [geometry]
  std::string outer_kind = "circle";
  Eigen::Vector2d outer_center{0.0, 0.0};
  std::vector<double> outer_params{1.0};
  std::string inner_kind = "circle";
  Eigen::Vector2d inner_center{0.0, 0.0};
  std::vector<double> inner_params{0.5};
  double h = 0.1;

  // [coefficients]
  std::string a_kind = "identity";        // identity | constant | iso_quadratic
  std::vector<double> a_params;           // constant: a11 a12 a22; iso_quadratic: base slope
  double c = 0.0;

  // [impedance]
  std::vector<double> eta_coeffs{1.0};    // trigonometric basis on [0, ell0)
  std::vector<double> gamma_coeffs{1.0};

  // [flux]
  int flux_basis_size = 8;
  int flux_mode = 0;
  int signal_q = 1;
  double signal_beta = 1.0;

  // [frequency]
  double alpha = 0.5;
  std::vector<std::complex<double>> s_list{{1.0, 0.0}};
  int contour_nodes = 64;
  std::vector<double> times{1.0};

  // [inversion]
  int m_eta = 3;
  int m_gamma = 3;
  double lambda = 0.0;
  bool lambda_auto = false;               // discrepancy-principle selection
  double noise = 0.0;

  // [study]
  std::vector<double> horizons{1.0, 2.0, 4.0, 8.0};
  double dt = 0.01;
  double t_end = 1.0;
  std::vector<double> h_list{0.1, 0.05};
  int coercivity_samples = 50;

  std::string raw_text;
  std::uint64_t hash = 0;

  Curve make_outer() const;
  Curve make_inner() const;
  CoefficientField make_coefficients() const;
  ImpedanceField make_impedance(double ell0) const;
  TemporalSignal make_signal() const;
};

/// Parse and validate; throws ConfigError carrying the offending line number.
StudyConfig parse_config(const std::string& text);
StudyConfig parse_config_file(const std::string& path);

/// FNV-1a over the raw bytes, used for output provenance headers.
std::uint64_t fnv1a_hash(const std::string& text);

std::complex<double> parse_complex_token(const std::string& token);

}  // namespace fracgibc
