#include "fracgibc/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "fracgibc/errors.hpp"

namespace fracgibc {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> tokens;
  std::string t;
  while (is >> t) tokens.push_back(t);
  return tokens;
}

double parse_double(const std::string& token, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + token + "'");
  }
}

int parse_int(const std::string& token, int line) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(token, &pos);
    if (pos != token.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + token + "'");
  }
}

std::vector<double> parse_doubles(const std::vector<std::string>& tokens, int line) {
  std::vector<double> v;
  for (const auto& t : tokens) v.push_back(parse_double(t, line));
  return v;
}

}  // namespace

std::complex<double> parse_complex_token(const std::string& token) {
  if (token.empty()) throw InvalidInput("empty complex token");
  if (token.back() != 'i' && token.back() != 'I') {
    return {std::stod(token), 0.0};
  }
  std::string body = token.substr(0, token.size() - 1);
  // Find the sign separating real and imaginary parts (not a leading sign or
  // an exponent sign).
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') &&
        body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    if (body.empty() || body == "+" || body == "-") body += "1";
    return {0.0, std::stod(body)};
  }
  std::string im = body.substr(split);
  if (im == "+" || im == "-") im += "1";
  return {std::stod(body.substr(0, split)), std::stod(im)};
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

StudyConfig parse_config(const std::string& text) {
  StudyConfig cfg;
  cfg.raw_text = text;
  cfg.hash = fnv1a_hash(text);

  std::istringstream is(text);
  std::string raw_line;
  std::string section;
  int line_no = 0;

  const auto parse_curve = [&](const std::vector<std::string>& tokens, int line,
                               std::string& kind, std::vector<double>& params) {
    if (tokens.empty()) throw ConfigError(line, "curve needs a kind");
    kind = tokens[0];
    if (kind != "circle" && kind != "ellipse" && kind != "star") {
      throw ConfigError(line, "unknown curve kind '" + kind + "'");
    }
    params = parse_doubles({tokens.begin() + 1, tokens.end()}, line);
    if (kind == "circle" && params.size() != 1) {
      throw ConfigError(line, "circle takes one radius parameter");
    }
    if (kind == "ellipse" && params.size() != 2) {
      throw ConfigError(line, "ellipse takes two semi-axis parameters");
    }
    if (kind == "star" && params.empty()) {
      throw ConfigError(line, "star needs radius coefficients");
    }
  };

  while (std::getline(is, raw_line)) {
    ++line_no;
    std::string line = trim(raw_line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"geometry", "coefficients", "impedance",
                                    "flux", "frequency", "inversion", "study"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
            return section == k;
          }) == std::end(known)) {
        throw ConfigError(line_no, "unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto tokens = split_tokens(value);
    if (tokens.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");

    if (section == "geometry") {
      if (key == "outer") {
        parse_curve(tokens, line_no, cfg.outer_kind, cfg.outer_params);
      } else if (key == "inner") {
        parse_curve(tokens, line_no, cfg.inner_kind, cfg.inner_params);
      } else if (key == "outer_center" || key == "inner_center") {
        if (tokens.size() != 2) throw ConfigError(line_no, "center takes two numbers");
        const Eigen::Vector2d c(parse_double(tokens[0], line_no),
                                parse_double(tokens[1], line_no));
        (key == "outer_center" ? cfg.outer_center : cfg.inner_center) = c;
      } else if (key == "h") {
        cfg.h = parse_double(tokens[0], line_no);
        if (!(cfg.h > 0.0)) throw ConfigError(line_no, "h must be positive");
      } else {
        throw ConfigError(line_no, "unknown geometry key '" + key + "'");
      }
    } else if (section == "coefficients") {
      if (key == "A") {
        cfg.a_kind = tokens[0];
        cfg.a_params = parse_doubles({tokens.begin() + 1, tokens.end()}, line_no);
        if (cfg.a_kind == "constant" && cfg.a_params.size() != 3) {
          throw ConfigError(line_no, "constant A takes a11 a12 a22");
        }
        if (cfg.a_kind == "iso_quadratic" && cfg.a_params.size() != 2) {
          throw ConfigError(line_no, "iso_quadratic takes base slope");
        }
        if (cfg.a_kind != "identity" && cfg.a_kind != "constant" &&
            cfg.a_kind != "iso_quadratic") {
          throw ConfigError(line_no, "unknown A kind '" + cfg.a_kind + "'");
        }
      } else if (key == "c") {
        cfg.c = parse_double(tokens[0], line_no);
        if (cfg.c < 0.0) {
          throw ConfigError(line_no, "c must satisfy c >= 0 (nonnegative absorption)");
        }
      } else {
        throw ConfigError(line_no, "unknown coefficients key '" + key + "'");
      }
    } else if (section == "impedance") {
      if (key == "eta") {
        cfg.eta_coeffs = parse_doubles(tokens, line_no);
      } else if (key == "gamma") {
        cfg.gamma_coeffs = parse_doubles(tokens, line_no);
      } else {
        throw ConfigError(line_no, "unknown impedance key '" + key + "'");
      }
    } else if (section == "flux") {
      if (key == "basis_size") {
        cfg.flux_basis_size = parse_int(tokens[0], line_no);
        if (cfg.flux_basis_size < 1) throw ConfigError(line_no, "basis_size must be >= 1");
      } else if (key == "mode") {
        cfg.flux_mode = parse_int(tokens[0], line_no);
        if (cfg.flux_mode < 0) throw ConfigError(line_no, "mode must be >= 0");
      } else if (key == "signal_q") {
        cfg.signal_q = parse_int(tokens[0], line_no);
        if (cfg.signal_q < 1) throw ConfigError(line_no, "signal_q must be >= 1");
      } else if (key == "signal_beta") {
        cfg.signal_beta = parse_double(tokens[0], line_no);
        if (cfg.signal_beta < 0.0) throw ConfigError(line_no, "signal_beta must be >= 0");
      } else {
        throw ConfigError(line_no, "unknown flux key '" + key + "'");
      }
    } else if (section == "frequency") {
      if (key == "alpha") {
        cfg.alpha = parse_double(tokens[0], line_no);
        if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
          throw ConfigError(line_no, "alpha must lie in (0,1) (fractional order assumption)");
        }
      } else if (key == "s_list") {
        cfg.s_list.clear();
        for (const auto& t : tokens) {
          try {
            cfg.s_list.push_back(parse_complex_token(t));
          } catch (const std::exception&) {
            throw ConfigError(line_no, "bad complex number '" + t + "'");
          }
        }
      } else if (key == "contour_nodes") {
        cfg.contour_nodes = parse_int(tokens[0], line_no);
        if (cfg.contour_nodes < 8) throw ConfigError(line_no, "contour_nodes must be >= 8");
      } else if (key == "times") {
        cfg.times = parse_doubles(tokens, line_no);
        for (double t : cfg.times) {
          if (!(t > 0.0)) throw ConfigError(line_no, "times must be positive");
        }
      } else {
        throw ConfigError(line_no, "unknown frequency key '" + key + "'");
      }
    } else if (section == "inversion") {
      if (key == "m_eta") {
        cfg.m_eta = parse_int(tokens[0], line_no);
      } else if (key == "m_gamma") {
        cfg.m_gamma = parse_int(tokens[0], line_no);
      } else if (key == "lambda") {
        if (tokens[0] == "auto") {
          cfg.lambda_auto = true;
        } else {
          cfg.lambda = parse_double(tokens[0], line_no);
          if (cfg.lambda < 0.0) throw ConfigError(line_no, "lambda must be >= 0");
        }
      } else if (key == "noise") {
        cfg.noise = parse_double(tokens[0], line_no);
        if (cfg.noise < 0.0) throw ConfigError(line_no, "noise must be >= 0");
      } else {
        throw ConfigError(line_no, "unknown inversion key '" + key + "'");
      }
    } else if (section == "study") {
      if (key == "horizons") {
        cfg.horizons = parse_doubles(tokens, line_no);
      } else if (key == "dt") {
        cfg.dt = parse_double(tokens[0], line_no);
        if (!(cfg.dt > 0.0)) throw ConfigError(line_no, "dt must be positive");
      } else if (key == "t_end") {
        cfg.t_end = parse_double(tokens[0], line_no);
        if (!(cfg.t_end > 0.0)) throw ConfigError(line_no, "t_end must be positive");
      } else if (key == "h_list") {
        cfg.h_list = parse_doubles(tokens, line_no);
      } else if (key == "coercivity_samples") {
        cfg.coercivity_samples = parse_int(tokens[0], line_no);
        if (cfg.coercivity_samples < 1) throw ConfigError(line_no, "need >= 1 samples");
      } else {
        throw ConfigError(line_no, "unknown study key '" + key + "'");
      }
    } else {
      throw ConfigError(line_no, "key outside any section");
    }
  }

  // Cross-field validation against the model assumptions.
  const auto check_positive_trig = [&](const std::vector<double>& coeffs,
                                       const char* name) {
    double lower = coeffs[0];
    for (std::size_t i = 1; i < coeffs.size(); ++i) lower -= std::abs(coeffs[i]);
    // The sampled check at assembly is sharper; this catches blatant violations.
    double m = coeffs.empty() ? 0.0 : lower;
    if (coeffs.size() == 1) m = coeffs[0];
    if (!(m > 0.0)) {
      // Sample to confirm before rejecting (the crude bound is conservative).
      double sampled = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 2048; ++i) {
        sampled = std::min(sampled, trig_eval(coeffs, 1.0, static_cast<double>(i) / 2048));
      }
      if (!(sampled > 0.0)) {
        throw ConfigError(0, std::string(name) +
                                 " must be strictly positive (positive lower-bound assumption)");
      }
    }
  };
  check_positive_trig(cfg.eta_coeffs, "eta");
  check_positive_trig(cfg.gamma_coeffs, "gamma");

  if (cfg.a_kind == "constant") {
    Eigen::Matrix2d a;
    a << cfg.a_params[0], cfg.a_params[1], cfg.a_params[1], cfg.a_params[2];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a);
    if (!(es.eigenvalues().minCoeff() > 0.0)) {
      throw ConfigError(0, "A must be symmetric positive definite (ellipticity assumption)");
    }
  }
  if (cfg.a_kind == "iso_quadratic" &&
      (!(cfg.a_params[0] > 0.0) || cfg.a_params[1] < 0.0)) {
    throw ConfigError(0, "iso_quadratic A needs base > 0 and slope >= 0");
  }
  return cfg;
}

StudyConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(0, "cannot open config file " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

Curve StudyConfig::make_outer() const {
  if (outer_kind == "circle") return Curve::circle(outer_center, outer_params[0]);
  if (outer_kind == "ellipse") return Curve::ellipse(outer_center, outer_params[0], outer_params[1]);
  return Curve::star(outer_center, outer_params);
}

Curve StudyConfig::make_inner() const {
  if (inner_kind == "circle") return Curve::circle(inner_center, inner_params[0]);
  if (inner_kind == "ellipse") return Curve::ellipse(inner_center, inner_params[0], inner_params[1]);
  return Curve::star(inner_center, inner_params);
}

CoefficientField StudyConfig::make_coefficients() const {
  if (a_kind == "identity") {
    return CoefficientField::constant(Eigen::Matrix2d::Identity(), c);
  }
  if (a_kind == "constant") {
    Eigen::Matrix2d a;
    a << a_params[0], a_params[1], a_params[1], a_params[2];
    return CoefficientField::constant(a, c);
  }
  return CoefficientField::iso_quadratic(a_params[0], a_params[1], c);
}

ImpedanceField StudyConfig::make_impedance(double ell0) const {
  return ImpedanceField::trig(eta_coeffs, gamma_coeffs, ell0);
}

TemporalSignal StudyConfig::make_signal() const {
  return TemporalSignal::monomial_exp(signal_q, signal_beta);
}

}  // namespace fracgibc
