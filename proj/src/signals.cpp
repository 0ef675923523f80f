#include "fracgibc/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracgibc/errors.hpp"

namespace fracgibc {

namespace {
double factorial(int q) {
  double f = 1.0;
  for (int i = 2; i <= q; ++i) f *= i;
  return f;
}
}  // namespace

TemporalSignal TemporalSignal::monomial_exp(int q, double beta, double coeff) {
  return combination({SignalTerm{q, beta, coeff}});
}

TemporalSignal TemporalSignal::combination(std::vector<SignalTerm> terms) {
  if (terms.empty()) throw InvalidInput("signal: needs at least one term");
  for (const auto& t : terms) {
    if (t.q < 1) throw InvalidInput("signal: monomial power q must be >= 1");
    if (t.beta < 0.0) throw InvalidInput("signal: decay rate beta must be >= 0");
  }
  TemporalSignal s;
  s.terms_ = std::move(terms);
  return s;
}

double TemporalSignal::eval(double t) const {
  if (t <= 0.0) return 0.0;
  double v = 0.0;
  for (const auto& term : terms_) {
    v += term.coeff * std::pow(t, term.q) * std::exp(-term.beta * t);
  }
  return v;
}

std::complex<double> TemporalSignal::transform(std::complex<double> s) const {
  std::complex<double> v = 0.0;
  for (const auto& term : terms_) {
    v += term.coeff * factorial(term.q) /
         std::pow(s + std::complex<double>(term.beta, 0.0), term.q + 1);
  }
  return v;
}

int TemporalSignal::decay_exponent() const {
  int q_min = terms_.front().q;
  for (const auto& t : terms_) q_min = std::min(q_min, t.q);
  return q_min + 1;
}

DecayCertificate verify_decay(
    const std::function<std::complex<double>(std::complex<double>)>& G, double p) {
  if (!(p > 1.0)) throw InvalidInput("verify_decay: the inversion theorem needs p > 1");
  const double rays[] = {0.0, std::numbers::pi / 4.0, -std::numbers::pi / 4.0,
                         std::numbers::pi / 2.0 - 0.01, -(std::numbers::pi / 2.0 - 0.01)};
  const int per_decade = 12;
  const int decades = 4;  // |s| in [1, 1e4]

  DecayCertificate cert;
  for (double theta : rays) {
    for (int i = 0; i <= per_decade * decades; ++i) {
      const double r = std::pow(10.0, static_cast<double>(i) / per_decade);
      const std::complex<double> s = std::polar(r, theta);
      const double scaled = std::abs(G(s)) * std::pow(r, p);
      cert.constant = std::max(cert.constant, scaled);
      if (i <= per_decade) cert.first_decade_sup = std::max(cert.first_decade_sup, scaled);
      if (i >= per_decade * (decades - 1)) {
        cert.last_decade_sup = std::max(cert.last_decade_sup, scaled);
      }
    }
  }
  // Bounded transforms approach a finite supremum; an exponent mismatch keeps
  // growing by 10^|mismatch| per decade.
  cert.ok = std::isfinite(cert.constant) &&
            cert.last_decade_sup <= 2.0 * std::max(cert.first_decade_sup, 1e-300);
  return cert;
}

}  // namespace fracgibc
