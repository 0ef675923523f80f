#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace fracgibc {

/// One term coeff * t^q * exp(-beta t) of a temporal forcing, q >= 1, beta >= 0.
struct SignalTerm {
  int q = 1;
  double beta = 0.0;
  double coeff = 1.0;
};

/// Causal temporal forcing from the monomial-exponential family. The Laplace
/// transform is closed form, G(s) = sum coeff * q! / (s + beta)^(q+1), and the
/// decay exponent is p = 1 + min q > 1, so the inversion theorem applies.
class TemporalSignal {
 public:
  static TemporalSignal monomial_exp(int q, double beta, double coeff = 1.0);
  static TemporalSignal combination(std::vector<SignalTerm> terms);

  /// g(t); zero for t <= 0 (causal).
  double eval(double t) const;

  /// G(s) on the principal branch.
  std::complex<double> transform(std::complex<double> s) const;

  /// Decay exponent p with |G(s)| <= C / |s|^p on the right half-plane.
  int decay_exponent() const;

  const std::vector<SignalTerm>& terms() const { return terms_; }

 private:
  std::vector<SignalTerm> terms_;
};

/// Result of the decay sweep |G(s)| |s|^p over rays in the right half-plane.
struct DecayCertificate {
  bool ok = false;
  double constant = 0.0;  // max over samples of |G(s)| |s|^p
  double first_decade_sup = 0.0;
  double last_decade_sup = 0.0;
};

/// Sample |G| on rays Arg(s) in {0, +-pi/4, +-(pi/2 - 0.01)} with |s| log-spaced
/// in [1, 1e4]. Fails when the scaled magnitude keeps growing across decades,
/// which means the claimed exponent p is too large.
DecayCertificate verify_decay(const std::function<std::complex<double>(std::complex<double>)>& G,
                              double p);

}  // namespace fracgibc
