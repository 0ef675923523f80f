#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracgibc/errors.hpp"
#include "fracgibc/freq_solver.hpp"
#include "fracgibc/laplace.hpp"
#include "fracgibc/signals.hpp"
#include "fracgibc/time_solver.hpp"

using namespace fracgibc;
namespace {
using C = std::complex<double>;

Eigen::VectorXcd scalar(C v) {
  Eigen::VectorXcd out(1);
  out[0] = v;
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}
}  // namespace

TEST_CASE("closed-form transforms of the forcing family") {
  const TemporalSignal t1 = TemporalSignal::monomial_exp(1, 0.0);
  CHECK(std::abs(t1.transform({2.0, 0.0}) - C(0.25, 0.0)) < 1e-15);
  CHECK(t1.decay_exponent() == 2);

  const TemporalSignal te = TemporalSignal::monomial_exp(1, 1.0);
  CHECK(std::abs(te.transform({1.0, 0.0}) - C(0.25, 0.0)) < 1e-15);
  CHECK(te.decay_exponent() == 2);

  const TemporalSignal t2e = TemporalSignal::monomial_exp(2, 1.0);
  CHECK(std::abs(t2e.transform({1.0, 0.0}) - C(0.25, 0.0)) < 1e-15);
  CHECK(t2e.decay_exponent() == 3);
  CHECK(t2e.eval(2.0) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(t2e.eval(-1.0) == 0.0);
  CHECK(t2e.eval(0.0) == 0.0);
}

TEST_CASE("decay certification") {
  SUBCASE("1/s^2 with p = 2 has constant exactly 1") {
    const auto cert = verify_decay([](C s) { return 1.0 / (s * s); }, 2.0);
    CHECK(cert.ok);
    CHECK(cert.constant == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("1/(s+1)^2 with p = 2 stays bounded, constant near 1") {
    const auto cert = verify_decay([](C s) { return 1.0 / ((s + 1.0) * (s + 1.0)); }, 2.0);
    CHECK(cert.ok);
    CHECK(cert.constant <= 1.0 + 1e-9);
    CHECK(cert.constant >= 0.9);
  }
  SUBCASE("1/s with claimed p = 2 is rejected") {
    const auto cert = verify_decay([](C s) { return 1.0 / s; }, 2.0);
    CHECK_FALSE(cert.ok);
  }
  SUBCASE("p <= 1 is rejected up front") {
    CHECK_THROWS_AS(verify_decay([](C s) { return 1.0 / s; }, 1.0), InvalidInput);
  }
}

TEST_CASE("contour inversion of known pairs") {
  ContourSpec contour;
  contour.node_count = 64;

  SUBCASE("U = 1/s^2 inverts to u(t) = t") {
    const auto eval = [](C s) { return scalar(1.0 / (s * s)); };
    const auto times = linspace(0.5, 5.0, 10);
    const TimeTrajectory traj = invert(contour, 0.5, eval, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(traj.values[i][0] == doctest::Approx(times[i]).epsilon(1e-8));
    }
  }

  SUBCASE("round trip through the forcing family") {
    for (const TemporalSignal g : {TemporalSignal::monomial_exp(1, 1.0),
                                   TemporalSignal::monomial_exp(2, 0.5),
                                   TemporalSignal::monomial_exp(1, 0.0)}) {
      const auto eval = [&](C s) { return scalar(g.transform(s)); };
      for (double alpha : {0.25, 0.5, 0.75}) {
        // Narrow sectors need more nodes for the same accuracy.
        ContourSpec spec = contour;
        spec.node_count = alpha > 0.5 ? 256 : 64;
        const auto times = linspace(0.5, 5.0, 7);
        const TimeTrajectory traj = invert(spec, alpha, eval, times);
        double scale = 0.0;
        for (double t : times) scale = std::max(scale, std::abs(g.eval(t)));
        for (std::size_t i = 0; i < times.size(); ++i) {
          CHECK(std::abs(traj.values[i][0] - g.eval(times[i])) <= 1e-8 * scale);
        }
      }
    }
  }

  SUBCASE("fractional relaxation cross-check against the L1 oracle") {
    // d_t^alpha y + y = t  <=>  Y(s) = 1/(s^2 (s^alpha + 1)).
    const double alpha = 0.5;
    const auto eval = [alpha](C s) {
      return scalar(1.0 / (s * s) / (caputo_symbol(s, alpha) + 1.0));
    };
    const TemporalSignal g = TemporalSignal::monomial_exp(1, 0.0);
    const double dt = 2e-4;
    const auto y = l1_solve_scalar(alpha, 1.0, g, dt, 25000);
    const std::vector<double> times = {0.5, 1.0, 2.0, 5.0};
    const TimeTrajectory traj = invert(contour, alpha, eval, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto idx = static_cast<std::size_t>(std::llround(times[i] / dt));
      CHECK(traj.values[i][0] == doctest::Approx(y[idx]).epsilon(1e-4));
    }
  }

  SUBCASE("causality: early-time values are a vanishing fraction of the peak") {
    const TemporalSignal g = TemporalSignal::monomial_exp(3, 1.0);
    const auto eval = [&](C s) { return scalar(g.transform(s)); };
    std::vector<double> times = linspace(0.5, 5.0, 7);
    times.insert(times.begin(), 1e-3);
    const TimeTrajectory traj = invert(contour, 0.5, eval, times);
    double peak = 0.0;
    for (const auto& v : traj.values) peak = std::max(peak, std::abs(v[0]));
    CHECK(std::abs(traj.values[0][0]) < 1e-6 * peak);
  }

  SUBCASE("self-validating doubling certifies agreement") {
    ContourSpec small = contour;
    small.node_count = 16;
    const auto eval = [](C s) { return scalar(1.0 / (s * s)); };
    const TimeTrajectory traj =
        invert_self_validating(small, 0.5, eval, {1.0, 2.0}, 1e-6);
    CHECK(traj.values[0][0] == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("times must be positive") {
    const auto eval = [](C s) { return scalar(1.0 / (s * s)); };
    CHECK_THROWS_AS(invert(contour, 0.5, eval, {0.0, 1.0}), InvalidInput);
  }
}

TEST_CASE("bromwich line fallback") {
  ContourSpec line;
  line.type = ContourSpec::Type::BromwichLine;
  line.node_count = 4096;
  const auto eval = [](C s) { return scalar(1.0 / (s * s)); };
  const TimeTrajectory traj = invert(line, 0.5, eval, {1.0});
  CHECK(traj.values[0][0] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("partial transform") {
  // u(t) = t sampled densely on [0, 5].
  const int n = 200001;
  TimeTrajectory traj;
  traj.times = linspace(0.0, 5.0, n);
  for (double t : traj.times) traj.values.push_back(Eigen::VectorXd::Constant(1, t));

  SUBCASE("closed form at T = 5, s = 1") {
    const auto pt = partial_transform(traj, 5.0, {1.0, 0.0});
    CHECK(pt.value[0].real() == doctest::Approx(1.0 - 6.0 * std::exp(-5.0)).epsilon(1e-8));
    CHECK(pt.grid_error < 1e-8);
  }
  SUBCASE("growing T approaches the full transform 1/s^2") {
    TimeTrajectory longer;
    longer.times = linspace(0.0, 25.0, 500001);
    for (double t : longer.times) longer.values.push_back(Eigen::VectorXd::Constant(1, t));
    const auto pt = partial_transform(longer, 25.0, {1.0, 0.0});
    CHECK(pt.value[0].real() == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("interpolates a horizon between grid points") {
    const auto a = partial_transform(traj, 2.5000125, {1.0, 0.0});
    const auto b = partial_transform(traj, 2.5, {1.0, 0.0});
    CHECK(std::abs(a.value[0] - b.value[0]) < 1e-5);
  }
  SUBCASE("rejects nonpositive Re(s) and empty trajectories") {
    CHECK_THROWS_AS(partial_transform(traj, 1.0, {-1.0, 0.0}), InvalidInput);
    TimeTrajectory empty;
    CHECK_THROWS_AS(partial_transform(empty, 1.0, {1.0, 0.0}), InvalidInput);
  }
}

TEST_CASE("decay certification accepts every member of the forcing family") {
  for (int q : {1, 2}) {
    for (double beta : {0.0, 1.0}) {
      const TemporalSignal g = TemporalSignal::monomial_exp(q, beta);
      const auto cert =
          verify_decay([&](C s) { return g.transform(s); }, g.decay_exponent());
      CHECK(cert.ok);
      CHECK(cert.constant > 0.0);
    }
  }
}

TEST_CASE("truncation decay study on u(t) = t") {
  // Reference U(1) = 1; e(T) = (T+1) e^{-T} exactly.
  TimeTrajectory traj;
  traj.times = linspace(0.0, 12.0, 120001);
  for (double t : traj.times) traj.values.push_back(Eigen::VectorXd::Constant(1, t));
  Eigen::VectorXcd reference(1);
  reference[0] = 1.0;
  const auto norm = [](const Eigen::VectorXcd& v) { return v.norm(); };
  const std::vector<double> horizons = {1.0, 2.0, 4.0, 8.0};
  const TruncationStudy study =
      truncation_decay_study(traj, reference, {1.0, 0.0}, horizons, norm);

  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const double exact = (horizons[i] + 1.0) * std::exp(-horizons[i]);
    CHECK(study.errors[i] == doctest::Approx(exact).epsilon(1e-5));
    if (i > 0) CHECK(study.errors[i] < study.errors[i - 1]);
  }
  CHECK(std::abs(study.fitted_rate - 1.0) < 0.1);

  SUBCASE("doubling the data doubles every error") {
    TimeTrajectory doubled = traj;
    for (auto& v : doubled.values) v *= 2.0;
    Eigen::VectorXcd ref2(1);
    ref2[0] = 2.0;
    const TruncationStudy s2 =
        truncation_decay_study(doubled, ref2, {1.0, 0.0}, horizons, norm);
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      CHECK(s2.errors[i] == doctest::Approx(2.0 * study.errors[i]).epsilon(1e-12));
    }
  }
  SUBCASE("horizons below 1 are rejected") {
    CHECK_THROWS_AS(
        truncation_decay_study(traj, reference, {1.0, 0.0}, {0.5, 1.0}, norm),
        InvalidInput);
  }
}

TEST_CASE("contour nodes respect the sector cap") {
  // alpha = 0.75 narrows the sector; inversion must still converge.
  ContourSpec contour;
  contour.node_count = 256;
  const TemporalSignal g = TemporalSignal::monomial_exp(1, 1.0);
  const auto eval = [&](C s) {
    CHECK(std::abs(std::arg(s)) <= contour.theta_max(0.75));
    return scalar(g.transform(s));
  };
  const TimeTrajectory traj = invert(contour, 0.75, eval, {1.0});
  CHECK(traj.values[0][0] == doctest::Approx(g.eval(1.0)).epsilon(1e-7));
}
