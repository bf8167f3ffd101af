#include "diracpack/quadrature.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace diracpack;

TEST(PhysParams, Validation) {
  EXPECT_NO_THROW(PhysParams(0.0, 0.1));
  EXPECT_THROW(PhysParams(-1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(PhysParams(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(PhysParams(1.0, std::nan("")), std::invalid_argument);
  EXPECT_THROW(PhysParams(INFINITY, 0.1), std::invalid_argument);
}

TEST(MomentumProfile, PrefactorChangesSignAtQm) {
  const auto f = make_profile(PhysParams(1.0, 0.1), 7.0);
  EXPECT_LT(f(6.9), 0.0);
  EXPECT_NEAR(f(7.0), 0.0, 1e-12);
  EXPECT_GT(f(7.1), 0.0);
  EXPECT_THROW(make_profile(PhysParams(1.0, 0.1), NAN), std::invalid_argument);
}

TEST(MomentumProfile, VolumeMeasureWeight) {
  const auto f = make_profile(PhysParams(1.0, 0.3), std::nullopt,
                              SpectralMeasure::Volume);
  EXPECT_DOUBLE_EQ(f.weighted(2.0), 4.0 * std::exp(-0.36));
}

TEST(Truncation, TailBeyondPmaxIsBelowTolerance) {
  for (double l : {0.05, 0.1, 0.5}) {
    for (std::optional<double> q : {std::optional<double>{}, std::optional<double>{7.0}}) {
      const auto prof = make_profile(PhysParams(1.0, l), q);
      const double pm = truncation_point(prof);
      // largest integrand magnitude |(E+m) p^4 f| on [p_max, inf)
      auto envelope = [&](double p) {
        return (prof.energy(p) + 1.0) * (1.0 + std::pow(p, 4)) * std::abs(prof(p));
      };
      const double tail = oracle::simpson(envelope, pm, pm + 10.0 / l, 20000);
      const double total = oracle::simpson(envelope, 0.0, pm, 20000);
      EXPECT_LT(tail / total, 1e-10) << "l=" << l;
      EXPECT_NEAR(pm * l, 1.1 * std::sqrt(-std::log(std::numeric_limits<double>::epsilon())),
                  1e-12);
    }
  }
}

TEST(Quadrature, IntegratesGaussian) {
  const double l = 0.1;
  const auto prof = make_profile(PhysParams(1.0, l));
  const auto rule = build_quadrature(prof, 2.5, 5.7, 1e-10);
  const double got = integrate(rule, [&](double p) { return prof(p); });
  EXPECT_NEAR(got, std::sqrt(std::numbers::pi) / (2 * l), 1e-12 * got);
}

TEST(Quadrature, IntegratesOscillatoryIntegrandToOracle) {
  // int_0^inf e^{-l^2 p^2} cos(a p) dp = sqrt(pi)/(2l) e^{-a^2/(4 l^2)}
  const double l = 0.1;
  const auto prof = make_profile(PhysParams(1.0, l));
  const auto rule = build_quadrature(prof, 2.5, 5.7, 1e-10);
  for (double a : {0.05, 0.2, 0.4}) {
    const double got = integrate(rule, [&](double p) { return prof(p) * std::cos(a * p); });
    const double want =
        std::sqrt(std::numbers::pi) / (2 * l) * std::exp(-a * a / (4 * l * l));
    EXPECT_NEAR(got, want, 1e-11 * std::sqrt(std::numbers::pi) / (2 * l)) << a;
  }
}

TEST(Quadrature, ErrorEstimateWithinTolerance) {
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    const auto prof = make_profile(PhysParams(1.0, 0.1), 7.0);
    const auto rule = build_quadrature(prof, 2.5, 5.7, tol);
    EXPECT_LT(rule.est_error, tol);
    EXPECT_GT(rule.est_error, 0.0);
    EXPECT_EQ(rule.n_nodes, rule.nodes.size());
    EXPECT_EQ(rule.nodes.size() % 16, 0u);
    for (double p : rule.nodes) {
      EXPECT_GT(p, 0.0);
      EXPECT_LT(p, rule.p_max);
    }
  }
}

TEST(Quadrature, TighterToleranceNeverUsesFewerNodes) {
  const auto prof = make_profile(PhysParams(1.0, 0.1));
  const auto loose = build_quadrature(prof, 2.5, 5.7, 1e-6);
  const auto tight = build_quadrature(prof, 2.5, 5.7, 1e-11);
  EXPECT_GE(tight.n_nodes, loose.n_nodes);
}

TEST(Quadrature, EnvelopeAndArguments) {
  const auto prof = make_profile(PhysParams(1.0, 0.1));
  const auto rule = build_quadrature(prof, 1.0, 2.0, 1e-8);
  EXPECT_TRUE(rule.covers(2.0, 1.0));
  EXPECT_TRUE(rule.covers(1.0, -1.0));
  EXPECT_FALSE(rule.covers(2.5, 1.0));
  EXPECT_THROW(rule.require_covers(1.0, 3.0), EnvelopeError);
  EXPECT_THROW(build_quadrature(prof, 1.0, 2.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_quadrature(prof, -1.0, 2.0, 1e-8), std::invalid_argument);
}

TEST(Quadrature, ImpossibleToleranceFailsLoudly) {
  const auto prof = make_profile(PhysParams(1.0, 0.1));
  QuadratureOptions opt;
  opt.max_doublings = 1;
  EXPECT_THROW(build_quadrature(prof, 50.0, 50.0, 1e-14, opt), ConvergenceError);
}

TEST(Quadrature, Deterministic) {
  const auto prof = make_profile(PhysParams(1.0, 0.1));
  const auto a = build_quadrature(prof, 2.5, 5.7, 1e-10);
  const auto b = build_quadrature(prof, 2.5, 5.7, 1e-10);
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.est_error, b.est_error);
}

TEST(Quadrature, DoublingNodesMovesFirstComponentLessThanTolerance) {
  const double tol = 1e-10, r = 1.0, t = 2.5;
  const auto prof = make_profile(PhysParams(1.0, 0.1));
  const auto rule = build_quadrature(prof, t, 5.7, tol);
  auto psi1 = [&](const std::vector<double> &nodes, const std::vector<double> &weights) {
    complex acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double p = nodes[i], E = prof.energy(p);
      acc += weights[i] * (E + 1.0) * radial_mode(0, p * r) * prof(p) *
             std::polar(1.0, -E * t);
    }
    return acc;
  };
  std::vector<double> nodes, weights;
  const auto gl = detail::gauss_legendre(16);
  detail::composite_rule(rule.p_max, static_cast<int>(2 * rule.n_nodes / 16), gl, nodes,
                         weights);
  const complex coarse = psi1(rule.nodes, rule.weights);
  const complex fine = psi1(nodes, weights);
  EXPECT_LT(std::abs(fine - coarse), tol * std::abs(fine));
}
