#include "diracpack/two_mode.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace diracpack;

namespace {

double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

Vec3 random_vec(std::mt19937 &rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  return {g(rng), g(rng), g(rng)};
}

} // namespace

TEST(PlaneWave, NormalisationAndEigenvector) {
  const DiracMatrices d = DiracMatrices::standard();
  std::mt19937 rng(1);
  for (int n = 0; n < 50; ++n) {
    const auto w = plane_wave(random_vec(rng, 3.0), 1.3);
    EXPECT_NEAR(norm2(w.spinor), 2.0 * w.E, 1e-12 * w.E);
    EXPECT_LT(eigen_residual(w, d), 1e-13);
  }
  EXPECT_THROW(plane_wave({0, 0, 0}, 0.0), std::invalid_argument);
  EXPECT_THROW(plane_wave({1, 0, 0}, -1.0), std::invalid_argument);
}

TEST(PlaneWave, ProjectionIsPositiveEnergyEigenvector) {
  const DiracMatrices d = DiracMatrices::standard();
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  for (int n = 0; n < 20; ++n) {
    const Vec3 k = random_vec(rng, 2.0);
    Bispinor v;
    for (auto &c : v.c) c = {g(rng), g(rng)};
    const auto w = plane_wave_with_spinor(k, 0.7, positive_energy_projection(v, k, 0.7));
    EXPECT_LT(eigen_residual(w, d), 1e-12);
  }
}

TEST(TwoMode, ExpandedFormMatchesGenericRoute) {
  std::mt19937 rng(3);
  for (int n = 0; n < 200; ++n) {
    TwoModeState s{plane_wave(random_vec(rng, 5.0), 1.0, {0.3, -0.7}),
                   plane_wave(random_vec(rng, 1.0), 1.0, {1.1, 0.2})};
    const Vec3 x = random_vec(rng, 2.0);
    const double a = two_mode_quasidensity(s, x, 0.4);
    const double b = superposition_quasidensity(s, x, 0.4);
    EXPECT_LT(rel(a, b), 1e-12);
  }
}

TEST(TwoMode, SingleModeIsPositive) {
  TwoModeState s{plane_wave({0, 0, 2}, 1.0), plane_wave({0, 0, 2}, 1.0, 0.0)};
  EXPECT_GT(two_mode_quasidensity(s, {0.1, 0.2, 0.3}, 0.0), 0.0);
}

TEST(Negativity, ConvergesToNegativeLimitAtRateMOverE) {
  const auto mode2 = plane_wave({0.0, 0.0, 0.0}, 1.0);
  const Bispinor chi{{1.0, 0.0, 0.0, 0.0}};
  const auto rep = negativity_search(mode2, chi, {10.0, 100.0, 1e3, 1e4});
  EXPECT_TRUE(rep.negative_found);
  EXPECT_NEAR(rep.limit, -mode2.E * norm2(mode2.at({0, 0, 0}, 0.0)), 1e-12);
  EXPECT_LT(rep.limit, 0.0);
  EXPECT_NEAR(rep.fitted_slope, -1.0, 0.1);
  for (std::size_t k = 1; k < rep.samples.size(); ++k)
    EXPECT_LT(rep.samples[k].error, rep.samples[k - 1].error);
  for (const auto &s : rep.samples) EXPECT_LT(s.error * s.E1, 2.0 * rep.fitted_C);
  EXPECT_EQ(rep.ball_points, 10u);
  EXPECT_EQ(rep.ball_negative, rep.ball_points);
}

TEST(Negativity, MovingSecondModeAndOtherDirection) {
  const auto mode2 = plane_wave({0.2, 0.0, 0.1}, 1.0);
  const Bispinor chi{{1.0, 0.0, 0.5, 0.0}};
  NegativityOptions opt;
  opt.point = {0.3, -0.2, 0.1};
  opt.t = 0.5;
  opt.k1_direction = {1.0, 1.0, 0.0};
  const auto rep = negativity_search(mode2, chi, {10.0, 100.0, 1e3, 1e4}, opt);
  EXPECT_TRUE(rep.negative_found);
  EXPECT_NEAR(rep.fitted_slope, -1.0, 0.1);
}

TEST(Negativity, RejectsBadInput) {
  const auto mode2 = plane_wave({0.0, 0.0, 0.0}, 1.0);
  const Bispinor chi{{1.0, 0.0, 0.0, 0.0}};
  EXPECT_THROW(negativity_search(mode2, chi, {}), std::invalid_argument);
  EXPECT_THROW(negativity_search(mode2, chi, {0.5}), std::invalid_argument);
  EXPECT_THROW(negativity_search(mode2, Bispinor{}, {10.0}), std::invalid_argument);
  EXPECT_THROW(negativity_search(plane_wave({1, 0, 0}, 0.0), chi, {10.0}),
               std::invalid_argument);
}
