#include "diracpack/contours.hpp"
#include "diracpack/grid_scan.hpp"
#include "diracpack/witness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace diracpack;

namespace {

FieldMap synthetic(const HalfPlaneGrid &g, const std::function<double(double, double)> &f) {
  FieldMap m;
  m.grid = g;
  m.values.resize(g.size());
  m.flags.assign(g.size(), 0);
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nz; ++j) m.values[g.index(i, j)] = f(g.x(i), g.z(j));
  return m;
}

HalfPlaneGrid small_grid() { return {0.0, 4.0, -4.0, 4.0, 81, 161}; }

} // namespace

TEST(HalfPlaneGrid, Geometry) {
  const HalfPlaneGrid g{};
  EXPECT_DOUBLE_EQ(g.dx(), 0.02);
  EXPECT_DOUBLE_EQ(g.dz(), 0.02);
  EXPECT_DOUBLE_EQ(g.x(200), 4.0);
  EXPECT_DOUBLE_EQ(g.z(0), -4.0);
  EXPECT_DOUBLE_EQ(g.r_max(), std::hypot(4.0, 4.0));
  const auto r = g.refined();
  EXPECT_EQ(r.nx, 401u);
  EXPECT_EQ(r.nz, 801u);
  EXPECT_DOUBLE_EQ(r.x(2 * 17), g.x(17));
}

TEST(HalfPlaneGrid, Validation) {
  HalfPlaneGrid g{};
  g.nx = 1;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = {};
  g.z_max = g.z_min;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(Observable, Names) {
  for (auto id : {ObservableId::RhoE, ObservableId::Rho, ObservableId::Speed,
                  ObservableId::SpeedD, ObservableId::MomentumNorm})
    EXPECT_EQ(parse_observable(to_string(id)), id);
  EXPECT_THROW(parse_observable("energy"), std::invalid_argument);
}

TEST(Contours, AllPositiveHasNothing) {
  const auto m = synthetic(small_grid(), [](double x, double z) { return 1.0 + x * x + z * z; });
  EXPECT_TRUE(zero_contours(m).empty());
  EXPECT_TRUE(negative_components(m).empty());
}

TEST(Contours, CircleIsClosedAndOnRadius) {
  const double R = 1.3, cx = 2.0, cz = 0.5;
  const auto g = small_grid();
  const auto m = synthetic(g, [&](double x, double z) {
    return std::hypot(x - cx, z - cz) - R;
  });
  const auto lines = zero_contours(m);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_TRUE(lines[0].closed);
  EXPECT_GT(lines[0].points.size(), 50u);
  for (const auto &p : lines[0].points)
    EXPECT_LT(std::abs(std::hypot(p.x - cx, p.z - cz) - R), 2 * g.dx());
  const auto regions = negative_components(m);
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_NEAR(regions[0].centroid.x, cx, g.dx());
  EXPECT_NEAR(regions[0].centroid.z, cz, g.dz());
  EXPECT_NEAR(regions[0].min_value, -R, 0.05);
  const double area = regions[0].cells.size() * g.dx() * g.dz();
  EXPECT_NEAR(area, M_PI * R * R, 0.05 * M_PI * R * R);
  ASSERT_EQ(regions[0].boundary.size(), 1u);
}

TEST(Contours, StraightLineIsOpenAcrossTheWindow) {
  const auto g = small_grid();
  const auto m = synthetic(g, [](double, double z) { return z - 0.31; });
  const auto lines = zero_contours(m);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_FALSE(lines[0].closed);
  for (const auto &p : lines[0].points) EXPECT_NEAR(p.z, 0.31, 1e-12);
  EXPECT_EQ(negative_components(m).size(), 1u);
}

TEST(Contours, FloorShiftsTheLevel) {
  const auto g = small_grid();
  const auto m = synthetic(g, [](double, double z) { return z; });
  const auto lines = zero_contours(m, 0.5);
  ASSERT_EQ(lines.size(), 1u);
  for (const auto &p : lines[0].points) EXPECT_NEAR(p.z, -0.5, 1e-12);
  const auto regions = negative_components(m, 0.5);
  ASSERT_EQ(regions.size(), 1u);
  for (const auto &c : regions[0].cells) EXPECT_LT(g.z(c.j), -0.5);
}

TEST(Regions, TwoDisksAreTwoRegions) {
  const auto m = synthetic(small_grid(), [](double x, double z) {
    return std::min(std::hypot(x - 2, z - 2) - 0.8, std::hypot(x - 2, z + 2) - 0.8);
  });
  EXPECT_EQ(negative_components(m).size(), 2u);
  EXPECT_EQ(zero_contours(m).size(), 2u);
}

TEST(Regions, DiagonalNeighboursAreNotConnected) {
  HalfPlaneGrid g{0.0, 1.0, 0.0, 1.0, 4, 4};
  FieldMap m = synthetic(g, [](double, double) { return 1.0; });
  m.values[g.index(1, 1)] = -1.0;
  m.values[g.index(2, 2)] = -1.0;
  EXPECT_EQ(negative_components(m).size(), 2u);
  m.values[g.index(1, 2)] = -1.0;
  EXPECT_EQ(negative_components(m).size(), 1u);
}

TEST(Regions, StableUnderRefinement) {
  const auto g = small_grid();
  auto f = [](double x, double z) {
    return std::sin(2.0 * x) * std::cos(1.5 * z) + 0.3;
  };
  EXPECT_EQ(negative_components(synthetic(g, f)).size(),
            negative_components(synthetic(g.refined(), f)).size());
}

TEST(Contours, Deterministic) {
  const auto m = synthetic(small_grid(), [](double x, double z) {
    return std::sin(3 * x) * std::sin(2 * z) + 0.1;
  });
  const auto a = zero_contours(m), b = zero_contours(m);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    ASSERT_EQ(a[k].points.size(), b[k].points.size());
    for (std::size_t v = 0; v < a[k].points.size(); ++v) {
      EXPECT_EQ(a[k].points[v].x, b[k].points[v].x);
      EXPECT_EQ(a[k].points[v].z, b[k].points[v].z);
    }
  }
}

TEST(Witness, FindsLargeRatioNextToSignChange) {
  const auto g = small_grid();
  const auto rhoE = synthetic(g, [](double, double z) { return z - 0.01; });
  const auto G = synthetic(g, [](double, double) { return 0.5; });
  const auto vD = synthetic(g, [](double, double) { return 0.4; });
  const auto w = superluminal_witness(rhoE, G, vD, 1e-6);
  ASSERT_TRUE(w.found);
  EXPECT_GT(w.speed, 10.0);
  EXPECT_TRUE(w.G_above_floor);
  EXPECT_NEAR(w.point.z, 0.0, g.dz());
  EXPECT_EQ(w.speedD, 0.4);
}

TEST(Witness, NoSignChangeMeansNoWitness) {
  const auto g = small_grid();
  const auto rhoE = synthetic(g, [](double, double) { return 1.0; });
  const auto G = synthetic(g, [](double, double) { return 0.5; });
  const auto w = superluminal_witness(rhoE, G, G, 1e-6);
  EXPECT_FALSE(w.found);
  EXPECT_EQ(w.adjacent_cells, 0u);
  EXPECT_FALSE(w.G_above_floor);
}

TEST(Witness, RejectsMismatchedGrids) {
  const auto a = synthetic(small_grid(), [](double, double) { return 1.0; });
  const auto b = synthetic(HalfPlaneGrid{0, 1, 0, 1, 5, 5}, [](double, double) { return 1.0; });
  EXPECT_THROW(superluminal_witness(a, b, a, 1e-6), std::invalid_argument);
}

TEST(GridScan, InitialPacketHasNoNegativeQuasidensity) {
  const auto prof = make_profile(PhysParams(1.0, 0.1));
  const HalfPlaneGrid g{0.0, 4.0, -4.0, 4.0, 51, 101};
  const auto quad = build_quadrature(prof, 0.0, g.r_max(), 1e-10);
  const auto maps = scan_all(g, 0.0, prof, quad);
  double lo = INFINITY;
  for (double v : maps.rhoE.values) lo = std::min(lo, v);
  EXPECT_GT(lo, 0.0);
  EXPECT_TRUE(negative_components(maps.rhoE, maps.rhoE.noise_floor).empty());
  for (double v : maps.rho.values) EXPECT_GE(v, 0.0);
  for (std::size_t k = 0; k < maps.speedD.values.size(); ++k) {
    if (!maps.speedD.flags[k]) {
      EXPECT_LE(maps.speedD.values[k], 1.0 + 1e-12);
    }
  }
}

TEST(GridScan, FlaggedCellsCarrySentinel) {
  const auto prof = make_profile(PhysParams(1.0, 0.1));
  const HalfPlaneGrid g{0.0, 4.0, -4.0, 4.0, 41, 81};
  const auto quad = build_quadrature(prof, 2.5, g.r_max(), 1e-10);
  const auto maps = scan_all(g, 2.5, prof, quad);
  EXPECT_GT(maps.rhoE.noise_floor, 0.0);
  EXPECT_EQ(maps.rhoE.noise_floor, maps.speed.noise_floor);
  for (std::size_t k = 0; k < maps.speed.values.size(); ++k) {
    if (maps.speed.flags[k]) {
      EXPECT_EQ(maps.speed.values[k], kFlaggedSentinel);
      EXPECT_LE(std::abs(maps.rhoE.values[k]), maps.rhoE.noise_floor);
    }
  }
  const FieldMap single = scan(g, 2.5, ObservableId::Rho, prof, quad);
  EXPECT_EQ(single.values, maps.rho.values);
}

TEST(GridScan, RefusesGridOutsideQuadratureEnvelope) {
  const auto prof = make_profile(PhysParams(1.0, 0.1));
  const auto quad = build_quadrature(prof, 1.0, 2.0, 1e-8);
  EXPECT_THROW(scan_all(HalfPlaneGrid{}, 1.0, prof, quad), EnvelopeError);
  EXPECT_THROW(scan_all(HalfPlaneGrid{0, 1, 0, 1, 5, 5}, 2.0, prof, quad), EnvelopeError);
}
