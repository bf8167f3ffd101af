#pragma once

// Evaluation of observables over the y = 0 half plane.

#include "diracpack/dirac_field.hpp"
#include "diracpack/observables.hpp"
#include "diracpack/parallel.hpp"
#include "diracpack/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace diracpack {

/// Uniform nx x nz grid over [x_min, x_max] x [z_min, z_max] at y = 0.
struct HalfPlaneGrid {
  double x_min = 0.0, x_max = 4.0;
  double z_min = -4.0, z_max = 4.0;
  std::size_t nx = 201, nz = 401;

  void validate() const {
    if (nx < 2 || nz < 2)
      throw std::invalid_argument("HalfPlaneGrid: nx, nz must be >= 2");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) ||
        !std::isfinite(z_min) || !std::isfinite(z_max) || !(x_max > x_min) ||
        !(z_max > z_min))
      throw std::invalid_argument("HalfPlaneGrid: invalid ranges");
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
  double dz() const { return (z_max - z_min) / static_cast<double>(nz - 1); }
  double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
  double z(std::size_t j) const { return z_min + dz() * static_cast<double>(j); }
  std::size_t size() const { return nx * nz; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * nz + j; }

  /// Largest distance from the origin of any grid point.
  double r_max() const {
    const double ax = std::max(std::abs(x_min), std::abs(x_max));
    const double az = std::max(std::abs(z_min), std::abs(z_max));
    return std::hypot(ax, az);
  }

  /// Same window, (2 nx - 1) x (2 nz - 1) points.
  HalfPlaneGrid refined() const {
    HalfPlaneGrid g = *this;
    g.nx = 2 * nx - 1;
    g.nz = 2 * nz - 1;
    return g;
  }
};

enum class ObservableId { RhoE, Rho, Speed, SpeedD, MomentumNorm };

inline std::string_view to_string(ObservableId id) {
  switch (id) {
  case ObservableId::RhoE: return "rhoE";
  case ObservableId::Rho: return "rho";
  case ObservableId::Speed: return "speed";
  case ObservableId::SpeedD: return "speedD";
  case ObservableId::MomentumNorm: return "G";
  }
  return "?";
}

inline ObservableId parse_observable(std::string_view name) {
  for (auto id : {ObservableId::RhoE, ObservableId::Rho, ObservableId::Speed,
                  ObservableId::SpeedD, ObservableId::MomentumNorm})
    if (name == to_string(id)) return id;
  throw std::invalid_argument("unknown observable '" + std::string(name) +
                              "' (expected rhoE, rho, speed, speedD or G)");
}

/// Value recorded where an observable is undefined (flag = 1).
inline constexpr double kFlaggedSentinel = -1.0;

/// One observable sampled on a grid, indexed by grid.index(i, j).
struct FieldMap {
  HalfPlaneGrid grid;
  double t = 0.0;
  ObservableId observable = ObservableId::RhoE;
  std::vector<double> values;
  std::vector<std::uint8_t> flags;
  double noise_floor = 0.0;
  double field_scale = 0.0;

  double at(std::size_t i, std::size_t j) const {
    return values[grid.index(i, j)];
  }
};

/// Every observable from a single pass over the grid.
struct ObservableMaps {
  FieldMap rhoE, rho, speed, speedD, momentum;

  const FieldMap &get(ObservableId id) const {
    switch (id) {
    case ObservableId::RhoE: return rhoE;
    case ObservableId::Rho: return rho;
    case ObservableId::Speed: return speed;
    case ObservableId::SpeedD: return speedD;
    case ObservableId::MomentumNorm: return momentum;
    }
    return rhoE;
  }
};

/// Samples the field at every grid point (in parallel) and maps it through
/// the observables. The noise floor is
///   noise_floor(est_error, max_grid(rho) * profile.energy_scale()).
inline ObservableMaps scan_all(const HalfPlaneGrid &grid, double t,
                               const MomentumProfile &profile,
                               const QuadratureRule &quad) {
  grid.validate();
  quad.require_covers(grid.r_max(), t);
  const SpectralSlice slice(profile, quad, t);
  const DiracMatrices d = DiracMatrices::standard();

  const std::size_t n = grid.size();
  std::vector<double> rho(n), rhoE(n), gnorm(n), vd(n);
  std::vector<Vec3> G(n);
  parallel_for(n, [&](std::size_t idx) {
    const std::size_t i = idx / grid.nz;
    const std::size_t j = idx % grid.nz;
    const FieldSample s = slice.sample(grid.x(i), 0.0, grid.z(j));
    rho[idx] = probability_density(s);
    rhoE[idx] = energy_quasidensity(s);
    G[idx] = momentum_density(s);
    gnorm[idx] = norm(G[idx]);
    const auto v = dirac_velocity(rho[idx], charge_current(s, d));
    vd[idx] = v ? norm(*v) : kFlaggedSentinel;
  });

  const double scale =
      *std::max_element(rho.begin(), rho.end()) * profile.energy_scale();
  const double floor = noise_floor(quad.est_error, scale);

  auto make = [&](ObservableId id) {
    FieldMap m;
    m.grid = grid;
    m.t = t;
    m.observable = id;
    m.values.assign(n, 0.0);
    m.flags.assign(n, 0);
    m.noise_floor = floor;
    m.field_scale = scale;
    return m;
  };
  ObservableMaps out{make(ObservableId::RhoE), make(ObservableId::Rho),
                     make(ObservableId::Speed), make(ObservableId::SpeedD),
                     make(ObservableId::MomentumNorm)};
  for (std::size_t idx = 0; idx < n; ++idx) {
    out.rhoE.values[idx] = rhoE[idx];
    out.rho.values[idx] = rho[idx];
    out.momentum.values[idx] = gnorm[idx];
    if (vd[idx] == kFlaggedSentinel) out.speedD.flags[idx] = 1;
    out.speedD.values[idx] = vd[idx];
    const auto v = velocity_field(rhoE[idx], G[idx], floor);
    if (v) {
      out.speed.values[idx] = norm(*v);
    } else {
      out.speed.values[idx] = kFlaggedSentinel;
      out.speed.flags[idx] = 1;
    }
  }
  return out;
}

inline FieldMap scan(const HalfPlaneGrid &grid, double t, ObservableId id,
                     const MomentumProfile &profile,
                     const QuadratureRule &quad) {
  ObservableMaps all = scan_all(grid, t, profile, quad);
  switch (id) {
  case ObservableId::RhoE: return std::move(all.rhoE);
  case ObservableId::Rho: return std::move(all.rho);
  case ObservableId::Speed: return std::move(all.speed);
  case ObservableId::SpeedD: return std::move(all.speedD);
  case ObservableId::MomentumNorm: return std::move(all.momentum);
  }
  return std::move(all.rhoE);
}

} // namespace diracpack
