#pragma once

// Densities and velocity fields derived from a FieldSample.

#include "diracpack/dirac_field.hpp"
#include "diracpack/types.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace diracpack {

/// psi^dagger psi
inline double probability_density(const FieldSample &s) {
  return norm2(s.psi);
}

/// j_k = psi^dagger alpha_k psi (real part; the imaginary part vanishes by
/// hermiticity up to roundoff).
inline Vec3 charge_current(const FieldSample &s, const DiracMatrices &d) {
  Vec3 j{};
  for (std::size_t k = 0; k < 3; ++k)
    j[k] = inner(s.psi, apply(d.alpha[k], s.psi)).real();
  return j;
}

/// (i/2)(psi^dagger d_t psi - d_t psi^dagger psi) = Re[i psi^dagger d_t psi].
/// Not sign-definite.
inline double energy_quasidensity(const FieldSample &s) {
  return (I * inner(s.psi, s.dpsi_dt)).real();
}

/// G_k = Re[psi^dagger (-i d_k) psi], the spatial counterpart of the
/// energy quasi-density.
inline Vec3 momentum_density(const FieldSample &s) {
  Vec3 g{};
  for (std::size_t k = 0; k < 3; ++k)
    g[k] = (-I * inner(s.psi, s.grad_psi[k])).real();
  return g;
}

/// G / rhoE, or nullopt (divergent) when |rhoE| <= noise_floor.
inline std::optional<Vec3> velocity_field(double rhoE, const Vec3 &G,
                                          double noise_floor) {
  if (std::isnan(rhoE) || std::isnan(G[0]) || std::isnan(G[1]) ||
      std::isnan(G[2]) || std::isnan(noise_floor))
    throw std::invalid_argument("velocity_field: NaN input");
  if (!(noise_floor > 0.0))
    throw std::invalid_argument("velocity_field: noise_floor must be > 0");
  if (std::abs(rhoE) <= noise_floor) return std::nullopt;
  return (1.0 / rhoE) * G;
}

/// j / rho, or nullopt when rho is not positive.
inline std::optional<Vec3> dirac_velocity(double rho, const Vec3 &j) {
  if (std::isnan(rho)) throw std::invalid_argument("dirac_velocity: NaN rho");
  if (!(rho > 0.0)) return std::nullopt;
  return (1.0 / rho) * j;
}

struct ObservableSet {
  double rho = 0.0;
  Vec3 j{};
  double rhoE = 0.0;
  Vec3 G{};
  std::optional<Vec3> v;
  std::optional<Vec3> vD;
};

inline ObservableSet observables(const FieldSample &s, const DiracMatrices &d,
                                 double noise_floor) {
  ObservableSet o;
  o.rho = probability_density(s);
  o.j = charge_current(s, d);
  o.rhoE = energy_quasidensity(s);
  o.G = momentum_density(s);
  o.v = velocity_field(o.rhoE, o.G, noise_floor);
  o.vD = dirac_velocity(o.rho, o.j);
  return o;
}

/// Threshold below which |rhoE| counts as zero: 10^3 * est_error * scale,
/// with scale a representative rho * energy of the field being analysed.
inline double noise_floor(double est_error, double field_scale) {
  return 1e3 * est_error * field_scale;
}

/// |d_t rho + div j| from the analytic derivatives in the sample, relative
/// to 2 |psi| (|d_t psi| + sum_k |d_k psi|), the size of the individual terms.
inline double continuity_residual(const FieldSample &s,
                                  const DiracMatrices &d) {
  const double drho_dt = 2.0 * inner(s.psi, s.dpsi_dt).real();
  double div_j = 0.0;
  double scale = norm(s.dpsi_dt);
  for (std::size_t k = 0; k < 3; ++k) {
    div_j += 2.0 * inner(s.psi, apply(d.alpha[k], s.grad_psi[k])).real();
    scale += norm(s.grad_psi[k]);
  }
  scale *= 2.0 * norm(s.psi);
  if (!(scale > 0.0))
    throw DegenerateInput("continuity_residual: field vanishes");
  return std::abs(drho_dt + div_j) / scale;
}

} // namespace diracpack
