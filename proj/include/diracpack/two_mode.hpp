#pragma once

// Closed-form plane-wave Dirac modes and the two-mode argument that the
// energy quasi-density of a superposition can be driven negative.

#include "diracpack/dirac_field.hpp"
#include "diracpack/types.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace diracpack {

/// amplitude * spinor * e^{i(k.x - E t)} with (alpha.k + m beta) u = E u.
struct PlaneWaveMode {
  Vec3 k{};
  double m = 0.0;
  double E = 0.0;
  Bispinor spinor; // u^dagger u = 2E
  complex amplitude{1.0};

  Bispinor at(const Vec3 &x, double t) const {
    return (amplitude * std::polar(1.0, dot(k, x) - E * t)) * spinor;
  }
};

/// Spin-up positive-energy plane wave,
/// u = sqrt(E+m) (1, 0, k_z/(E+m), (k_x + i k_y)/(E+m)).
inline PlaneWaveMode plane_wave(const Vec3 &k, double m,
                                complex amplitude = 1.0) {
  if (!(m >= 0.0)) throw std::invalid_argument("plane_wave: m must be >= 0");
  const double E = std::sqrt(m * m + dot(k, k));
  if (!(E > 0.0))
    throw std::invalid_argument("plane_wave: massless mode needs k != 0");
  const double em = E + m;
  const double s = std::sqrt(em);
  PlaneWaveMode w;
  w.k = k;
  w.m = m;
  w.E = E;
  w.amplitude = amplitude;
  w.spinor = {{s, 0.0, k[2] / s, complex{k[0], k[1]} / s}};
  return w;
}

/// Mode with a given spinor, which must be a positive-energy eigenvector.
inline PlaneWaveMode plane_wave_with_spinor(const Vec3 &k, double m,
                                            const Bispinor &spinor,
                                            complex amplitude = 1.0) {
  PlaneWaveMode w;
  w.k = k;
  w.m = m;
  w.E = std::sqrt(m * m + dot(k, k));
  w.spinor = spinor;
  w.amplitude = amplitude;
  return w;
}

/// |(alpha.k + m beta) u - E u| / |E u|
inline double eigen_residual(const PlaneWaveMode &w,
                             const DiracMatrices &d = DiracMatrices::standard()) {
  Bispinor h = w.m * apply(d.beta, w.spinor);
  for (std::size_t c = 0; c < 3; ++c) h += w.k[c] * apply(d.alpha[c], w.spinor);
  return norm(h - w.E * w.spinor) / norm(w.E * w.spinor);
}

/// (E + alpha.k + beta m) / 2E, projector onto positive energy at momentum k.
inline Bispinor positive_energy_projection(const Bispinor &v, const Vec3 &k,
                                           double m) {
  const DiracMatrices d = DiracMatrices::standard();
  const double E = std::sqrt(m * m + dot(k, k));
  Bispinor out = E * v + m * apply(d.beta, v);
  for (std::size_t c = 0; c < 3; ++c) out += k[c] * apply(d.alpha[c], v);
  return (1.0 / (2.0 * E)) * out;
}

struct TwoModeState {
  PlaneWaveMode mode1, mode2;

  /// chi = psi_1 E_1 / m at (x, t); for m = 0 the rescaling is undefined.
  Bispinor chi(const Vec3 &x, double t) const {
    if (!(mode1.m > 0.0))
      throw std::invalid_argument("TwoModeState::chi: needs m > 0");
    return (mode1.E / mode1.m) * mode1.at(x, t);
  }
};

/// (1/2)(E1|psi1|^2 + E1 psi2^dag psi1 + E2 psi1^dag psi2 + E2|psi2|^2 + c.c.)
inline double two_mode_quasidensity(const TwoModeState &s, const Vec3 &x,
                                    double t) {
  const Bispinor p1 = s.mode1.at(x, t);
  const Bispinor p2 = s.mode2.at(x, t);
  const double E1 = s.mode1.E, E2 = s.mode2.E;
  const complex sum = E1 * norm2(p1) + E1 * inner(p2, p1) +
                      E2 * inner(p1, p2) + E2 * norm2(p2);
  return 0.5 * (sum + std::conj(sum)).real();
}

/// The generic route: Re[i psi^dag d_t psi] for psi = psi1 + psi2 with
/// d_t psi_n = -i E_n psi_n.
inline double superposition_quasidensity(const TwoModeState &s, const Vec3 &x,
                                         double t) {
  const Bispinor p1 = s.mode1.at(x, t);
  const Bispinor p2 = s.mode2.at(x, t);
  FieldSample f;
  f.psi = p1 + p2;
  f.dpsi_dt = (-I * s.mode1.E) * p1 + (-I * s.mode2.E) * p2;
  return (I * inner(f.psi, f.dpsi_dt)).real();
}

/// The E1 -> infinity limit with chi held fixed: Re(m psi2^dag chi) +
/// E2 |psi2|^2.
inline double large_energy_limit(double m, const Bispinor &psi2, double E2,
                                 const Bispinor &chi) {
  return (m * inner(psi2, chi)).real() + E2 * norm2(psi2);
}

struct NegativitySample {
  double E1 = 0.0;
  double rhoE = 0.0;
  double limit = 0.0;   // limit formula evaluated with this E1's chi
  double error = 0.0;   // |rhoE - limit_inf|
};

struct NegativityReport {
  Vec3 point{};
  double t = 0.0;
  double limit = 0.0; // E1 -> infinity value
  std::vector<NegativitySample> samples;
  double fitted_slope = 0.0; // d log(error) / d log(E1); -1 for O(m/E1)
  double fitted_C = 0.0;     // max error * E1 / m
  std::size_t ball_negative = 0; // offsets around the point with rhoE < 0
  std::size_t ball_points = 0;
  bool negative_found = false;
};

struct NegativityOptions {
  Vec3 point{0.0, 0.0, 0.0};
  double t = 0.0;
  Vec3 k1_direction{0.0, 0.0, 1.0};
  std::size_t ball_points = 10;
  unsigned seed = 12345;
};

/// For each E1 builds mode 1 with momentum along k1_direction and a spinor
/// proportional to the positive-energy projection of chi_direction, scaled
/// so that Re(m psi2^dag chi) = -2 E2 |psi2|^2 at the probe point. In the
/// limit rhoE -> -E2 |psi2|^2 < 0.
inline NegativityReport negativity_search(const PlaneWaveMode &mode2,
                                          const Bispinor &chi_direction,
                                          const std::vector<double> &E1_schedule,
                                          const NegativityOptions &opt = {}) {
  const double m = mode2.m;
  if (!(m > 0.0)) throw std::invalid_argument("negativity_search: needs m > 0");
  if (!(norm(chi_direction) > 0.0))
    throw std::invalid_argument("negativity_search: chi_direction is zero");
  if (E1_schedule.empty())
    throw std::invalid_argument("negativity_search: empty E1 schedule");
  for (double e : E1_schedule)
    if (!(e > m)) throw std::invalid_argument("negativity_search: E1 must exceed m");

  const double kn = norm(opt.k1_direction);
  if (!(kn > 0.0))
    throw std::invalid_argument("negativity_search: zero k1 direction");
  const Vec3 n = (1.0 / kn) * opt.k1_direction;

  NegativityReport rep;
  rep.point = opt.point;
  rep.t = opt.t;
  const Bispinor psi2 = mode2.at(opt.point, opt.t);
  const double E2 = mode2.E;
  const double target = -2.0 * E2 * norm2(psi2); // Re(m psi2^dag chi)

  auto build = [&](double E1) {
    const Vec3 k1 = std::sqrt(E1 * E1 - m * m) * n;
    const Bispinor u = positive_energy_projection(chi_direction, k1, m);
    const complex overlap = m * inner(psi2, u);
    if (std::abs(overlap) < 1e-300)
      throw std::runtime_error(
          "negativity_search: chi direction orthogonal to psi2");
    // chi = c u with m psi2^dag chi = target (real)
    const complex c = target / overlap;
    const Bispinor chi = c * u;
    // psi1(x,t) = chi (m/E1) e^{i(k1.(x-x0) - E1 (t-t0))}
    const complex phase0 = std::polar(1.0, -(dot(k1, opt.point) - E1 * opt.t));
    TwoModeState st{plane_wave_with_spinor(k1, m, u, c * (m / E1) * phase0),
                    mode2};
    return std::pair{st, chi};
  };

  // chi converges as E1 grows; its limit is the projection at E1 -> inf
  {
    const Bispinor u_inf = [&] {
      const DiracMatrices d = DiracMatrices::standard();
      Bispinor out = chi_direction;
      for (std::size_t c = 0; c < 3; ++c) out += n[c] * apply(d.alpha[c], chi_direction);
      return 0.5 * out;
    }();
    const complex overlap = m * inner(psi2, u_inf);
    if (std::abs(overlap) < 1e-300)
      throw std::runtime_error(
          "negativity_search: chi direction orthogonal to psi2 in the limit");
    rep.limit = large_energy_limit(m, psi2, E2, (target / overlap) * u_inf);
  }

  for (double E1 : E1_schedule) {
    auto [st, chi] = build(E1);
    NegativitySample s;
    s.E1 = E1;
    s.rhoE = two_mode_quasidensity(st, opt.point, opt.t);
    s.limit = large_energy_limit(m, psi2, E2, chi);
    s.error = std::abs(s.rhoE - rep.limit);
    rep.samples.push_back(s);
    if (s.rhoE < 0.0) rep.negative_found = true;
  }

  // log-log slope of error against E1
  if (rep.samples.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(rep.samples.size());
    for (const auto &s : rep.samples) {
      const double lx = std::log(s.E1), ly = std::log(s.error);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    rep.fitted_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  for (const auto &s : rep.samples)
    rep.fitted_C = std::max(rep.fitted_C, s.error * s.E1 / m);

  // small ball around the point at the largest E1
  const double E1 = E1_schedule.back();
  auto [st, chi] = build(E1);
  const double radius = 0.1 / std::max(norm(st.mode1.k - st.mode2.k), m);
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t b = 0; b < opt.ball_points; ++b) {
    Vec3 d{gauss(rng), gauss(rng), gauss(rng)};
    const double len = norm(d);
    d = (radius * std::cbrt(uni(rng)) / len) * d;
    if (two_mode_quasidensity(st, opt.point + d, opt.t) < 0.0) ++rep.ball_negative;
    ++rep.ball_points;
  }
  return rep;
}

} // namespace diracpack
