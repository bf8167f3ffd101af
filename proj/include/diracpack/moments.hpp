#pragma once

// Global integrals of the packet: position-space norm, energy and <r^2>
// (radial integrals, using the spherical symmetry of psi^dagger psi), the
// momentum-space oracles they must agree with, the A + B t^2 fit and the
// dimensional scaling check.

#include "diracpack/dirac_field.hpp"
#include "diracpack/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace diracpack {

/// 2 pi^2 sum w p^(2k-2) [(E+m)^2 + p^2] f^2 with k = 0 (line) or 2
/// (volume), from int_0^inf j_l(pr) j_l(p'r) r^2 dr = pi/(2p^2) delta(p-p').
/// The line measure leaves a 1/p^2 singularity at p = 0: the norm is
/// infinite.
inline double norm_oracle(const MomentumProfile &profile,
                          const QuadratureRule &quad) {
  if (profile.measure() == SpectralMeasure::Line)
    return std::numeric_limits<double>::infinity();
  const double m = profile.m();
  const double sum = integrate(quad, [&](double p) {
    const double E = profile.energy(p);
    const double f = profile(p);
    return p * p * ((E + m) * (E + m) + p * p) * f * f;
  });
  return 2.0 * std::numbers::pi * std::numbers::pi * sum;
}

/// As norm_oracle with an extra factor E_p: the total energy.
inline double energy_oracle(const MomentumProfile &profile,
                            const QuadratureRule &quad) {
  if (profile.measure() == SpectralMeasure::Line)
    return std::numeric_limits<double>::infinity();
  const double m = profile.m();
  const double sum = integrate(quad, [&](double p) {
    const double E = profile.energy(p);
    const double f = profile(p);
    return E * p * p * ((E + m) * (E + m) + p * p) * f * f;
  });
  return 2.0 * std::numbers::pi * std::numbers::pi * sum;
}

/// 4 pi int r^2 {rho, r^2 rho, rhoE} dr.
struct RadialMoments {
  double norm = 0.0;
  double r2 = 0.0;
  double energy = 0.0;
  double r_max = 0.0;        // radial cutoff that met the tolerance
  std::size_t n_nodes = 0;   // radial nodes used at that cutoff

  double mean_square_radius() const { return r2 / norm; }
};

struct RadialOptions {
  double tol = 1e-9;        // norm and energy
  double moment_tol = 1e-7; // r^2 moment; its massless tail falls as R^-3
  int panel_order = 16;
  int max_refinements = 8;
};

/// Starting radial cutoff t + 12 l + 5/m (light cone, initial width,
/// Compton tail); without mass the tail term is dropped.
inline double radial_envelope(const MomentumProfile &profile, double t) {
  double r = std::abs(t) + 12.0 * profile.l();
  if (profile.m() > 0.0) r += 5.0 / profile.m();
  return r;
}

namespace detail {

// Panels of width l/2 up to r_core, then geometrically growing panels out to
// r_max; `level` halves every panel.
inline void radial_rule(double r_core, double r_max, double l, int level,
                        const GaussLegendre &gl, std::vector<double> &nodes,
                        std::vector<double> &weights) {
  nodes.clear();
  weights.clear();
  std::vector<double> edges{0.0};
  const double h = 0.5 * l;
  while (edges.back() < std::min(r_core, r_max))
    edges.push_back(std::min(edges.back() + h, std::min(r_core, r_max)));
  while (edges.back() < r_max)
    edges.push_back(std::min(r_max, edges.back() + std::max(h, 0.25 * edges.back())));
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const int split = 1 << level;
    const double w = (edges[k + 1] - edges[k]) / split;
    for (int s = 0; s < split; ++s) {
      const double a = edges[k] + s * w;
      for (std::size_t i = 0; i < gl.x.size(); ++i) {
        nodes.push_back(a + 0.5 * w * (1.0 + gl.x[i]));
        weights.push_back(0.5 * w * gl.w[i]);
      }
    }
  }
}

struct RadialSums {
  double norm = 0.0, r2 = 0.0, energy = 0.0;
  std::size_t n = 0;
};

inline RadialSums radial_sums(const SpectralSlice &slice, double r_core,
                              double r_max, double l, int level,
                              const GaussLegendre &gl) {
  std::vector<double> nodes, weights;
  radial_rule(r_core, r_max, l, level, gl, nodes, weights);
  RadialSums s;
  s.n = nodes.size();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r = nodes[i];
    const auto f = slice.radial(r);
    const double r2 = r * r;
    const double rho = std::norm(f.a) + r2 * std::norm(f.b);
    const double rhoE = (I * (std::conj(f.a) * f.a_dot +
                              r2 * std::conj(f.b) * f.b_dot))
                            .real();
    s.norm += weights[i] * r2 * rho;
    s.r2 += weights[i] * r2 * r2 * rho;
    s.energy += weights[i] * r2 * rhoE;
  }
  const double four_pi = 4.0 * std::numbers::pi;
  s.norm *= four_pi;
  s.r2 *= four_pi;
  s.energy *= four_pi;
  return s;
}

inline double rel_change(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

// Integral over [0, r_max], refining panels until all three sums settle.
inline RadialSums converged_sums(const SpectralSlice &slice, double r_core,
                                 double r_max, double l,
                                 const RadialOptions &opt,
                                 const GaussLegendre &gl) {
  RadialSums prev = radial_sums(slice, r_core, r_max, l, 0, gl);
  for (int level = 1; level <= opt.max_refinements; ++level) {
    RadialSums next = radial_sums(slice, r_core, r_max, l, level, gl);
    const double ch = std::max({rel_change(prev.norm, next.norm),
                                rel_change(prev.r2, next.r2),
                                rel_change(prev.energy, next.energy)});
    if (ch < 0.1 * std::min(opt.tol, opt.moment_tol)) return next;
    prev = next;
  }
  throw ConvergenceError("radial integral: panel refinement did not converge");
}

} // namespace detail

/// Radial integrals at time t. The cutoff starts at radial_envelope and is
/// doubled until norm, r^2 moment and energy change by less than opt.tol;
/// running out of quadrature envelope throws ConvergenceError.
inline RadialMoments radial_moments(double t, const MomentumProfile &profile,
                                    const QuadratureRule &quad,
                                    const RadialOptions &opt = {}) {
  const SpectralSlice slice(profile, quad, t);
  const auto gl = detail::gauss_legendre(opt.panel_order);
  const double r_core = std::abs(t) + 12.0 * profile.l();
  double r_cut = radial_envelope(profile, t);
  if (2.0 * r_cut > quad.r_max * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "radial integral: envelope r=" << 2.0 * r_cut
       << " exceeds quadrature r_max=" << quad.r_max;
    throw ConvergenceError(os.str());
  }
  auto inner = detail::converged_sums(slice, r_core, r_cut, profile.l(), opt, gl);
  while (2.0 * r_cut <= quad.r_max * (1.0 + 1e-12)) {
    auto outer =
        detail::converged_sums(slice, r_core, 2.0 * r_cut, profile.l(), opt, gl);
    const bool settled =
        std::max(detail::rel_change(inner.norm, outer.norm),
                 detail::rel_change(inner.energy, outer.energy)) < opt.tol &&
        detail::rel_change(inner.r2, outer.r2) < opt.moment_tol;
    r_cut *= 2.0;
    inner = outer;
    if (settled) {
      RadialMoments out;
      out.norm = inner.norm;
      out.r2 = inner.r2;
      out.energy = inner.energy;
      out.r_max = r_cut;
      out.n_nodes = inner.n;
      return out;
    }
  }
  std::ostringstream os;
  os << "radial integral did not converge within quadrature envelope r_max="
     << quad.r_max << " (last cutoff " << r_cut << ")";
  throw ConvergenceError(os.str());
}

inline double mean_square_radius(double t, const MomentumProfile &profile,
                                 const QuadratureRule &quad,
                                 const RadialOptions &opt = {}) {
  return radial_moments(t, profile, quad, opt).mean_square_radius();
}

/// Default number of cutoff doublings a moment rule must allow: massive
/// tails decay exponentially, massless ones as a power of r.
inline int default_doublings(const MomentumProfile &profile) {
  return profile.m() > 0.0 ? 3 : 6;
}

/// A momentum rule whose envelope allows `doublings` doublings of the
/// starting radial cutoff at every |t| <= t_max (0: default_doublings).
inline QuadratureRule moment_quadrature(const MomentumProfile &profile,
                                        double t_max, double rel_tol,
                                        int doublings = 0) {
  if (doublings <= 0) doublings = default_doublings(profile);
  const double r = radial_envelope(profile, t_max) * std::ldexp(1.0, doublings);
  return build_quadrature(profile, t_max, r, rel_tol);
}

// --- A + B t^2 ------------------------------------------------------------

namespace detail {

// Least squares via Householder QR; returns the coefficients and the RMS
// residual.
inline std::pair<std::vector<double>, double>
least_squares(const std::vector<std::vector<double>> &rows,
              const std::vector<double> &y) {
  const std::size_t n = rows.size();
  const std::size_t k = rows.front().size();
  std::vector<std::vector<double>> a = rows;
  std::vector<double> b = y;
  for (std::size_t c = 0; c < k; ++c) {
    double alpha = 0.0;
    for (std::size_t r = c; r < n; ++r) alpha += a[r][c] * a[r][c];
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) throw DegenerateInput("least squares: rank deficient");
    if (a[c][c] > 0.0) alpha = -alpha;
    std::vector<double> v(n, 0.0);
    for (std::size_t r = c; r < n; ++r) v[r] = a[r][c];
    v[c] -= alpha;
    double vv = 0.0;
    for (std::size_t r = c; r < n; ++r) vv += v[r] * v[r];
    if (vv == 0.0) continue;
    for (std::size_t cc = c; cc < k; ++cc) {
      double s = 0.0;
      for (std::size_t r = c; r < n; ++r) s += v[r] * a[r][cc];
      s = 2.0 * s / vv;
      for (std::size_t r = c; r < n; ++r) a[r][cc] -= s * v[r];
    }
    double s = 0.0;
    for (std::size_t r = c; r < n; ++r) s += v[r] * b[r];
    s = 2.0 * s / vv;
    for (std::size_t r = c; r < n; ++r) b[r] -= s * v[r];
  }
  std::vector<double> x(k, 0.0);
  for (std::size_t c = k; c-- > 0;) {
    if (std::abs(a[c][c]) < 1e-300)
      throw DegenerateInput("least squares: rank deficient");
    double s = b[c];
    for (std::size_t cc = c + 1; cc < k; ++cc) s -= a[c][cc] * x[cc];
    x[c] = s / a[c][c];
  }
  double ss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double fit = 0.0;
    for (std::size_t c = 0; c < k; ++c) fit += rows[r][c] * x[c];
    ss += (y[r] - fit) * (y[r] - fit);
  }
  return {x, std::sqrt(ss / static_cast<double>(n))};
}

} // namespace detail

struct MomentSample {
  double t = 0.0;
  double r2 = 0.0;
};

struct MomentFit {
  double A = 0.0;
  double B = 0.0;
  double residual = 0.0; // RMS misfit over mean <r^2>
  std::vector<MomentSample> samples;
};

inline void require_fit_samples(const std::vector<MomentSample> &samples) {
  std::set<double> ts, t2;
  for (const auto &s : samples) {
    ts.insert(s.t);
    t2.insert(s.t * s.t);
  }
  if (ts.size() < 3 || t2.size() < 2)
    throw DegenerateInput("quadratic_fit: need at least 3 distinct t values");
}

/// Least-squares <r^2> = A + B t^2.
inline MomentFit quadratic_fit(const std::vector<MomentSample> &samples) {
  require_fit_samples(samples);
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  double mean = 0.0;
  for (const auto &s : samples) {
    rows.push_back({1.0, s.t * s.t});
    y.push_back(s.r2);
    mean += s.r2;
  }
  mean /= static_cast<double>(samples.size());
  auto [x, rms] = detail::least_squares(rows, y);
  return {x[0], x[1], rms / std::abs(mean), samples};
}

/// Relative RMS residual of A + B t^2 + C t^3, used to check that a cubic
/// term does not absorb a systematic error the quadratic law misses.
inline double cubic_fit_residual(const std::vector<MomentSample> &samples) {
  require_fit_samples(samples);
  if (samples.size() < 4)
    throw DegenerateInput("cubic fit: need at least 4 samples");
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  double mean = 0.0;
  for (const auto &s : samples) {
    rows.push_back({1.0, s.t * s.t, s.t * s.t * s.t});
    y.push_back(s.r2);
    mean += s.r2;
  }
  mean /= static_cast<double>(samples.size());
  return detail::least_squares(rows, y).second / std::abs(mean);
}

// --- dimensional scaling --------------------------------------------------

struct ScalingOptions {
  double quad_tol = 1e-11;
  int doublings = 0; // 0: default_doublings
  RadialOptions radial{};
  std::optional<double> q{};
};

/// <r^2> for a volume-measure profile with the given (m, l) at time t.
inline double packet_mean_square_radius(double m, double l, double t,
                                        const ScalingOptions &opt = {}) {
  const auto profile = make_profile(PhysParams(m, l), opt.q,
                                    SpectralMeasure::Volume);
  const auto quad = moment_quadrature(profile, std::abs(t), opt.quad_tol,
                                      opt.doublings);
  return mean_square_radius(t, profile, quad, opt.radial);
}

struct ScalingPair {
  double s = 1.0;
  double r2_base = 0.0;   // <r^2>(l, m, t)
  double r2_scaled = 0.0; // <r^2>(s l, m / s, s t)
  double deviation = 0.0; // |r2_scaled / (s^2 r2_base) - 1|
};

/// Compares (l, m, t) with (s l, m/s, s t); dimensional analysis predicts
/// <r^2> picks up exactly s^2.
inline ScalingPair scaling_check(double l, double m, double s, double t_probe,
                                 const ScalingOptions &opt = {}) {
  if (!(s > 0.0)) throw std::invalid_argument("scaling_check: s must be > 0");
  ScalingPair out;
  out.s = s;
  out.r2_base = packet_mean_square_radius(m, l, t_probe, opt);
  out.r2_scaled = s == 1.0 ? out.r2_base
                           : packet_mean_square_radius(m / s, s * l,
                                                       s * t_probe, opt);
  out.deviation = std::abs(out.r2_scaled / (s * s * out.r2_base) - 1.0);
  return out;
}

/// <r^2> = l^2 g(lambda_C^2 / l^2) sampled over several l.
struct ScalingReport {
  double lambda_C = 0.0; // 1/m, infinite for m = 0
  std::vector<std::pair<double, double>> g_values; // (lambda_C^2/l^2, <r^2>/l^2)
  std::optional<double> massless_constant;
  double massless_spread = 0.0; // max relative deviation from the mean
};

inline ScalingReport g_function(double m, const std::vector<double> &ls,
                                double t, const ScalingOptions &opt = {}) {
  ScalingReport rep;
  rep.lambda_C = m > 0.0 ? 1.0 / m : std::numeric_limits<double>::infinity();
  for (double l : ls) {
    const double r2 = packet_mean_square_radius(m, l, t, opt);
    const double arg = m > 0.0 ? rep.lambda_C * rep.lambda_C / (l * l)
                               : std::numeric_limits<double>::infinity();
    rep.g_values.emplace_back(arg, r2 / (l * l));
  }
  if (m == 0.0 && !rep.g_values.empty()) {
    double mean = 0.0;
    for (const auto &g : rep.g_values) mean += g.second;
    mean /= static_cast<double>(rep.g_values.size());
    rep.massless_constant = mean;
    for (const auto &g : rep.g_values)
      rep.massless_spread =
          std::max(rep.massless_spread, std::abs(g.second / mean - 1.0));
  }
  return rep;
}

} // namespace diracpack
