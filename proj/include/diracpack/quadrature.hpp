#pragma once

// Momentum profiles and the composite Gauss-Legendre rule used for every
// integral over the radial momentum p in [0, infinity).

#include "diracpack/bessel.hpp"
#include "diracpack/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace diracpack {

/// Mass and packet scale in natural units (hbar = c = 1).
class PhysParams {
public:
  PhysParams(double mass, double scale) : m_(mass), l_(scale) {
    if (!(mass >= 0.0) || !std::isfinite(mass))
      throw std::invalid_argument("PhysParams: mass must be finite and >= 0");
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw std::invalid_argument("PhysParams: l must be finite and > 0");
  }

  double m() const { return m_; }
  double l() const { return l_; }

private:
  double m_;
  double l_;
};

/// How the profile enters the momentum integral.
///
/// Line integrates f(p) dp, the one-dimensional form of the positive
/// frequency Klein-Gordon packet. Its field has a 1/r tail, so position
/// space norms and moments diverge. Volume integrates f(p) p^2 dp, i.e.
/// treats f as a three-dimensional momentum amplitude; it is normalizable
/// and is what moments and global integrals are computed with.
enum class SpectralMeasure { Line, Volume };

inline const char *to_string(SpectralMeasure m) {
  return m == SpectralMeasure::Line ? "line" : "volume";
}

class MomentumProfile {
public:
  MomentumProfile(PhysParams params, std::optional<double> q,
                  SpectralMeasure measure)
      : params_(params), q_(q), measure_(measure) {
    if (q && !std::isfinite(*q))
      throw std::invalid_argument("MomentumProfile: q must be finite");
  }

  const PhysParams &params() const { return params_; }
  double m() const { return params_.m(); }
  double l() const { return params_.l(); }
  const std::optional<double> &q() const { return q_; }
  SpectralMeasure measure() const { return measure_; }

  /// f(p) = e^{-l^2 p^2}, times (p^2 - q^2 m^2) when q is set.
  double operator()(double p) const {
    const double l = params_.l();
    double f = std::exp(-l * l * p * p);
    if (q_) {
      const double qm = *q_ * params_.m();
      f *= p * p - qm * qm;
    }
    return f;
  }

  /// f(p) times the measure factor (1 or p^2).
  double weighted(double p) const {
    const double f = (*this)(p);
    return measure_ == SpectralMeasure::Volume ? f * p * p : f;
  }

  double energy(double p) const {
    const double m = params_.m();
    return std::sqrt(m * m + p * p);
  }

  /// Characteristic energy sqrt(m^2 + 1/l^2) of the packet.
  double energy_scale() const { return energy(1.0 / params_.l()); }

private:
  PhysParams params_;
  std::optional<double> q_;
  SpectralMeasure measure_;
};

inline MomentumProfile make_profile(const PhysParams &params,
                                    std::optional<double> q = std::nullopt,
                                    SpectralMeasure measure =
                                        SpectralMeasure::Line) {
  return MomentumProfile(params, q, measure);
}

/// Nodes and weights on (0, p_max) plus the (t, r) envelope they were
/// validated for.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double p_max = 0.0;
  std::size_t n_nodes = 0;
  double est_error = 0.0;
  double t_max = 0.0;
  double r_max = 0.0;

  /// |t| <= t_max and r <= r_max, with a small relative slack.
  bool covers(double r, double t) const {
    constexpr double slack = 1e-9;
    return r <= r_max * (1.0 + slack) + slack &&
           std::abs(t) <= t_max * (1.0 + slack) + slack;
  }

  void require_covers(double r, double t) const {
    if (!covers(r, t)) {
      std::ostringstream os;
      os << "point (r=" << r << ", t=" << t
         << ") outside quadrature envelope (r_max=" << r_max
         << ", t_max=" << t_max << ")";
      throw EnvelopeError(os.str());
    }
  }
};

struct QuadratureOptions {
  int panel_order = 16;
  int max_doublings = 14;
  double safety = 1.1;
};

namespace detail {

struct GaussLegendre {
  std::vector<double> x; // on [-1, 1]
  std::vector<double> w;
};

inline GaussLegendre gauss_legendre(int n) {
  GaussLegendre g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.x[i] = -x;
    g.w[i] = w;
    g.x[n - 1 - i] = x;
    g.w[n - 1 - i] = w;
  }
  return g;
}

inline void composite_rule(double b, int panels, const GaussLegendre &g,
                           std::vector<double> &nodes,
                           std::vector<double> &weights) {
  nodes.clear();
  weights.clear();
  const double h = b / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * h;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      nodes.push_back(mid + 0.5 * h * g.x[i]);
      weights.push_back(0.5 * h * g.w[i]);
    }
  }
}

// The four radial integrals from which the bispinor and its gradient are
// assembled, evaluated at (r, t): sum w g(p) K(p r) with g = f e^{-iEt}.
struct ProbeValues {
  std::array<complex, 4> value{};
  std::array<double, 4> abs_sum{};
};

inline ProbeValues probe(std::span<const double> nodes,
                         std::span<const double> weights,
                         const MomentumProfile &f, double r, double t) {
  ProbeValues out;
  const double m = f.m();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double p = nodes[i];
    const double E = f.energy(p);
    const complex g = weights[i] * f.weighted(p) * std::polar(1.0, -E * t);
    const RadialKernels k = radial_kernels(p * r);
    const double p2 = p * p;
    const std::array<double, 4> shape{(E + m) * k.j0, p2 * k.j1_over_s,
                                      (E + m) * p2 * k.j1_over_s,
                                      p2 * p2 * k.d_j1_over_s};
    for (int c = 0; c < 4; ++c) {
      out.value[c] += g * shape[c];
      out.abs_sum[c] += std::abs(g) * std::abs(shape[c]);
    }
  }
  return out;
}

} // namespace detail

/// p_max = safety * sqrt(-ln eps) / l: beyond it e^{-l^2 p^2} is below
/// machine precision, which dominates any polynomial prefactor.
inline double truncation_point(const MomentumProfile &profile,
                               double safety = 1.1) {
  const double eps = std::numeric_limits<double>::epsilon();
  return safety * std::sqrt(-std::log(eps)) / profile.l();
}

/// Composite Gauss-Legendre rule on [0, p_max], doubling the panel count
/// until the probe integrals over [0, r_max] x [0, t_max] move by less
/// than rel_tol of their scale.
inline QuadratureRule build_quadrature(const MomentumProfile &profile,
                                       double t_max, double r_max,
                                       double rel_tol,
                                       const QuadratureOptions &opt = {}) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("build_quadrature: rel_tol must be in (0,1)");
  if (!(t_max >= 0.0) || !(r_max >= 0.0) || !std::isfinite(t_max) ||
      !std::isfinite(r_max))
    throw std::invalid_argument("build_quadrature: t_max, r_max must be >= 0");

  const double p_max = truncation_point(profile, opt.safety);
  const auto gl = detail::gauss_legendre(opt.panel_order);

  std::vector<std::pair<double, double>> probes;
  for (double fr : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double ft : {0.0, 0.5, 1.0}) probes.emplace_back(fr * r_max, ft * t_max);

  // start from one panel per four oscillations of the largest phase
  const double phase = p_max * (t_max + r_max) + 1.0;
  int panels = std::max(2, static_cast<int>(phase / (8.0 * std::numbers::pi)));

  auto evaluate = [&](int n_panels, std::vector<double> &nodes,
                      std::vector<double> &weights) {
    detail::composite_rule(p_max, n_panels, gl, nodes, weights);
    std::vector<detail::ProbeValues> vals;
    vals.reserve(probes.size());
    for (auto [r, t] : probes)
      vals.push_back(detail::probe(nodes, weights, profile, r, t));
    return vals;
  };

  std::vector<double> nodes, weights, next_nodes, next_weights;
  auto current = evaluate(panels, nodes, weights);
  const double eps = std::numeric_limits<double>::epsilon();

  for (int d = 0; d < opt.max_doublings; ++d) {
    auto refined = evaluate(2 * panels, next_nodes, next_weights);
    std::array<double, 4> scale{};
    for (const auto &v : refined)
      for (int c = 0; c < 4; ++c)
        scale[c] = std::max(scale[c], std::abs(v.value[c]));
    double change = 0.0, roundoff = 0.0;
    for (std::size_t k = 0; k < refined.size(); ++k)
      for (int c = 0; c < 4; ++c) {
        if (scale[c] == 0.0) continue;
        change = std::max(change, std::abs(refined[k].value[c] -
                                           current[k].value[c]) /
                                      scale[c]);
        roundoff = std::max(roundoff,
                            16.0 * eps * refined[k].abs_sum[c] / scale[c]);
      }
    panels *= 2;
    nodes.swap(next_nodes);
    weights.swap(next_weights);
    current = std::move(refined);
    if (change < rel_tol) {
      QuadratureRule rule;
      rule.nodes = std::move(nodes);
      rule.weights = std::move(weights);
      rule.p_max = p_max;
      rule.n_nodes = rule.nodes.size();
      rule.est_error = std::max(change, roundoff);
      rule.t_max = t_max;
      rule.r_max = r_max;
      if (!(rule.est_error < rel_tol))
        throw ConvergenceError("build_quadrature: roundoff exceeds rel_tol");
      return rule;
    }
  }
  std::ostringstream os;
  os << "build_quadrature: no convergence to rel_tol=" << rel_tol << " after "
     << opt.max_doublings << " doublings";
  throw ConvergenceError(os.str());
}

/// Sum of w_i * fn(p_i) over the rule.
template <typename Fn>
auto integrate(const QuadratureRule &rule, Fn &&fn)
    -> decltype(fn(0.0) * 1.0) {
  decltype(fn(0.0) * 1.0) acc{};
  for (std::size_t i = 0; i < rule.n_nodes; ++i)
    acc += rule.weights[i] * fn(rule.nodes[i]);
  return acc;
}

} // namespace diracpack
