#pragma once

// The spin-up (+z) positive-energy Dirac packet built from the radial
// momentum integral, its time derivative and spatial gradient.
//
//   psi = int dp [ (E+m) j0(pr); 0; i p z j1(pr)/r; i p (x+iy) j1(pr)/r ]
//             e^{-iEt} f(p) (times p^2 for the volume measure)
//
// All components are assembled from four radial integrals
//   A = int (E+m) j0 g,    B = int p^2 [j1(s)/s] g,
//   C = int (E+m) p^2 [j1(s)/s] g,   D = int p^4 [(j1(s)/s)'/s] g,
// with s = p r and g = f e^{-iEt}; B and D are smooth at r = 0.

#include "diracpack/bessel.hpp"
#include "diracpack/quadrature.hpp"
#include "diracpack/types.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace diracpack {

struct SpacetimePoint {
  double x = 0.0, y = 0.0, z = 0.0, t = 0.0;

  double r() const { return std::sqrt(x * x + y * y + z * z); }
};

using Mat4 = std::array<std::array<complex, 4>, 4>;

inline Bispinor apply(const Mat4 &a, const Bispinor &v) {
  Bispinor out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i] += a[i][j] * v[j];
  return out;
}

inline Mat4 multiply(const Mat4 &a, const Mat4 &b) {
  Mat4 out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

/// alpha_k = [[0, sigma_k], [sigma_k, 0]], beta = diag(1, 1, -1, -1).
struct DiracMatrices {
  std::array<Mat4, 3> alpha{};
  Mat4 beta{};

  static DiracMatrices standard() {
    DiracMatrices d;
    const std::array<std::array<std::array<complex, 2>, 2>, 3> sigma{{
        {{{0.0, 1.0}, {1.0, 0.0}}},
        {{{0.0, -I}, {I, 0.0}}},
        {{{1.0, 0.0}, {0.0, -1.0}}},
    }};
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
          d.alpha[k][i][j + 2] = sigma[k][i][j];
          d.alpha[k][i + 2][j] = sigma[k][i][j];
        }
    d.beta[0][0] = d.beta[1][1] = 1.0;
    d.beta[2][2] = d.beta[3][3] = -1.0;
    return d;
  }
};

struct FieldSample {
  Bispinor psi;
  Bispinor dpsi_dt;
  std::array<Bispinor, 3> grad_psi; // d/dx, d/dy, d/dz
  SpacetimePoint at;
};

/// Quadrature weights folded with f(p) e^{-iEt} at one fixed time. Building
/// it is O(n_nodes); each point evaluation is one pass over the nodes.
class SpectralSlice {
public:
  SpectralSlice(const MomentumProfile &profile, const QuadratureRule &rule,
                double t)
      : rule_(&rule), t_(t) {
    rule.require_covers(0.0, t);
    const double m = profile.m();
    const std::size_t n = rule.n_nodes;
    p_.resize(n);
    w_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = rule.nodes[i];
      const double E = profile.energy(p);
      const complex g =
          rule.weights[i] * profile.weighted(p) * std::polar(1.0, -E * t);
      const double p2 = p * p;
      p_[i] = p;
      w_[i] = {g,
               (E + m) * g,
               -I * E * (E + m) * g,
               p2 * g,
               -I * E * p2 * g,
               (E + m) * p2 * g,
               p2 * p2 * g};
    }
  }

  double t() const { return t_; }

  /// Klein-Gordon scalar int j0(pr) e^{-iEt} f dp; depends on r only.
  complex kg_scalar(double r) const {
    rule_->require_covers(r, t_);
    complex acc{};
    for (std::size_t i = 0; i < p_.size(); ++i)
      acc += w_[i].g * radial_kernels(p_[i] * r).j0;
    return acc;
  }

  /// The radial integrals A, dA/dt, B, dB/dt at distance r. With them
  /// psi^dagger psi = |A|^2 + r^2 |B|^2.
  struct Radial {
    complex a, a_dot, b, b_dot;
  };

  Radial radial(double r) const {
    rule_->require_covers(r, t_);
    Radial out{};
    for (std::size_t i = 0; i < p_.size(); ++i) {
      const RadialKernels k = radial_kernels(p_[i] * r);
      const Weights &w = w_[i];
      out.a += w.a * k.j0;
      out.a_dot += w.a_dot * k.j0;
      out.b += w.b * k.j1_over_s;
      out.b_dot += w.b_dot * k.j1_over_s;
    }
    return out;
  }

  FieldSample sample(double x, double y, double z) const {
    const double r = std::sqrt(x * x + y * y + z * z);
    rule_->require_covers(r, t_);
    complex A{}, Ad{}, B{}, Bd{}, C{}, D{};
    for (std::size_t i = 0; i < p_.size(); ++i) {
      const RadialKernels k = radial_kernels(p_[i] * r);
      const Weights &w = w_[i];
      A += w.a * k.j0;
      Ad += w.a_dot * k.j0;
      B += w.b * k.j1_over_s;
      Bd += w.b_dot * k.j1_over_s;
      C += w.c * k.j1_over_s;
      D += w.d * k.d_j1_over_s;
    }
    const complex xy{x, y};
    FieldSample s;
    s.at = {x, y, z, t_};
    s.psi = {{A, 0.0, I * z * B, I * xy * B}};
    s.dpsi_dt = {{Ad, 0.0, I * z * Bd, I * xy * Bd}};
    s.grad_psi[0] = {{-x * C, 0.0, I * z * x * D, I * B + I * xy * x * D}};
    s.grad_psi[1] = {{-y * C, 0.0, I * z * y * D, -B + I * xy * y * D}};
    s.grad_psi[2] = {{-z * C, 0.0, I * B + I * z * z * D, I * xy * z * D}};
    return s;
  }

  FieldSample sample(const SpacetimePoint &pt) const {
    return sample(pt.x, pt.y, pt.z);
  }

private:
  struct Weights {
    complex g, a, a_dot, b, b_dot, c, d;
  };
  const QuadratureRule *rule_;
  double t_;
  std::vector<double> p_;
  std::vector<Weights> w_;
};

inline complex kg_scalar(const SpacetimePoint &pt,
                         const MomentumProfile &profile,
                         const QuadratureRule &quad) {
  return SpectralSlice(profile, quad, pt.t).kg_scalar(pt.r());
}

inline FieldSample sample_field(const SpacetimePoint &pt,
                                const MomentumProfile &profile,
                                const QuadratureRule &quad) {
  return SpectralSlice(profile, quad, pt.t).sample(pt);
}

inline Bispinor bispinor(const SpacetimePoint &pt,
                         const MomentumProfile &profile,
                         const QuadratureRule &quad) {
  return sample_field(pt, profile, quad).psi;
}

inline Bispinor bispinor_time_derivative(const SpacetimePoint &pt,
                                         const MomentumProfile &profile,
                                         const QuadratureRule &quad) {
  return sample_field(pt, profile, quad).dpsi_dt;
}

inline std::array<Bispinor, 3>
bispinor_gradient(const SpacetimePoint &pt, const MomentumProfile &profile,
                  const QuadratureRule &quad) {
  return sample_field(pt, profile, quad).grad_psi;
}

/// (-i alpha . grad + m beta) psi
inline Bispinor dirac_hamiltonian(const FieldSample &s,
                                  const DiracMatrices &d, double m) {
  Bispinor h = m * apply(d.beta, s.psi);
  for (std::size_t k = 0; k < 3; ++k)
    h += -I * apply(d.alpha[k], s.grad_psi[k]);
  return h;
}

/// |i dpsi/dt - H psi| / |i dpsi/dt|
inline double dirac_residual(const FieldSample &s, const DiracMatrices &d,
                             double m) {
  const Bispinor lhs = I * s.dpsi_dt;
  const double denom = norm(lhs);
  if (!(denom > 0.0))
    throw DegenerateInput("dirac_residual: time derivative vanishes");
  return norm(lhs - dirac_hamiltonian(s, d, m)) / denom;
}

} // namespace diracpack
