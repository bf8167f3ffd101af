#pragma once

// Spherical Bessel mode functions j0, j1 and the smooth ratios used by the
// field integrands.

#include <array>
#include <cmath>
#include <stdexcept>

namespace diracpack {

/// Below this argument radial_mode switches to its Taylor series.
inline constexpr double kSmallArgument = 1e-3;

namespace detail {

inline double j0_series(double s) {
  const double s2 = s * s;
  return 1.0 - s2 / 6.0 + s2 * s2 / 120.0;
}

inline double j1_series(double s) {
  const double s2 = s * s;
  return s * (1.0 / 3.0 - s2 / 30.0 + s2 * s2 / 840.0);
}

// Closed forms in extended precision: sin(s)/s^2 - cos(s)/s loses about
// log10(1/s) digits to cancellation.
inline double j0_closed(double s) {
  const long double x = s;
  return static_cast<double>(std::sin(x) / x);
}

inline double j1_closed(double s) {
  const long double x = s;
  return static_cast<double>((std::sin(x) - x * std::cos(x)) / (x * x));
}

} // namespace detail

/// j0(s) for order 0, j1(s) for order 1; s >= 0.
inline double radial_mode(int order, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("radial_mode: s must be >= 0");
  switch (order) {
  case 0:
    return s < kSmallArgument ? detail::j0_series(s) : detail::j0_closed(s);
  case 1:
    return s < kSmallArgument ? detail::j1_series(s) : detail::j1_closed(s);
  default:
    throw std::invalid_argument("radial_mode: order must be 0 or 1");
  }
}

/// j0(s), j1(s)/s and (d/ds)(j1(s)/s)/s = -j2(s)/s^2, all even and smooth
/// in s. These are the only radial shapes the bispinor and its gradient need.
struct RadialKernels {
  double j0;
  double j1_over_s;
  double d_j1_over_s;
};

namespace detail {

// Taylor coefficients of the three kernels (in powers of s^2), exact
// rationals generated from the sine series.
inline constexpr int kKernelTerms = 14;

struct KernelSeries {
  std::array<double, kKernelTerms> j0{};
  std::array<double, kKernelTerms> k1{};
  std::array<double, kKernelTerms> k2{};
};

inline KernelSeries make_kernel_series() {
  KernelSeries out;
  // coefficient of s^(2n) in sin(s)/s is (-1)^n/(2n+1)!
  std::array<double, 2 * kKernelTerms + 6> inv_fact{};
  inv_fact[0] = 1.0;
  for (std::size_t k = 1; k < inv_fact.size(); ++k)
    inv_fact[k] = inv_fact[k - 1] / static_cast<double>(k);
  for (int n = 0; n < kKernelTerms; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    out.j0[n] = sign * inv_fact[2 * n + 1];
    // j1/s = sum_{n>=1} (-1)^(n+1) 2n s^(2n-2) / (2n+1)!
    const int a = n + 1;
    out.k1[n] = sign * 2.0 * a * inv_fact[2 * a + 1];
    // -j2/s^2 = sum_{n>=2} (-1)^(n+1) 2n(2n-2) s^(2n-4) / (2n+1)!
    const int b = n + 2;
    out.k2[n] = -sign * 2.0 * b * (2.0 * b - 2.0) * inv_fact[2 * b + 1];
  }
  return out;
}

inline const KernelSeries &kernel_series() {
  static const KernelSeries series = make_kernel_series();
  return series;
}

template <std::size_t N>
inline double horner(const std::array<double, N> &c, double x) {
  double acc = 0.0;
  for (std::size_t k = N; k-- > 0;) acc = acc * x + c[k];
  return acc;
}

inline constexpr double kKernelSeriesLimit = 2.0;

} // namespace detail

inline RadialKernels radial_kernels(double s) {
  if (s < detail::kKernelSeriesLimit) {
    const auto &c = detail::kernel_series();
    const double s2 = s * s;
    return {detail::horner(c.j0, s2), detail::horner(c.k1, s2),
            detail::horner(c.k2, s2)};
  }
  const double sn = std::sin(s);
  const double cs = std::cos(s);
  const double inv = 1.0 / s;
  const double inv2 = inv * inv;
  const double j0 = sn * inv;
  const double k1 = (sn - s * cs) * inv2 * inv;
  const double k2 = -((3.0 - s * s) * sn - 3.0 * s * cs) * inv2 * inv2 * inv;
  return {j0, k1, k2};
}

} // namespace diracpack
