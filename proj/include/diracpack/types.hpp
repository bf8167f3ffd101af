#pragma once

// Small value types shared by every diracpack header: 3-vectors, bispinors
// and the exception classes the library throws.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace diracpack {

using complex = std::complex<double>;

inline constexpr complex I{0.0, 1.0};

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3 &a, const Vec3 &b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }

inline Vec3 operator*(double s, const Vec3 &a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline Vec3 operator+(const Vec3 &a, const Vec3 &b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3 &a, const Vec3 &b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

/// Four complex amplitudes in the standard Dirac representation.
struct Bispinor {
  std::array<complex, 4> c{};

  complex &operator[](std::size_t k) { return c[k]; }
  const complex &operator[](std::size_t k) const { return c[k]; }

  Bispinor &operator+=(const Bispinor &o) {
    for (std::size_t k = 0; k < 4; ++k) c[k] += o.c[k];
    return *this;
  }
  Bispinor &operator-=(const Bispinor &o) {
    for (std::size_t k = 0; k < 4; ++k) c[k] -= o.c[k];
    return *this;
  }
  Bispinor &operator*=(complex s) {
    for (auto &v : c) v *= s;
    return *this;
  }

  friend Bispinor operator+(Bispinor a, const Bispinor &b) { return a += b; }
  friend Bispinor operator-(Bispinor a, const Bispinor &b) { return a -= b; }
  friend Bispinor operator*(complex s, Bispinor a) { return a *= s; }
  friend Bispinor operator*(double s, Bispinor a) { return a *= complex{s}; }
};

/// Hermitian inner product a^dagger b.
inline complex inner(const Bispinor &a, const Bispinor &b) {
  complex s{};
  for (std::size_t k = 0; k < 4; ++k) s += std::conj(a[k]) * b[k];
  return s;
}

inline double norm2(const Bispinor &a) {
  double s = 0.0;
  for (const auto &v : a.c) s += std::norm(v);
  return s;
}

inline double norm(const Bispinor &a) { return std::sqrt(norm2(a)); }

inline bool is_finite(const Bispinor &a) {
  for (const auto &v : a.c)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

// Errors. Invalid arguments use std::invalid_argument directly.

/// An iterative refinement did not reach the requested tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point lies outside the (t, r) envelope a quadrature rule was built for.
struct EnvelopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input that carries no information (zero field, zero density).
struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace diracpack
