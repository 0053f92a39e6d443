#pragma once

// Fixed-width forward-mode number: value plus N partial derivatives.
// Running the map kernels on Dual<N> performs forward accumulation of the
// sensitivities through the orbit product.

#include <array>
#include <cmath>
#include <cstddef>

namespace shearmix {

template <std::size_t N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // constant, zero partials

  static Dual variable(double value, std::size_t slot) {
    Dual r(value);
    r.d[slot] = 1.0;
    return r;
  }
};

template <std::size_t N>
Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v + b.v);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

template <std::size_t N>
Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v - b.v);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

template <std::size_t N>
Dual<N> operator-(const Dual<N>& a) {
  Dual<N> r(-a.v);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = -a.d[i];
  return r;
}

template <std::size_t N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v * b.v);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

template <std::size_t N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v / b.v);
  double inv2 = 1.0 / (b.v * b.v);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
  return r;
}

template <std::size_t N> Dual<N> operator+(const Dual<N>& a, double c) { return a + Dual<N>(c); }
template <std::size_t N> Dual<N> operator+(double c, const Dual<N>& a) { return Dual<N>(c) + a; }
template <std::size_t N> Dual<N> operator-(const Dual<N>& a, double c) { return a - Dual<N>(c); }
template <std::size_t N> Dual<N> operator-(double c, const Dual<N>& a) { return Dual<N>(c) - a; }
template <std::size_t N> Dual<N> operator*(const Dual<N>& a, double c) { return a * Dual<N>(c); }
template <std::size_t N> Dual<N> operator*(double c, const Dual<N>& a) { return Dual<N>(c) * a; }
template <std::size_t N> Dual<N> operator/(const Dual<N>& a, double c) { return a / Dual<N>(c); }
template <std::size_t N> Dual<N> operator/(double c, const Dual<N>& a) { return Dual<N>(c) / a; }

template <std::size_t N> bool operator<(const Dual<N>& a, const Dual<N>& b) { return a.v < b.v; }
template <std::size_t N> bool operator<(const Dual<N>& a, double b) { return a.v < b; }
template <std::size_t N> bool operator>=(const Dual<N>& a, const Dual<N>& b) { return a.v >= b.v; }
template <std::size_t N> bool operator>=(const Dual<N>& a, double b) { return a.v >= b; }

template <std::size_t N>
Dual<N> sin(const Dual<N>& a) {
  Dual<N> r(std::sin(a.v));
  double c = std::cos(a.v);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = c * a.d[i];
  return r;
}

template <std::size_t N>
Dual<N> cos(const Dual<N>& a) {
  Dual<N> r(std::cos(a.v));
  double s = -std::sin(a.v);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = s * a.d[i];
  return r;
}

template <std::size_t N>
Dual<N> sqrt(const Dual<N>& a) {
  double s = std::sqrt(a.v);
  Dual<N> r(s);
  double g = 0.5 / s;
  for (std::size_t i = 0; i < N; ++i) r.d[i] = g * a.d[i];
  return r;
}

// Piecewise constant; derivative zero almost everywhere, which is what the
// wrapped angle arithmetic needs.
template <std::size_t N>
Dual<N> floor(const Dual<N>& a) {
  return Dual<N>(std::floor(a.v));
}

}  // namespace shearmix
