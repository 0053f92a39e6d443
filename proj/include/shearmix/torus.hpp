#pragma once

// Torus arithmetic and the alternating random shear map family on T^2,
// parametrized by [0, 2*pi)^2. A time step applies a horizontal sinusoidal
// shear followed by a vertical one, each with its own phase.

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace shearmix {

inline constexpr double two_pi = 6.283185307179586476925286766559;

namespace kernel {

// Scalar-generic pieces so forward-mode derivative types can flow through
// the same arithmetic (see dual.hpp).

template <class T>
T wrap_value(T a) {
  using std::floor;
  T r = a - two_pi * floor(a / two_pi);
  // floor rounding can leave r == two_pi or a tiny negative value
  if (r >= T(two_pi)) r = r - T(two_pi);
  if (r < T(0)) r = r + T(two_pi);
  return r;
}

// f^H_beta / f^V_beta, in place on the coordinate pair.
template <class T>
void shear_h(T beta, double tau, T& x1, const T& x2) {
  using std::sin;
  x1 = wrap_value(x1 + tau * sin(x2 - beta));
}

template <class T>
void shear_v(T beta, double tau, const T& x1, T& x2) {
  using std::sin;
  x2 = wrap_value(x2 + tau * sin(x1 - beta));
}

// f_omega = f^V_{w2} o f^H_{w1}
template <class T>
void map_step(T w1, T w2, double tau, T& x1, T& x2) {
  shear_h(w1, tau, x1, x2);
  shear_v(w2, tau, x1, x2);
}

// f_omega^{-1} = f^H_{w1+pi} o f^V_{w2+pi}
template <class T>
void map_step_inverse(T w1, T w2, double tau, T& x1, T& x2) {
  shear_v(w2 + T(3.141592653589793238462643383279), tau, x1, x2);
  shear_h(w1 + T(3.141592653589793238462643383279), tau, x1, x2);
}

// Entries of D_x f_omega = [[1, cH], [cV, 1 + cH*cV]] with
// cH = tau*cos(x2 - w1), cV = tau*cos([f^H_{w1}(x)]_1 - w2).
template <class T>
void jacobian_factors(T w1, T w2, double tau, T x1, T x2, T& ch, T& cv) {
  using std::cos;
  using std::sin;
  ch = tau * cos(x2 - w1);
  T x1p = x1 + tau * sin(x2 - w1);
  cv = tau * cos(x1p - w2);
}

}  // namespace kernel

// Canonical representative of an angle in [0, 2*pi).
inline double wrap(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("wrap: non-finite angle");
  return kernel::wrap_value(a);
}

// Signed representative in (-pi, pi].
inline double wrap_signed(double a) {
  double r = wrap(a);
  if (r > 3.141592653589793238462643383279) r -= two_pi;
  return r;
}

struct TorusPoint {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct PhasePair {
  double w1 = 0.0;
  double w2 = 0.0;
};

// tau = shear amplitude times the switching half-period; tau >= 0, with
// tau = 0 admitted only as the degenerate identity map.
struct ShearParams {
  double tau = 1.0;
};

struct TangentVector {
  double u1 = 0.0;
  double u2 = 0.0;
};

struct Jacobian2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }

  TangentVector apply(const TangentVector& v) const {
    return {a * v.u1 + b * v.u2, c * v.u1 + d * v.u2};
  }
};

inline Jacobian2 operator*(const Jacobian2& l, const Jacobian2& r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
          l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

inline Jacobian2 operator+(const Jacobian2& l, const Jacobian2& r) {
  return {l.a + r.a, l.b + r.b, l.c + r.c, l.d + r.d};
}

// Component-wise wrapped difference y - x in (-pi, pi]; realizes the flat
// inverse exponential map, so its Euclidean norm is the torus distance.
inline TangentVector displacement(const TorusPoint& x, const TorusPoint& y) {
  return {wrap_signed(y.x1 - x.x1), wrap_signed(y.x2 - x.x2)};
}

inline double torus_distance(const TorusPoint& x, const TorusPoint& y) {
  TangentVector w = displacement(x, y);
  return std::hypot(w.u1, w.u2);
}

enum class Axis { H, V };

inline TorusPoint apply_shear(Axis axis, double beta, ShearParams tau, TorusPoint x) {
  if (axis == Axis::H) {
    kernel::shear_h(beta, tau.tau, x.x1, x.x2);
  } else {
    kernel::shear_v(beta, tau.tau, x.x1, x.x2);
  }
  return x;
}

inline TorusPoint apply_map(const PhasePair& omega, ShearParams tau, TorusPoint x) {
  kernel::map_step(omega.w1, omega.w2, tau.tau, x.x1, x.x2);
  return x;
}

inline TorusPoint apply_inverse(const PhasePair& omega, ShearParams tau, TorusPoint x) {
  kernel::map_step_inverse(omega.w1, omega.w2, tau.tau, x.x1, x.x2);
  return x;
}

inline Jacobian2 jacobian(const PhasePair& omega, ShearParams tau, const TorusPoint& x) {
  double ch, cv;
  kernel::jacobian_factors(omega.w1, omega.w2, tau.tau, x.x1, x.x2, ch, cv);
  return {1.0, ch, cv, 1.0 + ch * cv};
}

}  // namespace shearmix
