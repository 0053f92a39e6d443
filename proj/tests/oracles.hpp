#pragma once

// Test-side oracles, independent of the library's analytic paths.

#include <cmath>
#include <complex>
#include <vector>

#include "shearmix/noise.hpp"
#include "shearmix/torus.hpp"

namespace oracles {

using shearmix::PhasePair;
using shearmix::ShearParams;
using shearmix::TorusPoint;

// Central finite differences of apply_map with respect to the point.
inline shearmix::Jacobian2 fd_map_jacobian(const PhasePair& w, ShearParams tau,
                                           const TorusPoint& x, double h = 1e-6) {
  auto col = [&](double d1, double d2) {
    TorusPoint p = shearmix::apply_map(w, tau, {shearmix::wrap(x.x1 + d1), shearmix::wrap(x.x2 + d2)});
    TorusPoint m = shearmix::apply_map(w, tau, {shearmix::wrap(x.x1 - d1), shearmix::wrap(x.x2 - d2)});
    shearmix::TangentVector diff = shearmix::displacement(m, p);
    return std::pair<double, double>{diff.u1 / (2 * h), diff.u2 / (2 * h)};
  };
  auto [a, c] = col(h, 0.0);
  auto [b, d] = col(0.0, h);
  return {a, b, c, d};
}

// Finite differences of an n-fold composition with respect to the point.
inline shearmix::Jacobian2 fd_orbit_jacobian(const std::vector<PhasePair>& ws, ShearParams tau,
                                             const TorusPoint& x, double h = 1e-6) {
  auto run = [&](TorusPoint p) {
    for (const auto& w : ws) p = shearmix::apply_map(w, tau, p);
    return p;
  };
  auto col = [&](double d1, double d2) {
    TorusPoint p = run({shearmix::wrap(x.x1 + d1), shearmix::wrap(x.x2 + d2)});
    TorusPoint m = run({shearmix::wrap(x.x1 - d1), shearmix::wrap(x.x2 - d2)});
    shearmix::TangentVector diff = shearmix::displacement(m, p);
    return std::pair<double, double>{diff.u1 / (2 * h), diff.u2 / (2 * h)};
  };
  auto [a, c] = col(h, 0.0);
  auto [b, d] = col(0.0, h);
  return {a, b, c, d};
}

// Direct O(n^4) discrete Fourier transform quadrature of the H^{-s} norm for
// small grids: rho_k = n^{-2} sum_x rho(x) e^{-i k.x}.
inline double direct_hs_norm(const std::vector<double>& samples, int n, double s) {
  double acc = 0.0;
  for (int k1 = -n / 2; k1 < n / 2; ++k1) {
    for (int k2 = -n / 2; k2 < n / 2; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      std::complex<double> c(0.0, 0.0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double phase = -shearmix::two_pi * (static_cast<double>(k1) * i + static_cast<double>(k2) * j) / n;
          c += samples[static_cast<std::size_t>(i) * n + j] *
               std::complex<double>(std::cos(phase), std::sin(phase));
        }
      }
      c /= static_cast<double>(n) * n;
      acc += std::pow(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2, -s) * std::norm(c);
    }
  }
  return std::sqrt(acc);
}

// Two-sided Kolmogorov-Smirnov statistic against Uniform[0, 2 pi).
inline double ks_uniform_statistic(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double cdf = values[i] / shearmix::two_pi;
    d = std::max(d, std::abs((i + 1) / n - cdf));
    d = std::max(d, std::abs(cdf - i / n));
  }
  return d;
}

}  // namespace oracles
