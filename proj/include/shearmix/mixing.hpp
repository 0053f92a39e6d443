#pragma once

// Passive-scalar transport by exact Lagrangian backtracking, negative
// Sobolev mixing norms, correlation decay, and the empirical near-diagonal
// drift check for the two-point chain.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shearmix/fft.hpp"
#include "shearmix/noise.hpp"
#include "shearmix/parallel.hpp"
#include "shearmix/spectra.hpp"
#include "shearmix/torus.hpp"

namespace shearmix {

using ScalarFn = std::function<double(double, double)>;

struct ScalarGridField {
  int n = 0;
  std::vector<double> samples;  // samples[i*n + j] = value at (2 pi i / n, 2 pi j / n)

  double& at(int i, int j) { return samples[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return samples[static_cast<std::size_t>(i) * n + j]; }
};

struct FourierField {
  int n = 0;
  // coeffs in FFT layout: frequency k in {-n/2, ..., n/2-1} stored at k mod n;
  // convention rho_k = (2 pi)^{-2} integral rho e^{-i k.x} dx
  std::vector<std::complex<double>> coeffs;

  std::complex<double> at(int k1, int k2) const {
    int i = ((k1 % n) + n) % n;
    int j = ((k2 % n) + n) % n;
    return coeffs[static_cast<std::size_t>(i) * n + j];
  }
};

inline ScalarGridField sample_field(const ScalarFn& f, int n) {
  ScalarGridField g{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    double x1 = two_pi * static_cast<double>(i) / n;
    for (int j = 0; j < n; ++j) g.samples[i * n + j] = f(x1, two_pi * j / n);
  });
  return g;
}

inline FourierField to_fourier(const ScalarGridField& field) {
  const int n = field.n;
  FourierField f{n, std::vector<std::complex<double>>(field.samples.size())};
  for (std::size_t i = 0; i < field.samples.size(); ++i) f.coeffs[i] = field.samples[i];
  fft2_inplace(f.coeffs, n);
  const double inv = 1.0 / (static_cast<double>(n) * n);
  for (auto& c : f.coeffs) c *= inv;
  return f;
}

// Quadrature L^2 norm with respect to normalized measure dx/(2 pi)^2; equals
// sqrt(sum_k |rho_k|^2) by the discrete Parseval identity.
inline double l2_norm(const ScalarGridField& field) {
  double s = 0.0;
  for (double v : field.samples) s += v * v;
  return std::sqrt(s / static_cast<double>(field.samples.size()));
}

inline double grid_mean(const ScalarGridField& field) {
  double s = 0.0;
  for (double v : field.samples) s += v;
  return s / static_cast<double>(field.samples.size());
}

// || rho ||_{H^{-s}} = sqrt( sum_{k != 0} |k|^{-2s} |rho_k|^2 ).
inline double hs_norm(const ScalarGridField& field, double s) {
  if (s <= 0.0) throw std::invalid_argument("hs_norm: s must be positive");
  FourierField f = to_fourier(field);
  const int n = field.n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    int k1 = (i < n / 2) ? i : i - n;
    for (int j = 0; j < n; ++j) {
      int k2 = (j < n / 2) ? j : j - n;
      if (k1 == 0 && k2 == 0) continue;
      double k2norm = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
      acc += std::pow(k2norm, -s) * std::norm(f.coeffs[static_cast<std::size_t>(i) * n + j]);
    }
  }
  return std::sqrt(acc);
}

// (f^n)^{-1}(x): inverse maps applied in reverse phase order.
inline TorusPoint backtrack(TorusPoint x, const std::vector<PhasePair>& phases, ShearParams tau) {
  for (auto it = phases.rbegin(); it != phases.rend(); ++it) x = apply_inverse(*it, tau, x);
  return x;
}

// rho_n(x) = rho_0((f^n)^{-1} x), sampled on the grid with no interpolation.
inline ScalarGridField advect_exact(const ScalarFn& rho0, const std::vector<PhasePair>& phases,
                                    ShearParams tau, int n_grid) {
  ScalarGridField g{n_grid, std::vector<double>(static_cast<std::size_t>(n_grid) * n_grid)};
  parallel_for(static_cast<std::size_t>(n_grid), [&](std::size_t i) {
    double x1 = two_pi * static_cast<double>(i) / n_grid;
    for (int j = 0; j < n_grid; ++j) {
      TorusPoint p = backtrack({x1, two_pi * j / n_grid}, phases, tau);
      g.samples[i * n_grid + j] = rho0(p.x1, p.x2);
    }
  });
  return g;
}

struct MixingReport {
  double s = 1.0;
  std::vector<double> norms;  // H^{-s} per step, steps 0..n
  double fitted_alpha = 0.0;
  int fit_window_start = 0;
  int fit_window_end = 0;  // inclusive
  double r_squared = 0.0;
  double floor = 0.0;
  bool fitted = false;  // false when the above-floor window is shorter than 5
};

inline MixingReport mixing_decay(const ScalarFn& rho0, ShearParams tau, Seed seed, int steps,
                                 int n_grid, double s, double floor_factor = 4.0) {
  if (steps < 20) throw std::invalid_argument("mixing_decay: steps must be >= 20");
  MixingReport rep;
  rep.s = s;

  std::vector<PhasePair> phases;
  PhaseCursor cur(derive_stream(seed, 0));
  for (int k = 0; k < steps; ++k) phases.push_back(cur.next());

  ScalarGridField initial = sample_field(rho0, n_grid);
  rep.floor = floor_factor * std::pow(two_pi / n_grid, std::min(s, 1.0)) * l2_norm(initial);

  rep.norms.resize(steps + 1);
  for (int m = 0; m <= steps; ++m) {
    std::vector<PhasePair> prefix(phases.begin(), phases.begin() + m);
    ScalarGridField f = advect_exact(rho0, prefix, tau, n_grid);
    rep.norms[m] = hs_norm(f, s);
  }

  int w = 0;
  while (w <= steps && rep.norms[w] > rep.floor) ++w;
  rep.fit_window_start = 0;
  rep.fit_window_end = w - 1;
  if (w < 5) return rep;  // flagged unfit

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int m = 0; m < w; ++m) {
    double y = std::log(rep.norms[m]);
    sx += m;
    sy += y;
    sxx += static_cast<double>(m) * m;
    sxy += m * y;
  }
  double denom = w * sxx - sx * sx;
  double slope = (w * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / w;
  double ss_res = 0, ss_tot = 0, ymean = sy / w;
  for (int m = 0; m < w; ++m) {
    double y = std::log(rep.norms[m]);
    double pred = intercept + slope * m;
    ss_res += (y - pred) * (y - pred);
    ss_tot += (y - ymean) * (y - ymean);
  }
  rep.fitted_alpha = -slope;
  rep.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  rep.fitted = true;
  return rep;
}

// |Cor_n| = |(2 pi)^{-2} integral phi(x) psi(f^n x) dx| for each n = 0..nmax,
// by grid quadrature over forward orbits of the nodes.
inline std::vector<double> correlation_series(const ScalarFn& phi, const ScalarFn& psi,
                                              ShearParams tau, Seed seed, int nmax,
                                              int quadrature_grid) {
  const int n = quadrature_grid;
  std::vector<PhasePair> phases;
  PhaseCursor cur(derive_stream(seed, 0));
  for (int k = 0; k < nmax; ++k) phases.push_back(cur.next());

  std::vector<double> phi0(static_cast<std::size_t>(n) * n);
  std::vector<double> px(static_cast<std::size_t>(n) * n), py(px.size());
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    double x1 = two_pi * static_cast<double>(i) / n;
    for (int j = 0; j < n; ++j) {
      phi0[i * n + j] = phi(x1, two_pi * j / n);
      px[i * n + j] = x1;
      py[i * n + j] = two_pi * j / n;
    }
  });

  std::vector<double> out(nmax + 1);
  std::vector<double> partial(n);
  for (int m = 0; m <= nmax; ++m) {
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += phi0[i * n + j] * psi(px[i * n + j], py[i * n + j]);
      partial[i] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    out[m] = std::abs(total / (static_cast<double>(n) * n));
    if (m == nmax) break;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      for (int j = 0; j < n; ++j) {
        TorusPoint p{px[i * n + j], py[i * n + j]};
        p = apply_map(phases[m], tau, p);
        px[i * n + j] = p.x1;
        py[i * n + j] = p.x2;
      }
    });
  }
  return out;
}

inline double correlation(const ScalarFn& phi, const ScalarFn& psi, ShearParams tau, Seed seed,
                          int n, int quadrature_grid) {
  return correlation_series(phi, psi, tau, seed, n, quadrature_grid).back();
}

struct DriftCheckReport {
  double p = 0.1;
  double s_star = 0.25;
  int samples = 0;
  double mean_log_ratio = 0.0;
  double ci = 0.0;  // bootstrap 95% halfwidth
  double gamma_hat = 1.0;
  std::vector<double> v_before;
  std::vector<double> ev_after;
  std::vector<double> log_ratio;
};

// Drift function V(x, y) = d(x, y)^{-p} psi_p(x, w_hat(x, y)) near the
// diagonal, with w_hat the normalized wrapped difference.
inline double drift_function(const TorusPoint& x, const TorusPoint& y, double p,
                             const SpectralGrid& psi) {
  TangentVector w = displacement(x, y);
  double d = std::hypot(w.u1, w.u2);
  double theta = std::atan2(w.u2, w.u1);
  return std::pow(d, -p) * psi.sample(x.x1, x.x2, theta);
}

inline DriftCheckReport two_point_drift_check(double p, double s_star, ShearParams tau, int pairs,
                                              int mc_per_pair, const SpectralGrid& psi_p,
                                              Seed seed) {
  if (p <= 0.0 || p > 0.5) throw std::invalid_argument("two_point_drift_check: need 0 < p <= 0.5");
  if (s_star <= 0.0 || s_star >= 3.141592653589793238462643383279)
    throw std::invalid_argument("two_point_drift_check: need 0 < s_star < pi");
  if (psi_positivity_check(psi_p) <= 0.0)
    throw std::invalid_argument("two_point_drift_check: psi_p must be strictly positive");

  DriftCheckReport rep;
  rep.p = p;
  rep.s_star = s_star;
  rep.samples = pairs;
  rep.v_before.resize(pairs);
  rep.ev_after.resize(pairs);
  rep.log_ratio.resize(pairs);

  parallel_for(static_cast<std::size_t>(pairs), [&](std::size_t k) {
    PhaseCursor cur(derive_stream(seed, k));
    double x1 = cur.next_uniform() * two_pi;
    double x2 = cur.next_uniform() * two_pi;
    double r = 0.0, ang = 0.0;
    do {
      r = s_star * std::sqrt(cur.next_uniform());
      ang = cur.next_uniform() * two_pi;
    } while (r < 1e-12);
    TorusPoint x{x1, x2};
    TorusPoint y{wrap(x1 + r * std::cos(ang)), wrap(x2 + r * std::sin(ang))};
    double v0 = drift_function(x, y, p, psi_p);
    // pairwise sum: averaging identical summands stays exact, so the
    // identity map yields ratio 1 with no round-off
    std::vector<double> vals(mc_per_pair);
    for (int s = 0; s < mc_per_pair; ++s) {
      PhasePair w = cur.next();
      vals[s] = drift_function(apply_map(w, tau, x), apply_map(w, tau, y), p, psi_p);
    }
    for (int width = 1; width < mc_per_pair; width *= 2)
      for (int s = 0; s + width < mc_per_pair; s += 2 * width) vals[s] += vals[s + width];
    double ev = vals[0] / mc_per_pair;
    rep.v_before[k] = v0;
    rep.ev_after[k] = ev;
    rep.log_ratio[k] = std::log(ev / v0);
  });

  double m = 0.0;
  for (double v : rep.log_ratio) m += v;
  rep.mean_log_ratio = m / pairs;
  rep.ci = detail::bootstrap_mean_ci(rep.log_ratio, seed).second;
  rep.gamma_hat = std::exp(rep.mean_log_ratio);
  return rep;
}

// Binary PGM (P5), linear min-max scaling, rows from x2 = 0.
inline std::vector<unsigned char> snapshot(const ScalarGridField& field) {
  const int n = field.n;
  std::string header = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  double lo = field.samples[0], hi = field.samples[0];
  for (double v : field.samples) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.reserve(out.size() + field.samples.size());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      double v = field.at(c, r);  // row r is the line x2 = 2 pi r / n
      unsigned char b = 128;
      if (hi > lo) b = static_cast<unsigned char>(std::lround((v - lo) / (hi - lo) * 255.0));
      out.push_back(b);
    }
  }
  return out;
}

}  // namespace shearmix
