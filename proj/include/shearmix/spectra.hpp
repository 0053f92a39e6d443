#pragma once

// Derivative-cocycle diagnostics: projective dynamics on T^2 x S^1,
// Lyapunov exponent estimation, and the twisted projective semigroup
//   P_q phi(x, v) = E |D_x f_w v|^{-q} phi(f_w(x), D_x f_w v / |D_x f_w v|)
// discretized by grid collocation with trilinear interpolation and per-node
// Monte Carlo phase averaging.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "shearmix/noise.hpp"
#include "shearmix/parallel.hpp"
#include "shearmix/torus.hpp"

namespace shearmix {

struct ProjectivePoint {
  TorusPoint x;
  double v1 = 1.0;
  double v2 = 0.0;
};

inline ProjectivePoint projective_step(const PhasePair& omega, ShearParams tau,
                                       const ProjectivePoint& p) {
  Jacobian2 a = jacobian(omega, tau, p.x);
  double u1 = a.a * p.v1 + a.b * p.v2;
  double u2 = a.c * p.v1 + a.d * p.v2;
  double n = std::hypot(u1, u2);
  assert(n > 0.0 && "invertible Jacobian cannot annihilate a unit vector");
  return {apply_map(omega, tau, p.x), u1 / n, u2 / n};
}

struct LyapunovEstimate {
  double lambda1 = 0.0;
  double lambda2 = 0.0;  // -lambda1 by the determinant-1 identity
  long steps = 0;
  double ci_halfwidth = 0.0;  // bootstrap 95% on lambda1
  // cross-checks from a QR-reorthonormalized 2-frame
  double frame_lambda1 = 0.0;
  double frame_lambda2 = 0.0;
  std::vector<double> per_trajectory;  // tracked-vector estimates
};

namespace detail {

struct TrajectoryExponents {
  double tracked = 0.0;
  double frame1 = 0.0;
  double frame2 = 0.0;
};

inline TrajectoryExponents lyapunov_one_trajectory(ShearParams tau, long steps,
                                                   PhaseCursor cur, double v01, double v02) {
  PhasePair start = cur.next();
  TorusPoint x{start.w1, start.w2};
  double v1 = v01, v2 = v02;
  // 2-frame columns
  double q11 = 1.0, q21 = 0.0, q12 = 0.0, q22 = 1.0;
  double acc = 0.0, acc1 = 0.0, acc2 = 0.0;
  for (long n = 0; n < steps; ++n) {
    PhasePair w = cur.next();
    Jacobian2 a = jacobian(w, tau, x);
    double u1 = a.a * v1 + a.b * v2;
    double u2 = a.c * v1 + a.d * v2;
    double nrm = std::hypot(u1, u2);
    acc += std::log(nrm);
    v1 = u1 / nrm;
    v2 = u2 / nrm;
    // frame update with Gram-Schmidt
    double b11 = a.a * q11 + a.b * q21, b21 = a.c * q11 + a.d * q21;
    double b12 = a.a * q12 + a.b * q22, b22 = a.c * q12 + a.d * q22;
    double r11 = std::hypot(b11, b21);
    q11 = b11 / r11;
    q21 = b21 / r11;
    double r12 = q11 * b12 + q21 * b22;
    double p1 = b12 - r12 * q11, p2 = b22 - r12 * q21;
    double r22 = std::hypot(p1, p2);
    q12 = p1 / r22;
    q22 = p2 / r22;
    acc1 += std::log(r11);
    acc2 += std::log(r22);
    x = apply_map(w, tau, x);
  }
  return {acc / steps, acc1 / steps, acc2 / steps};
}

inline std::pair<double, double> bootstrap_mean_ci(const std::vector<double>& samples,
                                                   Seed seed, int resamples = 1000) {
  std::size_t n = samples.size();
  if (n < 2) return {0.0, 0.0};
  PhaseSequence rng = derive_stream(seed, 0x626f6f74ULL);  // dedicated stream
  std::vector<double> means(resamples);
  for (int b = 0; b < resamples; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto idx = static_cast<std::size_t>(rng.uniform_at(static_cast<std::uint64_t>(b) * n + i) * n);
      if (idx >= n) idx = n - 1;
      s += samples[idx];
    }
    means[b] = s / n;
  }
  std::sort(means.begin(), means.end());
  double lo = means[static_cast<std::size_t>(0.025 * (resamples - 1))];
  double hi = means[static_cast<std::size_t>(0.975 * (resamples - 1))];
  return {(lo + hi) / 2.0, (hi - lo) / 2.0};
}

}  // namespace detail

inline LyapunovEstimate lyapunov_estimate(ShearParams tau, long steps, Seed seed, int ensemble,
                                          double v01 = 1.0, double v02 = 0.0) {
  if (steps < 1000) throw std::invalid_argument("lyapunov_estimate: steps must be >= 1000");
  if (ensemble < 1) throw std::invalid_argument("lyapunov_estimate: ensemble must be >= 1");
  std::vector<detail::TrajectoryExponents> per(ensemble);
  parallel_for(static_cast<std::size_t>(ensemble), [&](std::size_t k) {
    per[k] = detail::lyapunov_one_trajectory(tau, steps, PhaseCursor(derive_stream(seed, k)),
                                             v01, v02);
  });
  LyapunovEstimate est;
  est.steps = steps;
  est.per_trajectory.resize(ensemble);
  double m = 0.0, f1 = 0.0, f2 = 0.0;
  for (int k = 0; k < ensemble; ++k) {
    est.per_trajectory[k] = per[k].tracked;
    m += per[k].tracked;
    f1 += per[k].frame1;
    f2 += per[k].frame2;
  }
  est.lambda1 = m / ensemble;
  est.lambda2 = -est.lambda1;
  est.frame_lambda1 = f1 / ensemble;
  est.frame_lambda2 = f2 / ensemble;
  est.ci_halfwidth = detail::bootstrap_mean_ci(est.per_trajectory, seed).second;
  return est;
}

struct SpectralGrid {
  int nx = 0, ny = 0, nv = 0;
  std::vector<double> values;  // index ((ix*ny)+iy)*nv+iv

  static SpectralGrid constant(int nx, int ny, int nv, double c = 1.0) {
    SpectralGrid g{nx, ny, nv, {}};
    g.values.assign(static_cast<std::size_t>(nx) * ny * nv, c);
    return g;
  }

  std::size_t size() const { return values.size(); }

  // Periodic trilinear interpolation; theta parametrizes S^1 by [0, 2*pi).
  double sample(double x1, double x2, double theta) const {
    double fi = kernel::wrap_value(x1) / two_pi * nx;
    double fj = kernel::wrap_value(x2) / two_pi * ny;
    double fk = kernel::wrap_value(theta) / two_pi * nv;
    int i0 = static_cast<int>(fi), j0 = static_cast<int>(fj), k0 = static_cast<int>(fk);
    double di = fi - i0, dj = fj - j0, dk = fk - k0;
    if (i0 >= nx) { i0 = 0; di = 0.0; }
    if (j0 >= ny) { j0 = 0; dj = 0.0; }
    if (k0 >= nv) { k0 = 0; dk = 0.0; }
    int i1 = (i0 + 1) % nx, j1 = (j0 + 1) % ny, k1 = (k0 + 1) % nv;
    auto at = [&](int i, int j, int k) {
      return values[(static_cast<std::size_t>(i) * ny + j) * nv + k];
    };
    double c00 = at(i0, j0, k0) * (1 - dk) + at(i0, j0, k1) * dk;
    double c01 = at(i0, j1, k0) * (1 - dk) + at(i0, j1, k1) * dk;
    double c10 = at(i1, j0, k0) * (1 - dk) + at(i1, j0, k1) * dk;
    double c11 = at(i1, j1, k0) * (1 - dk) + at(i1, j1, k1) * dk;
    return (c00 * (1 - dj) + c01 * dj) * (1 - di) + (c10 * (1 - dj) + c11 * dj) * di;
  }
};

inline double psi_positivity_check(const SpectralGrid& psi) {
  double m = psi.values.empty() ? 0.0 : psi.values[0];
  for (double v : psi.values) m = std::min(m, v);
  return m;
}

struct PowerIterationResult {
  double r_of_q = 0.0;
  SpectralGrid psi;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// One application of the discretized P_q to phi, Monte Carlo averaged with
// mc_samples phase draws per node (stratified jitter when mc is a square).
// Node sample sets are pure functions of (seed, node), fixed across
// iterations, so the iteration targets one deterministic operator.
namespace detail {

inline void apply_twisted_operator(double q, ShearParams tau, const SpectralGrid& phi,
                                   int mc_samples, Seed seed, SpectralGrid& out) {
  const int nx = phi.nx, ny = phi.ny, nv = phi.nv;
  const int strat = [&] {
    int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(mc_samples))));
    return (k * k == mc_samples) ? k : 0;
  }();
  parallel_for(phi.size(), [&](std::size_t node) {
    int iv = static_cast<int>(node % nv);
    int iy = static_cast<int>((node / nv) % ny);
    int ix = static_cast<int>(node / (static_cast<std::size_t>(nv) * ny));
    double x1 = two_pi * ix / nx;
    double x2 = two_pi * iy / ny;
    double th = two_pi * iv / nv;
    double v1 = std::cos(th), v2 = std::sin(th);
    PhaseSequence stream = derive_stream(seed, node);
    double acc = 0.0;
    for (int s = 0; s < mc_samples; ++s) {
      double u1 = stream.uniform_at(2 * static_cast<std::uint64_t>(s));
      double u2 = stream.uniform_at(2 * static_cast<std::uint64_t>(s) + 1);
      double w1, w2;
      if (strat > 0) {
        w1 = (s / strat + u1) / strat * two_pi;
        w2 = (s % strat + u2) / strat * two_pi;
      } else {
        w1 = u1 * two_pi;
        w2 = u2 * two_pi;
      }
      double ch, cv;
      kernel::jacobian_factors(w1, w2, tau.tau, x1, x2, ch, cv);
      double t1 = v1 + ch * v2;
      double t2 = cv * v1 + (1.0 + ch * cv) * v2;
      double nrm = std::hypot(t1, t2);
      double g1 = x1, g2 = x2;
      kernel::map_step(w1, w2, tau.tau, g1, g2);
      double thp = std::atan2(t2, t1);
      double weight = (q == 0.0) ? 1.0 : std::exp(-q * std::log(nrm));
      acc += weight * phi.sample(g1, g2, thp);
    }
    out.values[node] = acc / mc_samples;
  });
}

}  // namespace detail

inline PowerIterationResult twisted_power_iteration(double q, ShearParams tau, int nx, int ny,
                                                    int nv, int mc_samples, int max_iter,
                                                    double tol, Seed seed) {
  if (std::abs(q) > 0.5) throw std::invalid_argument("twisted_power_iteration: |q| must be <= 0.5");
  if (nx < 16 || ny < 16 || nv < 16)
    throw std::invalid_argument("twisted_power_iteration: grid resolutions must be >= 16");
  if (mc_samples < 1 || max_iter < 1)
    throw std::invalid_argument("twisted_power_iteration: mc_samples and max_iter must be >= 1");

  PowerIterationResult res;
  res.psi = SpectralGrid::constant(nx, ny, nv);
  SpectralGrid next = SpectralGrid::constant(nx, ny, nv, 0.0);
  std::vector<double> growth;
  growth.reserve(max_iter);
  for (int it = 0; it < max_iter; ++it) {
    detail::apply_twisted_operator(q, tau, res.psi, mc_samples, seed, next);
    double g = 0.0;
    for (double v : next.values) g = std::max(g, std::abs(v));
    if (g == 0.0) throw std::runtime_error("twisted_power_iteration: operator annihilated iterate");
    growth.push_back(g);
    double resid = 0.0;
    for (std::size_t i = 0; i < next.values.size(); ++i) {
      double scaled = next.values[i] / g;
      resid = std::max(resid, std::abs(scaled - res.psi.values[i]));
      res.psi.values[i] = scaled;
    }
    res.iterations = it + 1;
    res.residual = resid;
    if (resid < tol && it + 1 >= 10) {
      res.converged = true;
      break;
    }
  }
  std::size_t tail = std::min<std::size_t>(10, growth.size());
  double lg = 0.0;
  for (std::size_t i = growth.size() - tail; i < growth.size(); ++i) lg += std::log(growth[i]);
  res.r_of_q = std::exp(lg / tail);
  return res;
}

struct MomentSpectrumReport {
  std::vector<double> q_values;
  std::vector<double> r_of_q;
  std::vector<SpectralGrid> psi_q;
  std::vector<int> iterations;
  std::vector<double> residual;
  std::vector<bool> converged;
};

inline MomentSpectrumReport moment_spectrum(const std::vector<double>& q_values, ShearParams tau,
                                            int nx, int ny, int nv, int mc_samples, int max_iter,
                                            double tol, Seed seed) {
  MomentSpectrumReport rep;
  for (double q : q_values) {
    PowerIterationResult r = twisted_power_iteration(q, tau, nx, ny, nv, mc_samples, max_iter, tol, seed);
    rep.q_values.push_back(q);
    rep.r_of_q.push_back(r.r_of_q);
    rep.psi_q.push_back(std::move(r.psi));
    rep.iterations.push_back(r.iterations);
    rep.residual.push_back(r.residual);
    rep.converged.push_back(r.converged);
  }
  return rep;
}

}  // namespace shearmix
