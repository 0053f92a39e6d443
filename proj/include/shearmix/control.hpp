#pragma once

// Constructive steering: exact one-point plans, projective and two-point
// approximate plans, the zeta-relation solver for direction-preserving rigid
// motions, and the equidistribution scan that completes them. Every plan is
// self-certifying: achieved_error is measured by replaying the phases
// through the map, never trusted from the construction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "shearmix/spectra.hpp"
#include "shearmix/torus.hpp"

namespace shearmix {

inline constexpr double pi_const = 3.141592653589793238462643383279;

struct SteeringPlan {
  std::vector<PhasePair> phases;
  double achieved_error = std::numeric_limits<double>::infinity();
  int steps = 0;
  bool ok = false;
  std::string note;
};

struct ZetaPair {
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  bool ok = false;
  double scan_lo = 0.0;  // scanned admissible bounds for zeta^2
  double scan_hi = 0.0;
  std::string note;
};

inline TorusPoint replay_plan(const SteeringPlan& plan, TorusPoint x, ShearParams tau) {
  for (const auto& w : plan.phases) x = apply_map(w, tau, x);
  return x;
}

inline ProjectivePoint replay_plan_projective(const SteeringPlan& plan, ProjectivePoint p,
                                              ShearParams tau) {
  for (const auto& w : plan.phases) p = projective_step(w, tau, p);
  return p;
}

// Distance on T^2 x S^1 identifying v ~ -v.
inline double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  double base = torus_distance(a.x, b.x);
  double dplus = std::hypot(a.v1 - b.v1, a.v2 - b.v2);
  double dminus = std::hypot(a.v1 + b.v1, a.v2 + b.v2);
  double dir = std::min(dplus, dminus);
  return std::sqrt(base * base + dir * dir);
}

// --- one-point exact controllability -------------------------------------

inline SteeringPlan steer_one_point(const TorusPoint& x, const TorusPoint& y, ShearParams tau) {
  SteeringPlan plan;
  if (tau.tau <= 0.0) {
    if (torus_distance(x, y) == 0.0) {
      plan.ok = true;
      plan.achieved_error = 0.0;
      plan.note = "degenerate shear, already at target";
      return plan;
    }
    plan.note = "unreachable: tau = 0 and x != y";
    return plan;
  }
  const int n = static_cast<int>(std::ceil(4.0 * pi_const / tau.tau));
  TangentVector d = displacement(x, y);
  const double t1 = d.u1 / n, t2 = d.u2 / n;  // per-step translation, |t_i| <= pi/n <= tau/4
  TorusPoint z = x;
  for (int k = 0; k < n; ++k) {
    double w1 = wrap(z.x2 - std::asin(t1 / tau.tau));
    double x1p = wrap(z.x1 + tau.tau * std::sin(z.x2 - w1));
    double w2 = wrap(x1p - std::asin(t2 / tau.tau));
    plan.phases.push_back({w1, w2});
    z = apply_map(plan.phases.back(), tau, z);
  }
  plan.steps = static_cast<int>(plan.phases.size());
  plan.achieved_error = torus_distance(replay_plan(plan, x, tau), y);
  plan.ok = plan.achieved_error < 1e-9;
  return plan;
}

// --- rigid phases ---------------------------------------------------------

// Phase for which the shear changes the pair separation along its own axis
// by exactly 2 tau sin([x-y]_other/2) cos(gamma); gamma = pi/2 leaves it
// unchanged.
inline double rigid_phase(const TorusPoint& x, const TorusPoint& y, double gamma, Axis axis) {
  if (axis == Axis::H) return wrap((x.x2 + y.x2) / 2.0 - gamma);
  return wrap((x.x1 + y.x1) / 2.0 - gamma);
}

// --- projective alignment (forward maps) ----------------------------------

// Drives the tangent direction to the diagonal (1,1)/sqrt(2) (up to sign) by
// choosing one off-diagonal Jacobian factor zero and the other a fixed small
// increment each step. Nominally 10 steps; extended when the per-step
// increment would exceed tau.
inline SteeringPlan align_projective_angle(const ProjectivePoint& p, ShearParams tau) {
  SteeringPlan plan;
  if (tau.tau <= 0.0) {
    plan.note = "tau must be positive";
    return plan;
  }
  const bool use_h = std::abs(p.v2) >= std::abs(p.v1);
  // scale the tracked tangent so the driven coordinate reaches the other
  const double ratio = use_h ? p.v1 / p.v2 : p.v2 / p.v1;
  const double delta = 1.0 - ratio;  // total increment
  int n = 10;
  if (std::abs(delta) / n > tau.tau) n = static_cast<int>(std::ceil(std::abs(delta) / tau.tau));
  const double c = delta / n;

  ProjectivePoint q = p;
  for (int k = 0; k < n; ++k) {
    const double theta = std::acos(std::clamp(c / tau.tau, -1.0, 1.0));
    double w1, w2;
    if (use_h) {
      // C^H = c, C^V = 0
      w1 = wrap(q.x.x2 - theta);
      double x1p = wrap(q.x.x1 + tau.tau * std::sin(q.x.x2 - w1));
      w2 = wrap(x1p - pi_const / 2.0);
    } else {
      // C^H = 0, C^V = c
      w1 = wrap(q.x.x2 - pi_const / 2.0);
      double x1p = wrap(q.x.x1 + tau.tau * std::sin(q.x.x2 - w1));
      w2 = wrap(x1p - theta);
    }
    plan.phases.push_back({w1, w2});
    q = projective_step(plan.phases.back(), tau, q);
  }
  plan.steps = static_cast<int>(plan.phases.size());
  const double inv_sqrt2 = 0.70710678118654752440;
  plan.achieved_error = std::min(std::hypot(q.v1 - inv_sqrt2, q.v2 - inv_sqrt2),
                                 std::hypot(q.v1 + inv_sqrt2, q.v2 + inv_sqrt2));
  plan.ok = plan.achieved_error < 1e-9;
  return plan;
}

// --- zeta relation ---------------------------------------------------------

// Residual of the compatibility relation between the two rigid-motion
// constraints: sqrt(tau^2-(2 pi z1)^2) = sqrt(tau^2-(2 pi z2)^2) /
// (1 - sqrt(tau^2-(2 pi z2)^2)).
inline double zeta_relation_residual(const ZetaPair& z, ShearParams tau) {
  double a = std::sqrt(tau.tau * tau.tau - (two_pi * z.zeta1) * (two_pi * z.zeta1));
  double b = std::sqrt(tau.tau * tau.tau - (two_pi * z.zeta2) * (two_pi * z.zeta2));
  return std::abs(a - b / (1.0 - b));
}

namespace detail {

inline bool near_low_denominator_rational(double v, double margin = 1e-6, int qmax = 50) {
  for (int q = 1; q <= qmax; ++q) {
    double p = std::round(v * q);
    if (std::abs(v - p / q) < margin) return true;
  }
  return false;
}

}  // namespace detail

inline ZetaPair solve_zeta(ShearParams tau) {
  ZetaPair out;
  if (tau.tau <= 0.0 || tau.tau > 1.0) {
    out.note = "solve_zeta: admissibility window requires 0 < tau <= 1";
    return out;
  }
  const double t = tau.tau;
  // both constraints representable requires b = sqrt(t^2-(2 pi z2)^2) with
  // b/(1-b) <= t, i.e. b <= t/(1+t)
  const double bmax = t / (1.0 + t);
  const double z2_lo = std::sqrt(t * t - bmax * bmax) / two_pi;
  const double z2_hi = t / two_pi;
  out.scan_lo = z2_lo;
  out.scan_hi = z2_hi;
  const double margin = 1e-6;
  if (z2_hi - z2_lo <= 2 * margin) {
    out.note = "solve_zeta: empty admissible interval";
    return out;
  }
  const int samples = 4001;
  double best_score = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double z2 = z2_lo + margin + (z2_hi - z2_lo - 2 * margin) * i / (samples - 1.0);
    double b = std::sqrt(t * t - (two_pi * z2) * (two_pi * z2));
    double a = b / (1.0 - b);
    if (a > t) continue;
    double z1 = std::sqrt(t * t - a * a) / two_pi;
    if (detail::near_low_denominator_rational(z1) || detail::near_low_denominator_rational(z2) ||
        (z1 > 1e-9 && detail::near_low_denominator_rational(z2 / z1)))
      continue;
    double mid = (z2_lo + z2_hi) / 2.0;
    double score = std::abs(z2 - mid);
    if (score < best_score) {
      best_score = score;
      out.zeta1 = z1;
      out.zeta2 = z2;
      out.ok = true;
    }
  }
  if (!out.ok) out.note = "solve_zeta: no candidate away from low-denominator rationals";
  return out;
}

// Phase pair realizing one direction-preserving rigid step: the base point
// translates by (2 pi zeta1, 2 pi zeta2) and the diagonal tangent direction
// is fixed.
inline PhasePair make_rigid_step(const TorusPoint& x, const ZetaPair& z, ShearParams tau) {
  const double t = tau.tau;
  const double a = std::sqrt(t * t - (two_pi * z.zeta1) * (two_pi * z.zeta1));
  const double b = std::sqrt(t * t - (two_pi * z.zeta2) * (two_pi * z.zeta2));
  const double th_h = std::atan2(two_pi * z.zeta1, a);
  const double th_v = std::atan2(two_pi * z.zeta2, b);
  double w1 = wrap(x.x2 - th_h);
  double x1p = wrap(x.x1 + t * std::sin(x.x2 - w1));
  double w2 = wrap(x1p - th_v);
  return {w1, w2};
}

// --- Weyl equidistribution scan -------------------------------------------

struct WeylResult {
  long n = 0;
  bool found = false;
};

// Smallest n >= 1 with d(x + 2 pi n zeta, y) < eps, by forward scan.
inline WeylResult weyl_search(const ZetaPair& zeta, const TorusPoint& x, const TorusPoint& y,
                              double eps, long cap = 1000000) {
  if (eps <= 0.0) throw std::invalid_argument("weyl_search: eps must be positive");
  TorusPoint z = x;
  const double s1 = two_pi * zeta.zeta1, s2 = two_pi * zeta.zeta2;
  for (long n = 1; n <= cap; ++n) {
    z.x1 = wrap(z.x1 + s1);
    z.x2 = wrap(z.x2 + s2);
    if (torus_distance(z, y) < eps) return {n, true};
  }
  return {cap, false};
}

// --- projective approximate controllability --------------------------------

namespace detail {

// Alignment through the inverse maps g_w = f^H_{w1+pi} o f^V_{w2+pi},
// starting from (x, v) and driving the direction to the diagonal. Returns
// the inverse phases in application order; the forward block is their
// reversal. The state is advanced with apply_inverse / inverse Jacobians.
struct InverseAlignment {
  std::vector<PhasePair> inverse_phases;
  TorusPoint endpoint;     // pulled-back base point
  double dir1 = 0.0, dir2 = 0.0;
};

inline InverseAlignment align_projective_angle_inverse(const ProjectivePoint& p, ShearParams tau) {
  const double t = tau.tau;
  InverseAlignment out;
  const bool use_h = std::abs(p.v2) >= std::abs(p.v1);
  const double ratio = use_h ? p.v1 / p.v2 : p.v2 / p.v1;
  const double delta = 1.0 - ratio;
  int n = 10;
  if (std::abs(delta) / n > t) n = static_cast<int>(std::ceil(std::abs(delta) / t));
  const double c = delta / n;

  TorusPoint z = p.x;
  double v1 = p.v1, v2 = p.v2;
  const double theta = std::acos(std::clamp(c / t, -1.0, 1.0));
  for (int k = 0; k < n; ++k) {
    double beta_v, beta_h;
    if (use_h) {
      // D g = [[1, cH],[0, 1]]: first shear rigid in the Jacobian (cV = 0)
      beta_v = wrap(z.x1 - pi_const / 2.0);
      double z2p = wrap(z.x2 + t * std::sin(z.x1 - beta_v));
      beta_h = wrap(z2p - theta);
    } else {
      beta_v = wrap(z.x1 - theta);
      double z2p = wrap(z.x2 + t * std::sin(z.x1 - beta_v));
      beta_h = wrap(z2p - pi_const / 2.0);
    }
    PhasePair w{wrap(beta_h - pi_const), wrap(beta_v - pi_const)};
    out.inverse_phases.push_back(w);
    // inverse-map Jacobian factors at z
    double cv = t * std::cos(z.x1 - beta_v);
    double z2p = wrap(z.x2 + t * std::sin(z.x1 - beta_v));
    double ch = t * std::cos(z2p - beta_h);
    double u1 = (1.0 + ch * cv) * v1 + ch * v2;
    double u2 = cv * v1 + v2;
    double nn = std::hypot(u1, u2);
    v1 = u1 / nn;
    v2 = u2 / nn;
    z = apply_inverse(w, tau, z);
  }
  out.endpoint = z;
  out.dir1 = v1;
  out.dir2 = v2;
  return out;
}

// Finite-difference Lipschitz estimate of a block map on the projective
// space, probed around a point.
template <class BlockMap>
double estimate_block_lipschitz(const BlockMap& block, const ProjectivePoint& at) {
  const double h = 1e-5;
  ProjectivePoint base = block(at);
  double worst = 1.0;
  for (int dir = 0; dir < 3; ++dir) {
    ProjectivePoint probe = at;
    if (dir == 0) probe.x.x1 = wrap(probe.x.x1 + h);
    if (dir == 1) probe.x.x2 = wrap(probe.x.x2 + h);
    if (dir == 2) {
      double a = std::atan2(probe.v2, probe.v1) + h;
      probe.v1 = std::cos(a);
      probe.v2 = std::sin(a);
    }
    worst = std::max(worst, projective_distance(block(probe), base) / h);
  }
  return worst;
}

}  // namespace detail

inline SteeringPlan steer_projective(const ProjectivePoint& p, const ProjectivePoint& target,
                                     double eps, ShearParams tau) {
  SteeringPlan plan;
  if (tau.tau <= 0.0 || eps <= 0.0) {
    plan.note = "steer_projective: tau and eps must be positive";
    return plan;
  }
  ZetaPair zeta = solve_zeta(tau);
  if (!zeta.ok) {
    plan.note = "steer_projective: " + zeta.note;
    return plan;
  }

  // (i) backward block: align the pulled-back target direction
  detail::InverseAlignment back = detail::align_projective_angle_inverse(target, tau);
  std::vector<PhasePair> backward_block(back.inverse_phases.rbegin(), back.inverse_phases.rend());

  // (ii) forward alignment from p
  SteeringPlan fwd = align_projective_angle(p, tau);
  ProjectivePoint state = replay_plan_projective(fwd, p, tau);

  auto block_map = [&](const ProjectivePoint& q) {
    ProjectivePoint z = q;
    for (const auto& w : backward_block) z = projective_step(w, tau, z);
    return z;
  };
  double lip = detail::estimate_block_lipschitz(block_map,
                                                {back.endpoint, back.dir1, back.dir2});
  double eps0 = eps / (2.0 * lip);

  for (int attempt = 0; attempt < 8; ++attempt) {
    // (iii) rigid motions toward the pulled-back base point
    long cap = std::max<long>(1000000, static_cast<long>(100.0 / (eps0 * eps0)));
    if (cap > 300000000L) {
      plan.note = "steer_projective: weyl scan budget exceeded";
      plan.phases.clear();
      return plan;
    }
    WeylResult scan = weyl_search(zeta, state.x, back.endpoint, eps0, cap);
    if (!scan.found) {
      plan.note = "steer_projective: weyl scan cap exhausted";
      plan.phases.clear();
      return plan;
    }
    plan.phases = fwd.phases;
    ProjectivePoint q = state;
    for (long k = 0; k < scan.n; ++k) {
      PhasePair w = make_rigid_step(q.x, zeta, tau);
      plan.phases.push_back(w);
      q = projective_step(w, tau, q);
    }
    // (iv) append the backward block
    for (const auto& w : backward_block) plan.phases.push_back(w);
    ProjectivePoint end = replay_plan_projective(plan, p, tau);
    plan.achieved_error = projective_distance(end, target);
    plan.steps = static_cast<int>(plan.phases.size());
    if (plan.achieved_error < eps) {
      plan.ok = true;
      return plan;
    }
    eps0 /= 2.0;  // deepen the scan and retry
  }
  plan.note = "steer_projective: replay error above eps after retries";
  return plan;
}

// --- two-point approximate controllability ---------------------------------

namespace detail {

// Parametrizes one family step as two sub-shears in application order.
// Forward family: H with phase w1, then V with phase w2.
// Inverse family: V with phase w2+pi, then H with phase w1+pi.
struct PairState {
  TorusPoint x, y;
};

inline void apply_pair(PairState& s, const PhasePair& w, ShearParams tau, bool inverse) {
  if (inverse) {
    s.x = apply_inverse(w, tau, s.x);
    s.y = apply_inverse(w, tau, s.y);
  } else {
    s.x = apply_map(w, tau, s.x);
    s.y = apply_map(w, tau, s.y);
  }
}

// Horizontal shear phase changing the separation (x - y)_1 by `corr`:
// beta = (x2 + y2)/2 - gamma with 2 tau cos(gamma) sin((x2 - y2)/2) = corr.
// corr = 0 recovers the separation-preserving rigid phase (gamma = pi/2).
inline double h_phase_driving(const PairState& s, double corr, double t) {
  double amp = 2.0 * t * std::sin((s.x.x2 - s.y.x2) / 2.0);
  double gamma = std::acos(amp == 0.0 ? 0.0 : std::clamp(corr / amp, -1.0, 1.0));
  return wrap((s.x.x2 + s.y.x2) / 2.0 - gamma);
}

// Vertical counterpart: changes (x - y)_2 by `corr`.
inline double v_phase_driving(const PairState& s, double corr, double t) {
  double amp = 2.0 * t * std::sin((s.x.x1 - s.y.x1) / 2.0);
  double gamma = std::acos(amp == 0.0 ? 0.0 : std::clamp(corr / amp, -1.0, 1.0));
  return wrap((s.x.x1 + s.y.x1) / 2.0 - gamma);
}

inline void apply_pair_shear(PairState& s, Axis axis, double beta, ShearParams tau) {
  s.x = apply_shear(axis, beta, tau, s.x);
  s.y = apply_shear(axis, beta, tau, s.y);
}

// Step 1 of the two-point construction for either map family: reach
// separation exactly (delta1, 0). Appends phases (in application order for
// the family) and advances the pair. Increments and nominally-rigid phases
// are recomputed from the replayed state each step: the transverse pair
// dynamics is exponentially unstable, so open-loop phases would let
// round-off grow past any tolerance within ~100 steps.
inline bool two_point_separation_stage(PairState& s, double delta1, ShearParams tau, bool inverse,
                                       std::vector<PhasePair>& phases, std::string& note) {
  const double t = tau.tau;
  double s2 = wrap_signed(s.x.x2 - s.y.x2);

  // degenerate branch: equal second coordinates (or nearly so); pre-step to
  // open vertical separation and keep the stage length bounded
  const double s2_floor = 0.3;
  const PhasePair prelist[] = {{0.0, 0.0}, {0.0, pi_const / 2}, {pi_const / 3, 1.0}, {1.3, 2.1}};
  int pre = 0;
  while (std::abs(std::sin(s2 / 2.0)) < s2_floor && pre < 4) {
    if (torus_distance(s.x, s.y) == 0.0) {
      note = "two_point: coincident pair";
      return false;
    }
    apply_pair(s, prelist[pre], tau, inverse);
    phases.push_back(prelist[pre]);
    s2 = wrap_signed(s.x.x2 - s.y.x2);
    ++pre;
  }
  if (std::abs(std::sin(s2 / 2.0)) < 1e-6) {
    note = "two_point: could not open vertical separation";
    return false;
  }

  // stage A: drive horizontal separation to delta1, vertical rigid; the
  // wrapped remainder is at most pi, so size the stage by it rather than by
  // the worst case (shorter blocks also amplify replay error less)
  {
    const double s2_hold = s.x.x2 - s.y.x2;  // raw value the V shears preserve
    const double amp = 2.0 * t * std::abs(std::sin(s2 / 2.0));
    const double rem0 = std::abs(wrap_signed(delta1 - (s.x.x1 - s.y.x1)));
    const int n = std::max(1, static_cast<int>(std::ceil(rem0 / amp)));
    for (int k = 0; k < n; ++k) {
      double rem = wrap_signed(delta1 - (s.x.x1 - s.y.x1));
      double bh = h_phase_driving(s, rem / (n - k), t);
      double bv;
      if (!inverse) {
        apply_pair_shear(s, Axis::H, bh, tau);
        bv = v_phase_driving(s, wrap_signed(s2_hold - (s.x.x2 - s.y.x2)), t);
        apply_pair_shear(s, Axis::V, bv, tau);
        phases.push_back({bh, bv});
      } else {
        bv = v_phase_driving(s, wrap_signed(s2_hold - (s.x.x2 - s.y.x2)), t);
        apply_pair_shear(s, Axis::V, bv, tau);
        rem = wrap_signed(delta1 - (s.x.x1 - s.y.x1));
        bh = h_phase_driving(s, rem / (n - k), t);
        apply_pair_shear(s, Axis::H, bh, tau);
        phases.push_back({wrap(bh - pi_const), wrap(bv - pi_const)});
      }
    }
  }

  // stage B: drive vertical separation to 0, horizontal rigid
  {
    const double amp = 2.0 * t * std::abs(std::sin(delta1 / 2.0));
    const double rem0 = std::abs(wrap_signed(0.0 - (s.x.x2 - s.y.x2)));
    const int n = std::max(1, static_cast<int>(std::ceil(rem0 / amp)));
    for (int k = 0; k < n; ++k) {
      double rem2 = wrap_signed(0.0 - (s.x.x2 - s.y.x2));
      if (!inverse) {
        double bh = h_phase_driving(s, wrap_signed(delta1 - (s.x.x1 - s.y.x1)), t);
        apply_pair_shear(s, Axis::H, bh, tau);
        rem2 = wrap_signed(0.0 - (s.x.x2 - s.y.x2));
        double bv = v_phase_driving(s, rem2 / (n - k), t);
        apply_pair_shear(s, Axis::V, bv, tau);
        phases.push_back({bh, bv});
      } else {
        double bv = v_phase_driving(s, rem2 / (n - k), t);
        apply_pair_shear(s, Axis::V, bv, tau);
        double bh = h_phase_driving(s, wrap_signed(delta1 - (s.x.x1 - s.y.x1)), t);
        apply_pair_shear(s, Axis::H, bh, tau);
        phases.push_back({wrap(bh - pi_const), wrap(bv - pi_const)});
      }
    }
  }
  return true;
}

}  // namespace detail

inline SteeringPlan steer_two_point(const TorusPoint& x, const TorusPoint& y, const TorusPoint& xt,
                                    const TorusPoint& yt, double eps, ShearParams tau,
                                    double delta1 = 1.0) {
  if (torus_distance(x, y) == 0.0 || torus_distance(xt, yt) == 0.0)
    throw std::invalid_argument("steer_two_point: coincident pair");
  SteeringPlan plan;
  if (tau.tau <= 0.0 || eps <= 0.0) {
    plan.note = "steer_two_point: tau and eps must be positive";
    return plan;
  }
  if (torus_distance(x, xt) + torus_distance(y, yt) < eps) {
    plan.ok = true;
    plan.achieved_error = torus_distance(x, xt) + torus_distance(y, yt);
    plan.note = "already within eps";
    return plan;
  }

  // backward stage from the targets through the inverse maps; the replay
  // error is dominated by how much the backward block amplifies the scan
  // residual, so try a few separation values and keep the tamest block
  const double t = tau.tau;
  detail::PairState hat{xt, yt};
  std::vector<PhasePair> backward_block;
  double lip = std::numeric_limits<double>::infinity();
  std::string note;
  {
    const double candidates[] = {delta1, 0.8, 1.3, 0.6, 1.6, 2.1};
    for (double cand : candidates) {
      detail::PairState h{xt, yt};
      std::vector<PhasePair> inv;
      if (!detail::two_point_separation_stage(h, cand, tau, true, inv, note)) continue;
      std::vector<PhasePair> block(inv.rbegin(), inv.rend());
      auto apply_block = [&](detail::PairState s) {
        for (const auto& w : block) detail::apply_pair(s, w, tau, false);
        return s;
      };
      const double hstep = 1e-5;
      detail::PairState b0 = apply_block(h);
      double cand_lip = 1.0;
      for (int dir = 0; dir < 2; ++dir) {
        detail::PairState probe = h;
        if (dir == 0) {
          probe.x.x2 = wrap(probe.x.x2 + hstep);
          probe.y.x2 = wrap(probe.y.x2 + hstep);
        } else {
          probe.x.x1 = wrap(probe.x.x1 + hstep);
          probe.y.x1 = wrap(probe.y.x1 + hstep);
        }
        detail::PairState b1 = apply_block(probe);
        cand_lip = std::max(cand_lip,
                            (torus_distance(b1.x, b0.x) + torus_distance(b1.y, b0.y)) / hstep);
      }
      if (cand_lip < lip) {
        lip = cand_lip;
        hat = h;
        backward_block = std::move(block);
        delta1 = cand;
      }
      if (lip < 300.0) break;
    }
    if (backward_block.empty() && torus_distance(xt, yt) > 0.0) {
      plan.note = "steer_two_point (backward): " + note;
      return plan;
    }
  }

  // forward stage from the sources
  detail::PairState cur{x, y};
  std::vector<PhasePair> forward_phases;
  if (!detail::two_point_separation_stage(cur, delta1, tau, false, forward_phases, note)) {
    plan.note = "steer_two_point (forward): " + note;
    return plan;
  }

  // M' block: align first coordinates with the pulled-back target, keeping
  // both separations (equal second coordinates make the horizontal shear act
  // rigidly on the pair)
  const int mprime = static_cast<int>(std::ceil(4.0 * pi_const / t));
  {
    for (int k = 0; k < mprime; ++k) {
      double inc = wrap_signed(hat.x.x1 - cur.x.x1) / (mprime - k);
      double w1 = wrap(cur.x.x2 - std::asin(std::clamp(inc / t, -1.0, 1.0)));
      detail::apply_pair_shear(cur, Axis::H, w1, tau);
      double w2 = detail::v_phase_driving(cur, wrap_signed(cur.y.x2 - cur.x.x2), t);
      detail::apply_pair_shear(cur, Axis::V, w2, tau);
      forward_phases.push_back({w1, w2});
    }
  }

  double eps0 = eps / (2.0 * lip);

  for (int attempt = 0; attempt < 8; ++attempt) {
    // Weyl drift in the second coordinate; first coordinates already match
    double drift = t * std::cos((cur.x.x1 - cur.y.x1) / 2.0);
    ZetaPair vz{0.0, drift / two_pi, true, 0, 0, ""};
    long cap = std::max<long>(1000000, static_cast<long>(100.0 * two_pi / eps0));
    if (cap > 300000000L) {
      plan.note = "steer_two_point: weyl scan budget exceeded";
      return plan;
    }
    WeylResult scan = weyl_search(vz, cur.x, TorusPoint{cur.x.x1, hat.x.x2}, eps0, cap);
    if (!scan.found) {
      plan.note = "steer_two_point: weyl scan cap exhausted";
      return plan;
    }
    std::vector<PhasePair> drift_phases;
    drift_phases.reserve(static_cast<std::size_t>(scan.n));
    detail::PairState s = cur;
    for (long k = 0; k < scan.n; ++k) {
      double w1 = s.x.x2;  // zero horizontal displacement for both points
      detail::apply_pair_shear(s, Axis::H, w1, tau);
      double w2 = detail::v_phase_driving(s, wrap_signed(s.y.x2 - s.x.x2), t);
      detail::apply_pair_shear(s, Axis::V, w2, tau);
      drift_phases.push_back({w1, w2});
    }

    plan.phases = forward_phases;
    plan.phases.insert(plan.phases.end(), drift_phases.begin(), drift_phases.end());
    plan.phases.insert(plan.phases.end(), backward_block.begin(), backward_block.end());
    detail::PairState end{x, y};
    for (const auto& w : plan.phases) detail::apply_pair(end, w, tau, false);
    plan.achieved_error = torus_distance(end.x, xt) + torus_distance(end.y, yt);
    plan.steps = static_cast<int>(plan.phases.size());
    if (plan.achieved_error < eps) {
      plan.ok = true;
      return plan;
    }
    eps0 /= 2.0;
  }
  plan.note = "steer_two_point: replay error above eps after retries";
  return plan;
}

}  // namespace shearmix
