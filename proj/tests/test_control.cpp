#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "shearmix/control.hpp"
#include "shearmix/noise.hpp"

using namespace shearmix;

namespace {
TorusPoint random_point(PhaseCursor& cur) {
  PhasePair w = cur.next();
  return {w.w1, w.w2};
}
}  // namespace

TEST_CASE("one-point steering: trivial, exact, and degenerate cases") {
  ShearParams tau{1.0};
  TorusPoint x{1.0, 2.5};

  SteeringPlan same = steer_one_point(x, x, tau);
  CHECK(same.ok);
  CHECK(same.steps == 13);  // ceil(4 pi / tau)
  CHECK(same.achieved_error == 0.0);

  SteeringPlan plan = steer_one_point(x, {4.0, 0.5}, tau);
  CHECK(plan.ok);
  CHECK(plan.steps == 13);
  CHECK(torus_distance(replay_plan(plan, x, tau), {4.0, 0.5}) < 1e-9);

  SteeringPlan fail = steer_one_point(x, {4.0, 0.5}, ShearParams{0.0});
  CHECK_FALSE(fail.ok);
}

TEST_CASE("one-point steering: plan length and replay over random pairs") {
  PhaseCursor cur(derive_stream(Seed{31}, 0));
  for (double t : {0.05, 0.5, 1.0}) {
    int expected = static_cast<int>(std::ceil(4.0 * pi_const / t));
    for (int rep = 0; rep < 100; ++rep) {
      TorusPoint x = random_point(cur), y = random_point(cur);
      SteeringPlan plan = steer_one_point(x, y, ShearParams{t});
      REQUIRE(plan.ok);
      CHECK(plan.steps == expected);
      CHECK(torus_distance(replay_plan(plan, x, ShearParams{t}), y) < 1e-9);
    }
  }
}

TEST_CASE("rigid phase: gamma = pi/2 preserves separation along the axis") {
  PhaseCursor cur(derive_stream(Seed{32}, 0));
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    TorusPoint x = random_point(cur), y = random_point(cur);
    double t = 2.0 * cur.next_uniform();
    double beta = rigid_phase(x, y, pi_const / 2.0, Axis::H);
    TorusPoint fx = apply_shear(Axis::H, beta, ShearParams{t}, x);
    TorusPoint fy = apply_shear(Axis::H, beta, ShearParams{t}, y);
    worst = std::max(worst,
                     std::abs(wrap_signed((fx.x1 - fy.x1) - (x.x1 - y.x1))));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("rigid phase: gamma = 0 gives the full separation increment") {
  PhaseCursor cur(derive_stream(Seed{33}, 0));
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    TorusPoint x = random_point(cur), y = random_point(cur);
    double t = 2.0 * cur.next_uniform();
    double gamma = cur.next_uniform() * two_pi;
    double beta = rigid_phase(x, y, gamma, Axis::V);
    TorusPoint fx = apply_shear(Axis::V, beta, ShearParams{t}, x);
    TorusPoint fy = apply_shear(Axis::V, beta, ShearParams{t}, y);
    double rhs = (x.x2 - y.x2) + 2.0 * t * std::sin((x.x1 - y.x1) / 2.0) * std::cos(gamma);
    worst = std::max(worst, std::abs(wrap_signed((fx.x2 - fy.x2) - rhs)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("projective angle alignment") {
  const double inv_sqrt2 = 0.70710678118654752440;
  ShearParams tau{1.0};

  SteeringPlan already = align_projective_angle({{1, 2}, inv_sqrt2, inv_sqrt2}, tau);
  CHECK(already.ok);
  CHECK(already.steps == 10);

  SteeringPlan plan = align_projective_angle({{1, 2}, 1.0, 0.0}, tau);
  CHECK(plan.ok);
  ProjectivePoint end = replay_plan_projective(plan, {{1, 2}, 1.0, 0.0}, tau);
  CHECK(std::min(std::hypot(end.v1 - inv_sqrt2, end.v2 - inv_sqrt2),
                 std::hypot(end.v1 + inv_sqrt2, end.v2 + inv_sqrt2)) < 1e-9);

  // small tau forces the per-step cap and extends the plan
  SteeringPlan ext = align_projective_angle({{0.4, 5.0}, 0.0, 1.0}, ShearParams{0.05});
  CHECK(ext.ok);
  CHECK(ext.steps == 20);
  ProjectivePoint e2 = replay_plan_projective(ext, {{0.4, 5.0}, 0.0, 1.0}, ShearParams{0.05});
  CHECK(std::min(std::hypot(e2.v1 - inv_sqrt2, e2.v2 - inv_sqrt2),
                 std::hypot(e2.v1 + inv_sqrt2, e2.v2 + inv_sqrt2)) < 1e-9);
}

TEST_CASE("zeta relation solver") {
  for (double t : {0.3, 0.7, 1.0}) {
    ZetaPair z = solve_zeta(ShearParams{t});
    REQUIRE(z.ok);
    CHECK(z.zeta1 >= 0.0);
    CHECK(z.zeta1 <= t / two_pi);
    // the admissibility edge (where the constrained factor reaches tau
    // exactly) is excluded with a 1e-6 margin
    CHECK(z.zeta2 >= z.scan_lo + 1e-6);
    CHECK(z.zeta2 <= z.scan_hi - 1e-6);
    CHECK(zeta_relation_residual(z, ShearParams{t}) < 1e-10);
  }
  CHECK_FALSE(solve_zeta(ShearParams{1.5}).ok);
  CHECK_FALSE(solve_zeta(ShearParams{0.0}).ok);
}

TEST_CASE("rigid zeta steps translate the base and fix the diagonal direction") {
  ShearParams tau{1.0};
  ZetaPair z = solve_zeta(tau);
  REQUIRE(z.ok);
  const double inv_sqrt2 = 0.70710678118654752440;
  ProjectivePoint p{{2.0, 1.0}, inv_sqrt2, inv_sqrt2};
  TorusPoint expect = p.x;
  for (int k = 0; k < 200; ++k) {
    PhasePair w = make_rigid_step(p.x, z, tau);
    p = projective_step(w, tau, p);
    expect.x1 = wrap(expect.x1 + two_pi * z.zeta1);
    expect.x2 = wrap(expect.x2 + two_pi * z.zeta2);
  }
  CHECK(torus_distance(p.x, expect) < 1e-9);
  CHECK(std::min(std::hypot(p.v1 - inv_sqrt2, p.v2 - inv_sqrt2),
                 std::hypot(p.v1 + inv_sqrt2, p.v2 + inv_sqrt2)) < 1e-9);
}

TEST_CASE("weyl search") {
  ZetaPair z{0.05, 0.08, true, 0, 0, ""};
  // eps above the torus diameter: first step already qualifies
  CHECK(weyl_search(z, {0, 0}, {3, 3}, 5.0).n == 1);

  ZetaPair irr{std::sqrt(2.0) / 10.0, std::sqrt(3.0) / 10.0, true, 0, 0, ""};
  WeylResult r = weyl_search(irr, {0.3, 5.1}, {4.0, 2.0}, 0.05);
  REQUIRE(r.found);
  // independent re-scan: same first hit, and the hit satisfies the bound
  TorusPoint zpt{0.3, 5.1};
  long n = 0;
  for (long k = 1; k <= r.n; ++k) {
    zpt.x1 = wrap(zpt.x1 + two_pi * irr.zeta1);
    zpt.x2 = wrap(zpt.x2 + two_pi * irr.zeta2);
    if (torus_distance(zpt, {4.0, 2.0}) < 0.05) {
      n = k;
      break;
    }
  }
  CHECK(n == r.n);

  // rationally dependent zeta never leaves the orbit line
  ZetaPair dep{0.1, 0.1, true, 0, 0, ""};
  CHECK_FALSE(weyl_search(dep, {0, 0}, {0.0, 3.0}, 0.05, 10000).found);
  CHECK_THROWS_AS(weyl_search(dep, {0, 0}, {0, 0}, -1.0), std::invalid_argument);
}

TEST_CASE("projective steering replays within eps") {
  ShearParams tau{1.0};
  ProjectivePoint p{{1.0, 2.0}, 1.0, 0.0};

  SteeringPlan self = steer_projective(p, p, 0.5, tau);
  REQUIRE(self.ok);
  CHECK(projective_distance(replay_plan_projective(self, p, tau), p) < 0.5);

  PhaseCursor cur(derive_stream(Seed{34}, 0));
  for (int rep = 0; rep < 5; ++rep) {
    double a = cur.next_uniform() * two_pi, b = cur.next_uniform() * two_pi;
    ProjectivePoint from{random_point(cur), std::cos(a), std::sin(a)};
    ProjectivePoint to{random_point(cur), std::cos(b), std::sin(b)};
    SteeringPlan plan = steer_projective(from, to, 0.05, tau);
    REQUIRE(plan.ok);
    CHECK(projective_distance(replay_plan_projective(plan, from, tau), to) < 0.05);
  }
}

TEST_CASE("projective steering: halving eps deepens the plan but still succeeds") {
  ShearParams tau{1.0};
  ProjectivePoint from{{0.7, 3.1}, 0.0, 1.0};
  ProjectivePoint to{{5.0, 1.2}, 0.6, -0.8};
  SteeringPlan coarse = steer_projective(from, to, 0.05, tau);
  SteeringPlan fine = steer_projective(from, to, 0.025, tau);
  REQUIRE(coarse.ok);
  REQUIRE(fine.ok);
  CHECK(fine.steps >= coarse.steps);
  CHECK(projective_distance(replay_plan_projective(fine, from, tau), to) < 0.025);
}

TEST_CASE("two-point steering replays within eps") {
  ShearParams tau{1.0};
  PhaseCursor cur(derive_stream(Seed{35}, 0));
  for (int rep = 0; rep < 5; ++rep) {
    TorusPoint x = random_point(cur), y = random_point(cur);
    TorusPoint xt = random_point(cur), yt = random_point(cur);
    if (torus_distance(x, y) < 1e-6 || torus_distance(xt, yt) < 1e-6) continue;
    SteeringPlan plan = steer_two_point(x, y, xt, yt, 0.05, tau);
    REQUIRE(plan.ok);
    TorusPoint ex = x, ey = y;
    for (const auto& w : plan.phases) {
      ex = apply_map(w, tau, ex);
      ey = apply_map(w, tau, ey);
    }
    CHECK(torus_distance(ex, xt) + torus_distance(ey, yt) < 0.05);
  }
}

TEST_CASE("two-point steering: short plan when already at the target") {
  ShearParams tau{1.0};
  TorusPoint x{1, 1}, y{2, 2};
  SteeringPlan plan = steer_two_point(x, y, {1.001, 1.0}, {2.0, 2.001}, 0.05, tau);
  CHECK(plan.ok);
  CHECK(plan.steps == 0);
}

TEST_CASE("two-point steering: equal second coordinates engage the pre-step") {
  ShearParams tau{1.0};
  TorusPoint x{1.0, 2.0}, y{3.5, 2.0};  // [x - y]_2 = 0
  TorusPoint xt{0.5, 4.0}, yt{5.0, 0.7};
  SteeringPlan plan = steer_two_point(x, y, xt, yt, 0.05, tau);
  REQUIRE(plan.ok);
  TorusPoint ex = x, ey = y;
  for (const auto& w : plan.phases) {
    ex = apply_map(w, tau, ex);
    ey = apply_map(w, tau, ey);
  }
  CHECK(torus_distance(ex, xt) + torus_distance(ey, yt) < 0.05);
}

TEST_CASE("two-point steering rejects coincident pairs") {
  CHECK_THROWS_AS(steer_two_point({1, 1}, {1, 1}, {2, 2}, {3, 3}, 0.05, ShearParams{1.0}),
                  std::invalid_argument);
}

TEST_CASE("separation is conserved through nominally rigid blocks") {
  // replays a generated two-point plan and checks the protected-axis
  // separation step by step through its drift block
  ShearParams tau{1.0};
  TorusPoint x{0.3, 1.9}, y{2.2, 4.4}, xt{4.0, 0.2}, yt{1.5, 3.3};
  SteeringPlan plan = steer_two_point(x, y, xt, yt, 0.05, tau);
  REQUIRE(plan.ok);
  TorusPoint ex = x, ey = y;
  double prev_sep1 = wrap_signed(ex.x1 - ey.x1);
  int stable_streak = 0;
  for (const auto& w : plan.phases) {
    ex = apply_map(w, tau, ex);
    ey = apply_map(w, tau, ey);
    double sep1 = wrap_signed(ex.x1 - ey.x1);
    if (std::abs(sep1 - prev_sep1) < 1e-10) ++stable_streak;
    prev_sep1 = sep1;
  }
  // the drift block dominates the plan and holds the horizontal separation
  CHECK(stable_streak > plan.steps / 2);
}
