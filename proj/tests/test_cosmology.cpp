#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rwproj/cosmology.hpp"
#include "rwproj/frame_geometry.hpp"
#include "rwproj/oracle.hpp"
#include "support.hpp"

#include <cmath>

using namespace rwproj;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("flat dust solution follows the power law") {
  CosmologyParams params;
  params.M = 2.0 / 9.0;  // (9GM/2)^(1/3) = 1, so R = t^(2/3)
  FriedmannOptions opts;
  opts.n_output = 32;
  const ScaleHistory hist = solve_friedmann(params, 1.0, 1.0, 10.0, opts);
  for (const auto& st : hist.samples) {
    const double ref = std::pow(st.t, 2.0 / 3.0);
    CHECK(std::abs(st.R - ref) / ref < 1e-8);
  }
}

TEST_CASE("empty flat universe stays static") {
  CosmologyParams params;
  params.M = 0.0;
  const ScaleHistory hist = solve_friedmann(params, 1.5, 0.0, 4.0);
  for (const auto& st : hist.samples) {
    CHECK(st.R == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(std::abs(st.Rdot) < 1e-14);
  }
}

TEST_CASE("closed universe: turning point at R = 2GM") {
  CosmologyParams params;
  params.kappa = 1;
  params.M = 1.0;
  const double t0 = kPi / 2.0 - 1.0;  // eta = pi/2, R = 1

  SUBCASE("refuses to continue without recollapse enabled") {
    CHECK_THROWS_AS(solve_friedmann(params, 1.0, t0, 5.0), TurningPoint);
  }

  SUBCASE("tracks the cycloid through the apex when enabled") {
    FriedmannOptions opts;
    opts.allow_recollapse = true;
    const ScaleHistory hist = solve_friedmann(params, 1.0, t0, 5.0, opts);
    CHECK(hist.hit_turning_point);
    CHECK(hist.t_turning == doctest::Approx(kPi).epsilon(1e-8));
    double rmax = 0.0;
    for (const auto& st : hist.samples) rmax = std::max(rmax, st.R);
    CHECK(rmax == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(hist.samples.back().Rdot < 0.0);
  }

  SUBCASE("stops before recollapse reaches R = 0") {
    FriedmannOptions opts;
    opts.allow_recollapse = true;
    opts.collapse_floor = 1e-3;
    const ScaleHistory hist = solve_friedmann(params, 1.0, t0, 7.0, opts);
    CHECK(hist.truncated_at_collapse);
    CHECK(hist.samples.back().R == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(hist.samples.back().t < 2.0 * kPi);
  }

  SUBCASE("no expanding solution below the bound radius") {
    CHECK_THROWS_AS(solve_friedmann(params, 3.0, 0.0, 1.0), SingularInput);
  }
}

TEST_CASE("contracting branch follows the reflected power law") {
  // R(1) = 1 with Rdot < 0 collapses as R = (2 - t)^(2/3)
  CosmologyParams params;
  params.M = 2.0 / 9.0;
  FriedmannOptions opts;
  opts.branch = -1;
  opts.n_output = 16;
  const ScaleHistory hist = solve_friedmann(params, 1.0, 1.0, 1.9, opts);
  for (const auto& st : hist.samples) {
    CHECK(std::abs(st.R - std::pow(2.0 - st.t, 2.0 / 3.0)) < 1e-8);
    CHECK(st.Rdot < 0.0);
  }
}

TEST_CASE("constraint preservation along solver output") {
  for (int kappa : {-1, 0, 1}) {
    CosmologyParams params;
    params.kappa = kappa;
    params.M = kappa == 0 ? 2.0 / 9.0 : 1.0;
    const double t0 = kappa == 1 ? 0.4 : 0.5;
    const double t1 = kappa == 1 ? 2.8 : 8.0;
    const ScaleState init = analytic_scale(params, t0);
    const ScaleHistory hist = solve_friedmann(params, init.R, t0, t1);
    for (const auto& st : hist.samples) {
      const double scale = std::max(1.0, 2.0 * params.G * params.M / st.R);
      CHECK(std::abs(friedmann_constraint(st, params)) < 1e-9 * scale);
      CHECK(std::abs(acceleration_constraint(st, params)) < 1e-9 * scale);
    }
  }
}

TEST_CASE("dust density") {
  CosmologyParams params;
  params.M = 0.0;
  CHECK(dust_density(2.0, params) == 0.0);
  params.M = 4.0 * kPi / 3.0;
  CHECK(dust_density(1.0, params) == doctest::Approx(1.0).epsilon(1e-15));

  // E_00 = 8 pi G rho along a dust history
  params.M = 2.0 / 9.0;
  const ScaleHistory hist = solve_friedmann(params, 1.0, 1.0, 5.0);
  for (const auto& st : hist.samples) {
    const Mat4 E = einstein_closed_form(st, params, MetricTag::standard);
    CHECK(std::abs(E(0, 0) - 8.0 * kPi * params.G *
                                 dust_density(st.R, params)) < 1e-8);
  }
}

TEST_CASE("reinterpretation values") {
  SUBCASE("s = 0 degenerates exactly") {
    CosmologyParams params;
    params.M = 2.0 / 9.0;
    const ScaleState st = analytic_scale(params, 2.0);
    const Reinterpretation r = reinterpret(st, params);
    CHECK(r.lambda_tilde == 0.0);
    CHECK(r.rho_tilde == dust_density(st.R, params));
    CHECK(r.u_tilde_factor == 1.0);
  }

  SUBCASE("worked flat example") {
    // kappa=0, G=1, M=1, R=2 on the Friedmann flow: Rdot^2 = 2GM/R = 1
    CosmologyParams params;
    params.M = 1.0;
    params.s = 0.1;
    const ScaleState st{0.0, 2.0, 1.0, -0.25};
    const Reinterpretation r = reinterpret(st, params);
    // Lambda~ = 3 s (2GM/R - kappa) = 0.3
    CHECK(r.lambda_tilde == doctest::Approx(0.3).epsilon(1e-14));
    // rho~ = rho (1 - s R^2) = (3/(32 pi)) * 0.6
    CHECK(r.rho_tilde ==
          doctest::Approx(3.0 / (32.0 * kPi) * 0.6).epsilon(1e-14));
    CHECK(r.u_tilde_factor == doctest::Approx(0.6).epsilon(1e-15));
  }

  SUBCASE("dark-energy term switches off at the turning point") {
    CosmologyParams params;
    params.kappa = 1;
    params.M = 1.0;
    params.s = 0.4;
    // apex of the cycloid: R = 2GM, Rdot = 0
    const ScaleState st{kPi, 2.0, 0.0, -0.25};
    CHECK(reinterpret(st, params).lambda_tilde ==
          doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("gates on the Friedmann constraint") {
    CosmologyParams params;
    params.M = 2.0 / 9.0;
    ScaleState st = analytic_scale(params, 2.0);
    st.Rdot += 1e-2;
    CHECK_THROWS_AS(reinterpret(st, params), FriedmannViolation);
  }

  SUBCASE("refuses the singular shell") {
    CosmologyParams params;
    params.M = 2.0 / 9.0;
    ScaleState st = analytic_scale(params, 1.0);  // R = 1
    params.s = 1.0;
    CHECK_THROWS_AS(reinterpret(st, params), MetricSingular);
  }
}

TEST_CASE("u~ has unit norm in the deformed metric") {
  rwtest::Sampler rng;
  for (int n = 0; n < 25; ++n) {
    const double R = rng.uniform(0.4, 2.5);
    const double s = rng.s_for(R, 0.05);
    const Mat4 gt = frame_metric(MetricTag::deformed, s, R).gcomp;
    Vec4 ut = Vec4::Zero();
    ut(0) = shell_factor(s, R);
    CHECK(std::abs(ut.dot(gt * ut) + 1.0) < 1e-12);
  }
}

TEST_CASE("Einstein residuals vanish on solutions and flag violations") {
  for (int kappa : {-1, 0, 1}) {
    CosmologyParams params;
    params.kappa = kappa;
    params.M = kappa == 0 ? 2.0 / 9.0 : 1.0;
    const double t = kappa == 1 ? 1.8 : 1.3;
    const ScaleState st = analytic_scale(params, t);
    CHECK(einstein_residual(st, params, MetricTag::standard)
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    for (double s : {-1.0, 0.3}) {
      params.s = s;
      if (std::abs(shell_factor(s, st.R)) < 0.05) continue;
      CHECK(einstein_residual(st, params, MetricTag::deformed)
                .cwiseAbs()
                .maxCoeff() < 1e-9);
    }
    // a violated state produces a residual of matching size
    params.s = 0.3;
    ScaleState bad = st;
    bad.Rdot += 1e-2 / (2.0 * bad.Rdot);  // constraint off by ~1e-2
    const double res = einstein_residual(bad, params, MetricTag::standard)
                           .cwiseAbs()
                           .maxCoeff();
    CHECK(res > 1e-4);
    CHECK(res < 1.0);
  }
}

TEST_CASE("the reinterpretation identity holds to machine precision") {
  rwtest::Sampler rng;
  for (int n = 0; n < 50; ++n) {
    CosmologyParams params;
    params.kappa = rng.pick_kappa();
    params.M = rng.uniform(0.1, 2.0);
    params.s = rng.uniform(-1.0, 1.0);
    ScaleState st;
    st.R = rng.uniform(0.3, 3.0);
    const double lhs = 8.0 * kPi * params.G * dust_density(st.R, params) -
                       3.0 * params.s * params.kappa -
                       lambda_tilde(st, params);
    const double rhs = 8.0 * kPi * params.G * rho_tilde(st, params);
    CHECK(std::abs(lhs - rhs) <=
          1e-13 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("lambda_tilde time dependence") {
  CosmologyParams params;
  params.kappa = -1;
  params.M = 1.0;
  params.s = 0.7;
  // dust: Lambda~ varies along the flow
  const double l1 = lambda_tilde(analytic_scale(params, 0.5), params);
  const double l2 = lambda_tilde(analytic_scale(params, 3.0), params);
  CHECK(std::abs(l1 - l2) > 1e-3);

  // empty open universe: Lambda~ = -3 s kappa, constant
  CosmologyParams milne;
  milne.kappa = -1;
  milne.M = 0.0;
  milne.s = 0.7;
  const ScaleHistory hist = solve_friedmann(milne, 1.0, 0.0, 2.0);
  for (const auto& st : hist.samples)
    CHECK(lambda_tilde(st, milne) ==
          doctest::Approx(-3.0 * milne.s * milne.kappa).epsilon(1e-14));
}

TEST_CASE("normal form: s=0 is the identity mapping") {
  CosmologyParams params;
  params.M = 2.0 / 9.0;
  const ScaleHistory hist = solve_friedmann(params, 1.0, 1.0, 3.0);
  const NormalFormMap map = rw_normal_form(hist, 0.0);
  for (const auto& s : map.samples) {
    CHECK(std::abs(s.t_tilde - (s.t - 1.0)) < 1e-10);
    // R~ = R up to the history's interpolation accuracy
    CHECK(std::abs(s.R_tilde - hist.at(s.t).R) < 1e-7);
  }
  CHECK(map.max_component_mismatch < 1e-8);
}

TEST_CASE("normal form: static background rescales cleanly") {
  // M=0, kappa=0, R=1, s=-1: q = 2, R~ = 1/sqrt(2), t~ = (t - t0)/2
  CosmologyParams params;
  params.M = 0.0;
  const ScaleHistory hist = solve_friedmann(params, 1.0, 0.0, 2.0);
  const NormalFormMap map = rw_normal_form(hist, -1.0);
  for (const auto& s : map.samples) {
    CHECK(std::abs(s.t_tilde - 0.5 * s.t) < 1e-12);
    CHECK(std::abs(s.R_tilde - 1.0 / std::sqrt(2.0)) < 1e-12);
  }
}

TEST_CASE("normal form: certificate along a flat dust history") {
  CosmologyParams params;
  params.M = 2.0 / 9.0;
  const ScaleHistory hist = solve_friedmann(params, 1.0, 1.0, 3.0);
  const NormalFormMap map = rw_normal_form(hist, 0.1);
  CHECK(map.max_component_mismatch < 1e-8);
}

TEST_CASE("normal form refuses a history crossing the shell") {
  CosmologyParams params;
  params.M = 2.0 / 9.0;
  const ScaleHistory hist = solve_friedmann(params, 1.0, 1.0, 8.0);
  // R runs from 1 to 4: s = 0.25 puts the shell at R = 2, inside
  CHECK_THROWS_AS(rw_normal_form(hist, 0.25), MetricSingular);
}

TEST_CASE("history interpolation is smooth and accurate") {
  CosmologyParams params;
  params.M = 2.0 / 9.0;
  const ScaleHistory hist = solve_friedmann(params, 1.0, 1.0, 5.0);
  for (double t : {1.1, 2.37, 3.9, 4.99}) {
    const ScaleState st = hist.at(t);
    CHECK(std::abs(st.R - std::pow(t, 2.0 / 3.0)) < 1e-7);
    CHECK(std::abs(st.Rdot - 2.0 / 3.0 * std::pow(t, -1.0 / 3.0)) < 1e-6);
  }
  CHECK_THROWS_AS(hist.at(0.5), DomainError);
  CHECK_THROWS_AS(hist.at(5.5), DomainError);
}

TEST_CASE("input validation") {
  CosmologyParams params;
  params.kappa = 2;
  CHECK_THROWS_AS(params.validate(), SingularInput);
  params.kappa = 0;
  params.M = 1.0;
  CHECK_THROWS_AS(solve_friedmann(params, -1.0, 0.0, 1.0), SingularInput);
  CHECK_THROWS_AS(solve_friedmann(params, 1.0, 2.0, 1.0), SingularInput);
}
