#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rwproj/frame_geometry.hpp"
#include "rwproj/oracle.hpp"
#include "support.hpp"

using namespace rwproj;
using rwtest::Sampler;

namespace {

CosmologyParams params_for(int kappa, double s = 0.0) {
  CosmologyParams p;
  p.kappa = kappa;
  p.s = s;
  return p;
}

}  // namespace

TEST_CASE("coframe at the origin is diag(1, R, R, R)") {
  const SpacetimePoint p{1.3, 0, 0, 0};
  for (int kappa : {-1, 0, 1}) {
    const CoframeMatrix theta = eval_coframe(p, 2.0, params_for(kappa));
    Mat4 expect = Mat4::Zero();
    expect.diagonal() << 1.0, 2.0, 2.0, 2.0;
    CHECK((theta.e - expect).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("coframe picks up the conformal denominator") {
  // 1 + (1/4) * 4 = 2
  const SpacetimePoint p{0.0, 2.0, 0.0, 0.0};
  const CoframeMatrix theta = eval_coframe(p, 1.0, params_for(+1));
  CHECK(theta.e(0, 0) == 1.0);
  CHECK(theta.e(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(theta.e(2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(theta.e(3, 3) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("coframe refuses the kappa=-1 patch boundary") {
  const SpacetimePoint p{0.0, 2.0, 0.0, 0.0};  // 1 - 1 = 0
  CHECK_THROWS_AS(eval_coframe(p, 1.0, params_for(-1)), PatchViolation);
}

TEST_CASE("coframe is invertible on the patch") {
  Sampler rng;
  for (int n = 0; n < 50; ++n) {
    const int kappa = rng.pick_kappa();
    const SpacetimePoint p = rng.point();
    const double R = rng.uniform(0.3, 3.0);
    CHECK(std::abs(eval_coframe(p, R, params_for(kappa)).det()) > 1e-6);
  }
}

TEST_CASE("frame metric: s=0 recovers the standard components") {
  for (double R : {0.5, 1.0, 2.7}) {
    const FrameMetric g = frame_metric(MetricTag::deformed, 0.0, R);
    Mat4 eta = Mat4::Identity();
    eta(0, 0) = -1.0;
    CHECK((g.gcomp - eta).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("frame metric: singular shell refuses") {
  CHECK_THROWS_AS(frame_metric(MetricTag::deformed, 1.0, 1.0),
                  MetricSingular);
}

TEST_CASE("frame metric: deformed components") {
  // s=-1, R=1: q = 2
  const FrameMetric g = frame_metric(MetricTag::deformed, -1.0, 1.0);
  CHECK(g.gcomp(0, 0) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(g.gcomp(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.gcomp(2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.gcomp(3, 3) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("standard connection at the flat origin") {
  const SpacetimePoint origin{1.0, 0, 0, 0};
  const ScaleState st{1.0, 2.0, 0.5, 0.0};
  const ConnectionCoeffs g = connection_standard(origin, st, params_for(0));
  const double h = st.Rdot / st.R;
  ConnectionCoeffs expect;
  for (int i = 1; i <= 3; ++i) {
    expect(0, i, i) = h;
    expect(i, 0, i) = h;
  }
  CHECK(max_abs_diff(g, expect) == 0.0);
}

TEST_CASE("standard connection vanishes for a static flat universe") {
  const SpacetimePoint p{0.0, 0.4, -0.3, 0.8};
  const ScaleState st{0.0, 1.0, 0.0, 0.0};
  CHECK(connection_standard(p, st, params_for(0)).max_abs() == 0.0);
}

TEST_CASE("standard connection rotation block") {
  const SpacetimePoint p{0.0, 1.0, 0.0, 0.0};
  const ScaleState st{0.0, 1.0, 0.0, 0.0};
  const ConnectionCoeffs g = connection_standard(p, st, params_for(+1));
  // kappa x / (2R) = 1/2
  CHECK(g(1, 2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g(2, 1, 2) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(g(1, 2, 2) == -g(2, 1, 2));
}

TEST_CASE("deformed connection coincides with standard at s=0") {
  Sampler rng;
  for (int n = 0; n < 20; ++n) {
    const int kappa = rng.pick_kappa();
    const SpacetimePoint p = rng.point();
    const ScaleState st = rng.state();
    CHECK(max_abs_diff(connection_deformed(p, st, params_for(kappa, 0.0)),
                       connection_standard(p, st, params_for(kappa))) == 0.0);
  }
}

TEST_CASE("deformed connection worked values") {
  // kappa=0, origin, s=-1, R=1, Rdot=1: q = 2
  const SpacetimePoint origin{1.0, 0, 0, 0};
  const ScaleState st{1.0, 1.0, 1.0, 0.0};
  const ConnectionCoeffs g =
      connection_deformed(origin, st, params_for(0, -1.0));
  CHECK(g(0, 0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  for (int i = 1; i <= 3; ++i) {
    CHECK(g(0, i, i) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g(i, 0, i) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g(i, i, 0) == doctest::Approx(-0.5).epsilon(1e-15));
  }
}

TEST_CASE("closed-form connections satisfy the structure equations") {
  // checked against the finite-difference solver, which only consumes
  // pointwise coframe/metric values
  Sampler rng;
  OracleConfig cfg;
  for (int n = 0; n < 40; ++n) {
    const int kappa = rng.pick_kappa();
    const SpacetimePoint p = rng.point();
    const ScaleState st = rng.state_at(p.t);
    const double s = rng.s_for(st.R, 0.1);
    const ScaleModel model = taylor_scale_model(st);

    const CosmologyParams ps = params_for(kappa, s);
    const ConnectionCoeffs fd_std = connection_from_structure(
        make_coframe_field(ps, model),
        make_metric_field(MetricTag::standard, ps, model), p, cfg);
    CHECK(max_abs_diff(fd_std, connection_standard(p, st, ps)) < 1e-8);

    const ConnectionCoeffs fd_def = connection_from_structure(
        make_coframe_field(ps, model),
        make_metric_field(MetricTag::deformed, ps, model), p, cfg);
    CHECK(max_abs_diff(fd_def, connection_deformed(p, st, ps)) < 1e-8);
  }
}

TEST_CASE("curvature vanishes for static flat spacetime") {
  const SpacetimePoint p{0.0, 0.2, -0.1, 0.5};
  const ScaleState st{0.0, 1.0, 0.0, 0.0};
  for (MetricTag tag : {MetricTag::standard, MetricTag::deformed}) {
    const CurvatureBundle cb =
        curvature_bundle(tag, p, st, params_for(0, tag == MetricTag::deformed ? 0.5 : 0.0));
    CHECK(cb.riemann.max_abs() < 1e-15);
    CHECK(cb.ricci.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(cb.ricci_scalar) < 1e-15);
    CHECK(cb.einstein.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(cb.weyl.max_abs() < 1e-15);
  }
}

TEST_CASE("curvature route reproduces the closed-form Einstein tensors") {
  Sampler rng;
  for (int n = 0; n < 30; ++n) {
    const int kappa = rng.pick_kappa();
    const SpacetimePoint p = rng.point();
    const ScaleState st = rng.state();
    const double s = rng.s_for(st.R, 0.1);
    for (MetricTag tag : {MetricTag::standard, MetricTag::deformed}) {
      const CosmologyParams ps = params_for(kappa, s);
      const Mat4 closed = einstein_closed_form(st, ps, tag);
      const double scale = closed.cwiseAbs().maxCoeff();
      if (scale < 1e-3) continue;
      const CurvatureBundle cb = curvature_bundle(tag, p, st, ps);
      CHECK((cb.einstein - closed).cwiseAbs().maxCoeff() / scale < 1e-7);
    }
  }
}

TEST_CASE("curvature symmetries and conformal flatness") {
  Sampler rng;
  for (int n = 0; n < 25; ++n) {
    const int kappa = rng.pick_kappa();
    const SpacetimePoint p = rng.point();
    const ScaleState st = rng.state();
    const double s = rng.s_for(st.R, 0.1);
    for (MetricTag tag : {MetricTag::standard, MetricTag::deformed}) {
      const CurvatureBundle cb =
          curvature_bundle(tag, p, st, params_for(kappa, s));
      // antisymmetry in the last index pair
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
          CHECK((cb.riemann.c[mu][nu] + cb.riemann.c[mu][nu].transpose())
                    .cwiseAbs()
                    .maxCoeff() < 1e-12);
      // first Bianchi
      double bianchi = 0.0;
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
          for (int rho = 0; rho < 4; ++rho)
            for (int sg = 0; sg < 4; ++sg)
              bianchi = std::max(bianchi,
                                 std::abs(cb.riemann(mu, nu, rho, sg) +
                                          cb.riemann(mu, rho, sg, nu) +
                                          cb.riemann(mu, sg, nu, rho)));
      CHECK(bianchi < 1e-9);
      CHECK((cb.ricci - cb.ricci.transpose()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(cb.weyl.max_abs() < 1e-9);
      // Weyl trace g^{ac} C_{abcd}
      const Mat4 ginv =
          frame_metric(tag, s, st.R).gcomp.inverse();
      for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d) {
          double tr = 0.0;
          for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c)
              tr += ginv(a, c) * cb.weyl(a, b, c, d);
          CHECK(std::abs(tr) < 1e-9);
        }
    }
  }
}

TEST_CASE("standard Einstein tensor is diagonal and isotropic") {
  Sampler rng;
  for (int n = 0; n < 25; ++n) {
    const CurvatureBundle cb = curvature_bundle(
        MetricTag::standard, rng.point(), rng.state(),
        params_for(rng.pick_kappa()));
    const Mat4& E = cb.einstein;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        if (mu != nu) CHECK(std::abs(E(mu, nu)) < 1e-10);
    CHECK(E(1, 1) == doctest::Approx(E(2, 2)).epsilon(1e-10));
    CHECK(E(2, 2) == doctest::Approx(E(3, 3)).epsilon(1e-10));
  }
}

TEST_CASE("closed-form Einstein worked example and s=0 degeneration") {
  const ScaleState st{0.0, 1.0, 1.0, 0.0};
  const Mat4 E =
      einstein_closed_form(st, params_for(0, -1.0), MetricTag::standard);
  CHECK(E(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(E(1, 1) == doctest::Approx(-1.0).epsilon(1e-15));
  // E~_ij = (E_ij + s(kappa - 2 Rdot^2 + 2 R Rddot))/q = (-1 + 2)/2
  const Mat4 Et =
      einstein_closed_form(st, params_for(0, -1.0), MetricTag::deformed);
  CHECK(Et(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(Et(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(Et(2, 2) == doctest::Approx(0.5).epsilon(1e-15));

  Sampler rng;
  for (int n = 0; n < 10; ++n) {
    const ScaleState r = rng.state();
    const CosmologyParams ps = params_for(rng.pick_kappa(), 0.0);
    CHECK((einstein_closed_form(r, ps, MetricTag::deformed) -
           einstein_closed_form(r, ps, MetricTag::standard))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("scalar invariants: flat case and the dust trace identity") {
  const SpacetimePoint p{0.0, 0.1, 0.2, -0.4};
  const ScaleState flat{0.0, 1.0, 0.0, 0.0};
  const CurvatureBundle cb0 =
      curvature_bundle(MetricTag::standard, p, flat, params_for(0));
  const ScalarInvariants inv0 =
      scalar_invariants(cb0, frame_metric(MetricTag::standard, 0.0, 1.0));
  CHECK(std::abs(inv0.ricci_scalar) < 1e-14);
  CHECK(std::abs(inv0.ricci_squared) < 1e-14);

  // on a dust solution R_scalar = 8 pi G rho
  CosmologyParams ps = params_for(0);
  ps.M = 2.0 / 9.0;
  for (double t : {0.7, 1.0, 2.2}) {
    const ScaleState st = analytic_scale(ps, t);
    const CurvatureBundle cb =
        curvature_bundle(MetricTag::standard, p, st, ps);
    const ScalarInvariants inv =
        scalar_invariants(cb, frame_metric(MetricTag::standard, 0.0, st.R));
    const double rho = 3.0 * ps.M / (4.0 * 3.14159265358979323846 *
                                     st.R * st.R * st.R);
    CHECK(inv.ricci_scalar ==
          doctest::Approx(8.0 * 3.14159265358979323846 * ps.G * rho)
              .epsilon(1e-9));
  }
}

TEST_CASE("invariant curves distinguish s=0 from s=1") {
  // heuristic non-isometry probe along a flat dust background kept below
  // the shell (R < 1)
  CosmologyParams ps = params_for(0);
  ps.M = 2.0 / 9.0;
  const SpacetimePoint p{0.0, 0.0, 0.0, 0.0};
  double max_gap = 0.0;
  for (double t : {0.35, 0.5, 0.65, 0.8}) {
    const ScaleState st = analytic_scale(ps, t);
    CosmologyParams ps1 = ps;
    ps1.s = 1.0;
    const auto inv0 = scalar_invariants(
        curvature_bundle(MetricTag::standard, p, st, ps),
        frame_metric(MetricTag::standard, 0.0, st.R));
    const auto inv1 = scalar_invariants(
        curvature_bundle(MetricTag::deformed, p, st, ps1),
        frame_metric(MetricTag::deformed, 1.0, st.R));
    max_gap = std::max(max_gap,
                       std::abs(inv0.ricci_scalar - inv1.ricci_scalar));
  }
  CHECK(max_gap > 0.1);
}
