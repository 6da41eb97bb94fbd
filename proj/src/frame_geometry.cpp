#include "rwproj/frame_geometry.hpp"

#include <cmath>

namespace rwproj {

namespace {

void require_scale(double R) {
  if (!(R > 0.0)) throw SingularInput("scale factor R must be positive");
}

double require_patch(const SpacetimePoint& p, const CosmologyParams& params) {
  const double f = patch_factor(p, params.kappa);
  if (!(f > 0.0))
    throw PatchViolation("point outside the coordinate patch: 1 + (kappa/4)|x|^2 <= 0");
  return f;
}

double require_shell(double s, double R, double eps) {
  const double q = shell_factor(s, R);
  if (std::abs(q) < eps)
    throw MetricSingular("deformed metric singular: |1 - s R^2| < guard");
  return q;
}

// Scalar building blocks shared by the two connection matrices.
struct ConnScalars {
  double h;     // Rdot/R
  double a;     // s R Rdot / q
  double w;     // Rdot / (R q)
  double c[3];  // kappa x^i / (2R)
};

ConnScalars conn_scalars(const SpacetimePoint& p, const ScaleState& st,
                         const CosmologyParams& params, double q) {
  ConnScalars v{};
  v.h = st.Rdot / st.R;
  v.a = params.s * st.R * st.Rdot / q;
  v.w = st.Rdot / (st.R * q);
  const double k2R = params.kappa / (2.0 * st.R);
  v.c[0] = k2R * p.x;
  v.c[1] = k2R * p.y;
  v.c[2] = k2R * p.z;
  return v;
}

// Fills the kappa-dependent rotation block Gamma^i_{j,i} = -c_j,
// Gamma^i_{j,j} = +c_i (i != j), common to both connections.
void fill_spatial_block(ConnectionCoeffs& g, const double c[3]) {
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      g(i, j, i) = -c[j - 1];
      g(i, j, j) = c[i - 1];
    }
}

}  // namespace

CoframeMatrix eval_coframe(const SpacetimePoint& p, double R,
                           const CosmologyParams& params) {
  require_scale(R);
  const double f = require_patch(p, params);
  CoframeMatrix out;
  out.e.setZero();
  out.e(0, 0) = 1.0;
  const double d = R / f;
  for (int i = 1; i <= 3; ++i) out.e(i, i) = d;
  return out;
}

std::array<Mat4, 4> coframe_coordinate_partials(const SpacetimePoint& p,
                                                const ScaleState& st,
                                                const CosmologyParams& params) {
  require_scale(st.R);
  const double f = require_patch(p, params);
  std::array<Mat4, 4> out{Mat4::Zero(), Mat4::Zero(), Mat4::Zero(),
                          Mat4::Zero()};
  // d_t theta^i_i = Rdot / f
  for (int i = 1; i <= 3; ++i) out[0](i, i) = st.Rdot / f;
  // d_k (R/f) = -R (kappa/2) x^k / f^2
  const double pref = -st.R * 0.5 * params.kappa / (f * f);
  const double xk[3] = {p.x, p.y, p.z};
  for (int k = 1; k <= 3; ++k)
    for (int i = 1; i <= 3; ++i) out[k](i, i) = pref * xk[k - 1];
  return out;
}

FrameMetric frame_metric(MetricTag which, double s, double R,
                         double eps_sing) {
  require_scale(R);
  FrameMetric out;
  out.which = which;
  if (which == MetricTag::standard) {
    out.gcomp = Mat4::Identity();
    out.gcomp(0, 0) = -1.0;
    return out;
  }
  const double q = require_shell(s, R, eps_sing);
  out.gcomp.setZero();
  out.gcomp(0, 0) = -1.0 / (q * q);
  for (int i = 1; i <= 3; ++i) out.gcomp(i, i) = 1.0 / q;
  return out;
}

std::array<Mat4, 4> metric_coordinate_partials(MetricTag which, double s,
                                               const ScaleState& st) {
  std::array<Mat4, 4> out{Mat4::Zero(), Mat4::Zero(), Mat4::Zero(),
                          Mat4::Zero()};
  if (which == MetricTag::standard) return out;
  require_scale(st.R);
  const double q = require_shell(s, st.R, kSingularGuard);
  const double sRRdot = s * st.R * st.Rdot;
  // d_t (-1/q^2) = -4 s R Rdot / q^3,  d_t (1/q) = 2 s R Rdot / q^2
  out[0](0, 0) = -4.0 * sRRdot / (q * q * q);
  for (int i = 1; i <= 3; ++i) out[0](i, i) = 2.0 * sRRdot / (q * q);
  return out;
}

ConnectionCoeffs connection_standard(const SpacetimePoint& p,
                                     const ScaleState& st,
                                     const CosmologyParams& params) {
  require_scale(st.R);
  require_patch(p, params);
  const ConnScalars v = conn_scalars(p, st, params, 1.0);
  ConnectionCoeffs g;
  for (int i = 1; i <= 3; ++i) {
    g(0, i, i) = v.h;
    g(i, 0, i) = v.h;
  }
  fill_spatial_block(g, v.c);
  return g;
}

ConnectionCoeffs connection_deformed(const SpacetimePoint& p,
                                     const ScaleState& st,
                                     const CosmologyParams& params) {
  require_scale(st.R);
  require_patch(p, params);
  const double q = require_shell(params.s, st.R, kSingularGuard);
  const ConnScalars v = conn_scalars(p, st, params, q);
  ConnectionCoeffs g;
  g(0, 0, 0) = 2.0 * v.a;
  for (int i = 1; i <= 3; ++i) {
    g(0, i, i) = v.h;
    g(i, 0, i) = v.w;
    g(i, i, 0) = v.a;
  }
  fill_spatial_block(g, v.c);
  return g;
}

std::array<ConnectionCoeffs, 4> connection_coordinate_partials(
    MetricTag tag, const SpacetimePoint& p, const ScaleState& st,
    const CosmologyParams& params) {
  require_scale(st.R);
  require_patch(p, params);
  const double R = st.R, Rd = st.Rdot, Rdd = st.Rddot;
  const double q =
      tag == MetricTag::deformed ? require_shell(params.s, R, kSingularGuard)
                                 : 1.0;
  const ConnScalars v = conn_scalars(p, st, params, q);

  // time derivatives of the scalar blocks
  const double dh = Rdd / R - v.h * v.h;
  double da = 0.0, dw = 0.0;
  if (tag == MetricTag::deformed) {
    const double s = params.s;
    da = s * (Rd * Rd + R * Rdd) / q +
         2.0 * s * s * R * R * Rd * Rd / (q * q);
    dw = Rdd / (R * q) - Rd * Rd / (R * R * q) + 2.0 * s * Rd * Rd / (q * q);
  }
  double dc_t[3];
  for (int j = 0; j < 3; ++j) dc_t[j] = -v.c[j] * v.h;
  const double dc_x = params.kappa / (2.0 * R);  // d_k c_j = dc_x delta_jk

  std::array<ConnectionCoeffs, 4> out;

  // d_t: same sparsity as the connection itself
  ConnectionCoeffs& gt = out[0];
  for (int i = 1; i <= 3; ++i) {
    gt(0, i, i) = dh;
    gt(i, 0, i) = tag == MetricTag::deformed ? dw : dh;
    if (tag == MetricTag::deformed) gt(i, i, 0) = da;
  }
  if (tag == MetricTag::deformed) gt(0, 0, 0) = 2.0 * da;
  fill_spatial_block(gt, dc_t);

  // d_k: only the rotation block depends on position
  for (int k = 1; k <= 3; ++k) {
    ConnectionCoeffs& gk = out[k];
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        if (i == j) continue;
        if (j == k) gk(i, j, i) -= dc_x;
        if (i == k) gk(i, j, j) += dc_x;
      }
  }
  return out;
}

std::array<Mat4, 4> structure_functions(
    const CoframeMatrix& coframe, const std::array<Mat4, 4>& partials) {
  if (std::abs(coframe.det()) < 1e-300)
    throw SingularFrame("coframe matrix is singular");
  const Mat4 e = coframe.dual();  // e(a, mu)
  std::array<Mat4, 4> C{Mat4::Zero(), Mat4::Zero(), Mat4::Zero(),
                        Mat4::Zero()};
  for (int mu = 0; mu < 4; ++mu) {
    // antisymmetrized coordinate curl d_a theta^mu_b - d_b theta^mu_a
    Mat4 curl;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        curl(a, b) = partials[a](mu, b) - partials[b](mu, a);
    // C^mu_{nu rho} = -curl(a,b) e(a,nu) e(b,rho)
    C[mu] = -(e.transpose() * curl * e);
  }
  return C;
}

CurvatureBundle curvature_from_fields(
    const ConnectionCoeffs& gamma,
    const std::array<ConnectionCoeffs, 4>& gamma_partials,
    const CoframeMatrix& coframe, const std::array<Mat4, 4>& coframe_partials,
    const FrameMetric& metric) {
  const Mat4 e = coframe.dual();
  const std::array<Mat4, 4> C = structure_functions(coframe, coframe_partials);

  // frame derivatives X_rho(Gamma^mu_{nu sigma}) = e(a, rho) d_a Gamma
  std::array<ConnectionCoeffs, 4> XG;
  for (int rho = 0; rho < 4; ++rho)
    for (int a = 0; a < 4; ++a)
      if (e(a, rho) != 0.0)
        for (int mu = 0; mu < 4; ++mu)
          XG[rho].gamma[mu] += e(a, rho) * gamma_partials[a].gamma[mu];

  CurvatureBundle cb;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho)
        for (int sigma = rho + 1; sigma < 4; ++sigma) {
          double r = XG[rho](mu, nu, sigma) - XG[sigma](mu, nu, rho);
          for (int lam = 0; lam < 4; ++lam) {
            r += gamma(mu, lam, rho) * gamma(lam, nu, sigma) -
                 gamma(mu, lam, sigma) * gamma(lam, nu, rho);
            r -= gamma(mu, nu, lam) * C[lam](rho, sigma);
          }
          cb.riemann(mu, nu, rho, sigma) = r;
          cb.riemann(mu, nu, sigma, rho) = -r;
        }

  for (int nu = 0; nu < 4; ++nu)
    for (int sigma = 0; sigma < 4; ++sigma) {
      double r = 0.0;
      for (int mu = 0; mu < 4; ++mu) r += cb.riemann(mu, nu, mu, sigma);
      cb.ricci(nu, sigma) = r;
    }

  const Mat4& g = metric.gcomp;
  const Mat4 ginv = g.inverse();
  cb.ricci_scalar = (ginv * cb.ricci).trace();
  cb.einstein = cb.ricci - 0.5 * cb.ricci_scalar * g;

  // fully covariant Riemann for the conformal decomposition
  Tensor4 rlow;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho)
        for (int sigma = 0; sigma < 4; ++sigma) {
          double r = 0.0;
          for (int lam = 0; lam < 4; ++lam)
            r += g(mu, lam) * cb.riemann(lam, nu, rho, sigma);
          rlow(mu, nu, rho, sigma) = r;
        }

  const double Rs = cb.ricci_scalar;
  const Mat4& Ric = cb.ricci;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double w = rlow(a, b, c, d);
          w -= 0.5 * (g(a, c) * Ric(b, d) - g(a, d) * Ric(b, c) -
                      g(b, c) * Ric(a, d) + g(b, d) * Ric(a, c));
          w += (Rs / 6.0) * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
          cb.weyl(a, b, c, d) = w;
        }
  return cb;
}

CurvatureBundle curvature_bundle(MetricTag tag, const SpacetimePoint& p,
                                 const ScaleState& st,
                                 const CosmologyParams& params) {
  const ConnectionCoeffs gamma = tag == MetricTag::standard
                                     ? connection_standard(p, st, params)
                                     : connection_deformed(p, st, params);
  const auto gamma_partials =
      connection_coordinate_partials(tag, p, st, params);
  const CoframeMatrix coframe = eval_coframe(p, st.R, params);
  const auto coframe_partials = coframe_coordinate_partials(p, st, params);
  const FrameMetric metric = frame_metric(tag, params.s, st.R);
  return curvature_from_fields(gamma, gamma_partials, coframe,
                               coframe_partials, metric);
}

Mat4 einstein_closed_form(const ScaleState& st, const CosmologyParams& params,
                          MetricTag which) {
  require_scale(st.R);
  const double R = st.R, Rd = st.Rdot, Rdd = st.Rddot;
  const double kappa = params.kappa;
  const double E00 = 3.0 * (kappa + Rd * Rd) / (R * R);
  const double Eij = -(kappa + Rd * Rd + 2.0 * R * Rdd) / (R * R);
  Mat4 out = Mat4::Zero();
  if (which == MetricTag::standard) {
    out(0, 0) = E00;
    for (int i = 1; i <= 3; ++i) out(i, i) = Eij;
    return out;
  }
  const double s = params.s;
  const double q = shell_factor(s, R);
  if (std::abs(q) < kSingularGuard)
    throw MetricSingular("deformed metric singular: |1 - s R^2| < guard");
  out(0, 0) = (E00 - 3.0 * s * kappa) / (q * q);
  const double Etij = (Eij + s * (kappa - 2.0 * Rd * Rd + 2.0 * R * Rdd)) / q;
  for (int i = 1; i <= 3; ++i) out(i, i) = Etij;
  return out;
}

ScalarInvariants scalar_invariants(const CurvatureBundle& cb,
                                   const FrameMetric& metric) {
  const Mat4 ginv = metric.gcomp.inverse();
  ScalarInvariants out;
  out.ricci_scalar = (ginv * cb.ricci).trace();
  // R_{mu nu} R^{mu nu} = tr(g^-1 Ric g^-1 Ric)
  out.ricci_squared = (ginv * cb.ricci * ginv * cb.ricci).trace();
  return out;
}

}  // namespace rwproj
