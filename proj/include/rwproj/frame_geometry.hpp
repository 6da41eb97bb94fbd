#ifndef RWPROJ_FRAME_GEOMETRY_HPP
#define RWPROJ_FRAME_GEOMETRY_HPP

// Closed-form geometry of the Robertson-Walker family in the common
// orthonormal-for-g coframe
//
//   theta^0 = dt,   theta^i = R dx^i / (1 + (kappa/4)(x^2+y^2+z^2)),
//
// in which the standard metric has constant components eta = diag(-1,1,1,1)
// and the deformed member has components
//
//   diag(-1/(1-sR^2)^2, 1/(1-sR^2), 1/(1-sR^2), 1/(1-sR^2)).
//
// Connection coefficients, their coordinate partials, and every
// curvature-derived tensor are evaluated analytically here; the
// finite-difference route lives in oracle.hpp.

#include "rwproj/types.hpp"

namespace rwproj {

// 1 + (kappa/4)(x^2+y^2+z^2)
inline double patch_factor(const SpacetimePoint& p, int kappa) {
  return 1.0 + 0.25 * kappa * p.r2();
}

CoframeMatrix eval_coframe(const SpacetimePoint& p, double R,
                           const CosmologyParams& params);

// d_a theta^mu_b, indexed [a](mu, b) over coordinates a in (t,x,y,z)
std::array<Mat4, 4> coframe_coordinate_partials(const SpacetimePoint& p,
                                                const ScaleState& st,
                                                const CosmologyParams& params);

FrameMetric frame_metric(MetricTag which, double s, double R,
                         double eps_sing = kSingularGuard);

// d_a g_{mu nu}, indexed [a](mu, nu); only the time slot is nonzero
std::array<Mat4, 4> metric_coordinate_partials(MetricTag which, double s,
                                               const ScaleState& st);

ConnectionCoeffs connection_standard(const SpacetimePoint& p,
                                     const ScaleState& st,
                                     const CosmologyParams& params);

ConnectionCoeffs connection_deformed(const SpacetimePoint& p,
                                     const ScaleState& st,
                                     const CosmologyParams& params);

// d_a Gamma^mu_{nu rho}, indexed [a]; hand-derived from the closed forms
std::array<ConnectionCoeffs, 4> connection_coordinate_partials(
    MetricTag tag, const SpacetimePoint& p, const ScaleState& st,
    const CosmologyParams& params);

// Structure functions C^mu_{nu rho} of the coframe, defined by
// d theta^mu = -(1/2) C^mu_{nu rho} theta^nu ^ theta^rho, equivalently
// [X_nu, X_rho] = C^mu_{nu rho} X_mu.  Indexed [mu](nu, rho).
std::array<Mat4, 4> structure_functions(const CoframeMatrix& coframe,
                                        const std::array<Mat4, 4>& partials);

// Curvature from supplied pointwise differential data:
//   R^mu_{nu rho sigma} = X_rho(G^mu_{nu sigma}) - X_sigma(G^mu_{nu rho})
//                       + G^mu_{lam rho} G^lam_{nu sigma}
//                       - G^mu_{lam sigma} G^lam_{nu rho}
//                       - G^mu_{nu lam} C^lam_{rho sigma},
// the coefficient form of dGamma + Gamma ^ Gamma.  Ricci is the trace
// R_{nu sigma} = R^mu_{nu mu sigma}; Weyl is the standard 4d
// conformal decomposition of the fully covariant Riemann tensor.
CurvatureBundle curvature_from_fields(
    const ConnectionCoeffs& gamma,
    const std::array<ConnectionCoeffs, 4>& gamma_partials,
    const CoframeMatrix& coframe, const std::array<Mat4, 4>& coframe_partials,
    const FrameMetric& metric);

// Binds curvature_from_fields to the closed forms of one family member.
CurvatureBundle curvature_bundle(MetricTag tag, const SpacetimePoint& p,
                                 const ScaleState& st,
                                 const CosmologyParams& params);

// Closed-form Einstein tensors of the family in the common coframe:
//   standard:  E_00 = 3(kappa + Rdot^2)/R^2,
//              E_ij = -(kappa + Rdot^2 + 2 R Rddot)/R^2 delta_ij
//   deformed:  E~_00 = (E_00 - 3 s kappa)/(1-sR^2)^2,
//              E~_ij = (E_ij + s(kappa - 2 Rdot^2 + 2 R Rddot) delta_ij)
//                      / (1-sR^2)
Mat4 einstein_closed_form(const ScaleState& st, const CosmologyParams& params,
                          MetricTag which);

struct ScalarInvariants {
  double ricci_scalar = 0.0;
  double ricci_squared = 0.0;  // R_{mu nu} R^{mu nu}
};

ScalarInvariants scalar_invariants(const CurvatureBundle& cb,
                                   const FrameMetric& metric);

}  // namespace rwproj

#endif
