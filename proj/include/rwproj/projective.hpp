#ifndef RWPROJ_PROJECTIVE_HPP
#define RWPROJ_PROJECTIVE_HPP

// The projective transformation linking the Levi-Civita connections of the
// family: Gamma~^mu_{nu rho} = Gamma^mu_{nu rho} + delta^mu_nu A_rho
//                            + delta^mu_rho A_nu,
// with A = s R Rdot / (1 - s R^2) theta^0.

#include "rwproj/types.hpp"

namespace rwproj {

OneForm projective_one_form(const ScaleState& st, double s);

ConnectionCoeffs apply_projective(const ConnectionCoeffs& gamma,
                                  const OneForm& A);

struct ProjectiveFit {
  OneForm A;
  double residual = 0.0;  // 2-norm over all 64 coefficient slots
};

// Least-squares fit of A to gamma_tilde - gamma against the
// delta^mu_nu A_rho + delta^mu_rho A_nu pattern.  Never throws; the residual
// measures how far the pair is from projective relatedness.
ProjectiveFit fit_projective(const ConnectionCoeffs& gamma,
                             const ConnectionCoeffs& gamma_tilde);

// default threshold: 10x the expected closed-form noise floor
inline constexpr double kProjectiveResidualThreshold = 1e-8;

// As fit_projective, but certifies the result: throws NotProjectivelyRelated
// when the residual reaches the threshold.
ProjectiveFit extract_projective(
    const ConnectionCoeffs& gamma, const ConnectionCoeffs& gamma_tilde,
    double threshold = kProjectiveResidualThreshold);

}  // namespace rwproj

#endif
