#include "rwproj/projective.hpp"

#include <cmath>
#include <sstream>

namespace rwproj {

OneForm projective_one_form(const ScaleState& st, double s) {
  if (!(st.R > 0.0)) throw SingularInput("scale factor R must be positive");
  const double q = shell_factor(s, st.R);
  if (std::abs(q) < kSingularGuard)
    throw MetricSingular("deformed metric singular: |1 - s R^2| < guard");
  OneForm A;
  A.a(0) = s * st.R * st.Rdot / q;
  return A;
}

ConnectionCoeffs apply_projective(const ConnectionCoeffs& gamma,
                                  const OneForm& A) {
  ConnectionCoeffs out = gamma;
  for (int mu = 0; mu < 4; ++mu)
    for (int rho = 0; rho < 4; ++rho) {
      out(mu, mu, rho) += A.a(rho);  // delta^mu_nu A_rho
      out(mu, rho, mu) += A.a(rho);  // delta^mu_rho A_nu
    }
  return out;
}

ProjectiveFit fit_projective(const ConnectionCoeffs& gamma,
                             const ConnectionCoeffs& gamma_tilde) {
  // difference as a 64-vector, pattern matrix M(64 x 4) with
  // M[(mu,nu,rho), k] = delta^mu_nu delta_{rho k} + delta^mu_rho delta_{nu k}
  Eigen::Matrix<double, 64, 4> M = Eigen::Matrix<double, 64, 4>::Zero();
  Eigen::Matrix<double, 64, 1> d;
  int row = 0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho, ++row) {
        d(row) = gamma_tilde(mu, nu, rho) - gamma(mu, nu, rho);
        if (mu == nu) M(row, rho) += 1.0;
        if (mu == rho) M(row, nu) += 1.0;
      }
  ProjectiveFit fit;
  fit.A.a = M.colPivHouseholderQr().solve(d);
  fit.residual = (M * fit.A.a - d).norm();
  return fit;
}

ProjectiveFit extract_projective(const ConnectionCoeffs& gamma,
                                 const ConnectionCoeffs& gamma_tilde,
                                 double threshold) {
  ProjectiveFit fit = fit_projective(gamma, gamma_tilde);
  if (!(fit.residual < threshold)) {
    std::ostringstream msg;
    msg << "connection pair is not projectively related: residual "
        << fit.residual << " >= " << threshold;
    throw NotProjectivelyRelated(msg.str());
  }
  return fit;
}

}  // namespace rwproj
