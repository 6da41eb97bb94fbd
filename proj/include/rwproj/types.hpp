#ifndef RWPROJ_TYPES_HPP
#define RWPROJ_TYPES_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace rwproj {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// coordinate patch denominator 1 + (kappa/4)|x|^2 is non-positive
struct PatchViolation : Error { using Error::Error; };
// |1 - s R^2| below the singularity guard
struct MetricSingular : Error { using Error::Error; };
// connection pair does not differ by a delta*A + A*theta pattern
struct NotProjectivelyRelated : Error { using Error::Error; };
// ScaleState does not satisfy the Friedmann equations within tolerance
struct FriedmannViolation : Error { using Error::Error; };
// closed-universe expansion reached Rdot = 0 and recollapse is not enabled
struct TurningPoint : Error { using Error::Error; };
// invalid scalar input (kappa outside {-1,0,+1}, R <= 0, M < 0, ...)
struct SingularInput : Error { using Error::Error; };
// zero spatial direction where one is required
struct DegenerateDirection : Error { using Error::Error; };
// trajectory left the valid coordinate patch or hit the s R^2 = 1 shell
struct PatchExit : Error { using Error::Error; };
// adaptive step size underflow or step budget exhausted
struct StepFailure : Error { using Error::Error; };
// compared paths share no arc-length range
struct EmptyOverlap : Error { using Error::Error; };
// argument outside the domain of an analytic solution
struct DomainError : Error { using Error::Error; };
// coframe matrix not invertible at the requested point
struct SingularFrame : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class MetricTag { standard, deformed };

inline const char* to_string(MetricTag tag) {
  return tag == MetricTag::standard ? "standard" : "deformed";
}

// Parameters of the one-parameter family built over a dust cosmology.
struct CosmologyParams {
  int kappa = 0;   // spatial curvature sign, exactly -1, 0 or +1
  double G = 1.0;  // gravitational constant (geometric units, c = 1)
  double M = 0.0;  // dust mass parameter, M = (4/3) pi rho R^3
  double s = 0.0;  // deformation parameter (1/length^2)

  void validate() const {
    if (kappa != -1 && kappa != 0 && kappa != 1)
      throw SingularInput("kappa must be -1, 0, or +1");
    if (!(G > 0.0)) throw SingularInput("G must be positive");
    if (!(M >= 0.0)) throw SingularInput("M must be non-negative");
    if (!std::isfinite(s)) throw SingularInput("s must be finite");
  }
};

struct SpacetimePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double r2() const { return x * x + y * y + z * z; }
  Vec3 spatial() const { return Vec3(x, y, z); }
  SpacetimePoint shifted(int a, double h) const {
    SpacetimePoint q = *this;
    switch (a) {
      case 0: q.t += h; break;
      case 1: q.x += h; break;
      case 2: q.y += h; break;
      default: q.z += h; break;
    }
    return q;
  }
};

// Snapshot of the scale factor along a solution of the Friedmann equations.
struct ScaleState {
  double t = 0.0;
  double R = 1.0;
  double Rdot = 0.0;
  double Rddot = 0.0;
};

// Scale factor as a function of cosmic time, with the derivatives the
// connection and curvature formulas need.
using ScaleModel = std::function<ScaleState(double)>;

// Quadratic extension of a single state; exact through second derivatives,
// which is all the curvature of the family depends on.
inline ScaleModel taylor_scale_model(const ScaleState& st) {
  return [st](double t) {
    const double dt = t - st.t;
    ScaleState out;
    out.t = t;
    out.R = st.R + st.Rdot * dt + 0.5 * st.Rddot * dt * dt;
    out.Rdot = st.Rdot + st.Rddot * dt;
    out.Rddot = st.Rddot;
    return out;
  };
}

// 1 - s R^2, the factor that controls where the deformed metric degenerates
inline double shell_factor(double s, double R) { return 1.0 - s * R * R; }

// operations refuse rather than extrapolate across the s R^2 = 1 shell
inline constexpr double kSingularGuard = 1e-12;

// ---------------------------------------------------------------------------
// Frame-indexed tensor containers
// ---------------------------------------------------------------------------

// Coframe components theta^mu_a (frame row mu, coordinate column a).
struct CoframeMatrix {
  Mat4 e = Mat4::Identity();

  // dual frame: X_mu = dual()(a, mu) d/dx^a
  Mat4 dual() const { return e.inverse(); }
  double det() const { return e.determinant(); }
};

// Metric components in the common coframe, together with which member of the
// family they belong to.
struct FrameMetric {
  Mat4 gcomp = Mat4::Identity();
  MetricTag which = MetricTag::standard;
};

// Connection coefficients Gamma^mu_{nu rho}, with Gamma^mu_nu =
// Gamma^mu_{nu rho} theta^rho.  Stored as gamma[mu](nu, rho).
struct ConnectionCoeffs {
  std::array<Mat4, 4> gamma{Mat4::Zero(), Mat4::Zero(), Mat4::Zero(),
                            Mat4::Zero()};

  double operator()(int mu, int nu, int rho) const {
    return gamma[mu](nu, rho);
  }
  double& operator()(int mu, int nu, int rho) { return gamma[mu](nu, rho); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& g : gamma) m = std::max(m, g.cwiseAbs().maxCoeff());
    return m;
  }
};

inline double max_abs_diff(const ConnectionCoeffs& a,
                           const ConnectionCoeffs& b) {
  double m = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    m = std::max(m, (a.gamma[mu] - b.gamma[mu]).cwiseAbs().maxCoeff());
  return m;
}

// Rank-4 tensor in frame indices, T[mu][nu](rho, sigma).
struct Tensor4 {
  std::array<std::array<Mat4, 4>, 4> c{};

  Tensor4() {
    for (auto& row : c)
      for (auto& m : row) m.setZero();
  }
  double operator()(int mu, int nu, int rho, int sigma) const {
    return c[mu][nu](rho, sigma);
  }
  double& operator()(int mu, int nu, int rho, int sigma) {
    return c[mu][nu](rho, sigma);
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& row : c)
      for (const auto& mat : row) m = std::max(m, mat.cwiseAbs().maxCoeff());
    return m;
  }
};

// Riemann, Ricci, scalar, Einstein and Weyl at a point, all in the common
// coframe.
struct CurvatureBundle {
  Tensor4 riemann;  // R^mu_{nu rho sigma}
  Mat4 ricci = Mat4::Zero();
  double ricci_scalar = 0.0;
  Mat4 einstein = Mat4::Zero();
  Tensor4 weyl;  // fully covariant C_{mu nu rho sigma}
};

// Frame components of a 1-form, A = a(mu) theta^mu.
struct OneForm {
  Vec4 a = Vec4::Zero();
};

}  // namespace rwproj

#endif
