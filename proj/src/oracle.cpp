#include "rwproj/oracle.hpp"

#include "rwproj/cosmology.hpp"
#include "rwproj/frame_geometry.hpp"
#include "rwproj/geodesics.hpp"
#include "rwproj/projective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace rwproj {

namespace {

constexpr double kPi = 3.14159265358979323846;

double char_scale(const SpacetimePoint& p) {
  return std::max({1.0, std::abs(p.t), std::abs(p.x), std::abs(p.y),
                   std::abs(p.z)});
}

// central difference of a matrix-valued field along coordinate a
template <class F>
Mat4 central_diff(const F& field, const SpacetimePoint& p, int a, double h) {
  return (field(p.shifted(a, h)) - field(p.shifted(a, -h))) / (2.0 * h);
}

template <class F>
std::array<Mat4, 4> fd_partials(const F& field, const SpacetimePoint& p,
                                const OracleConfig& cfg) {
  const double h = cfg.fd_step * char_scale(p);
  std::array<Mat4, 4> out;
  for (int a = 0; a < 4; ++a) {
    const Mat4 d1 = central_diff(field, p, a, h);
    if (cfg.richardson) {
      const Mat4 d2 = central_diff(field, p, a, 0.5 * h);
      out[a] = (4.0 * d2 - d1) / 3.0;
    } else {
      out[a] = d1;
    }
  }
  return out;
}

}  // namespace

CoframeField make_coframe_field(const CosmologyParams& params,
                                const ScaleModel& scale) {
  return [params, scale](const SpacetimePoint& p) {
    return eval_coframe(p, scale(p.t).R, params);
  };
}

MetricField make_metric_field(MetricTag tag, const CosmologyParams& params,
                              const ScaleModel& scale) {
  return [tag, params, scale](const SpacetimePoint& p) {
    return frame_metric(tag, params.s, scale(p.t).R).gcomp;
  };
}

ConnectionCoeffs connection_from_structure(const CoframeField& coframe,
                                           const MetricField& metric,
                                           const SpacetimePoint& p,
                                           const OracleConfig& cfg) {
  if (!(cfg.fd_step > 0.0)) throw SingularInput("fd_step must be positive");
  const Mat4 theta = coframe(p).e;
  if (std::abs(theta.determinant()) < 1e-12)
    throw SingularFrame("coframe matrix is singular at the requested point");
  const Mat4 e = theta.inverse();  // e(a, mu)

  const auto theta_field = [&coframe](const SpacetimePoint& q) {
    return coframe(q).e;
  };
  const std::array<Mat4, 4> dtheta = fd_partials(theta_field, p, cfg);
  const std::array<Mat4, 4> dg = fd_partials(metric, p, cfg);

  // structure functions C^mu_{nu rho} = -(curl theta^mu)(a,b) e(a,nu) e(b,rho)
  std::array<Mat4, 4> C;
  for (int mu = 0; mu < 4; ++mu) {
    Mat4 curl;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        curl(a, b) = dtheta[a](mu, b) - dtheta[b](mu, a);
    C[mu] = -(e.transpose() * curl * e);
  }

  // frame derivatives of the metric components
  std::array<Mat4, 4> Xg;
  for (int c = 0; c < 4; ++c) {
    Xg[c].setZero();
    for (int a = 0; a < 4; ++a) Xg[c] += e(a, c) * dg[a];
  }

  const Mat4 g = metric(p);
  std::array<Mat4, 4> Cl;  // C_{a b c} = g_{a lam} C^lam_{b c}
  for (int a = 0; a < 4; ++a) {
    Cl[a].setZero();
    for (int lam = 0; lam < 4; ++lam) Cl[a] += g(a, lam) * C[lam];
  }

  std::array<Mat4, 4> low;  // Gamma_{mu nu rho}
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho)
        low[mu](nu, rho) = 0.5 * (Xg[rho](mu, nu) + Xg[nu](mu, rho) -
                                  Xg[mu](nu, rho) + Cl[mu](rho, nu) +
                                  Cl[nu](mu, rho) - Cl[rho](nu, mu));

  const Mat4 ginv = g.inverse();
  ConnectionCoeffs out;
  for (int mu = 0; mu < 4; ++mu) {
    out.gamma[mu].setZero();
    for (int lam = 0; lam < 4; ++lam)
      out.gamma[mu] += ginv(mu, lam) * low[lam];
  }
  return out;
}

ScaleState analytic_scale(const CosmologyParams& params, double t) {
  params.validate();
  const double GM = params.G * params.M;
  if (!(GM > 0.0))
    throw DomainError("analytic solutions require M > 0");

  ScaleState st;
  st.t = t;
  if (params.kappa == 0) {
    if (!(t > 0.0)) throw DomainError("kappa=0 power law requires t > 0");
    st.R = std::cbrt(4.5 * GM) * std::pow(t, 2.0 / 3.0);
    st.Rdot = 2.0 / 3.0 * st.R / t;
    st.Rddot = -GM / (st.R * st.R);
    return st;
  }

  // parametric forms; invert t(eta) by bisection with a Newton polish
  const bool closed = params.kappa == 1;
  const auto t_of = [GM, closed](double eta) {
    return closed ? GM * (eta - std::sin(eta)) : GM * (std::sinh(eta) - eta);
  };
  const auto dt_of = [GM, closed](double eta) {
    return closed ? GM * (1.0 - std::cos(eta)) : GM * (std::cosh(eta) - 1.0);
  };

  double lo = 0.0, hi;
  if (closed) {
    if (!(t > 0.0) || !(t < 2.0 * kPi * GM))
      throw DomainError("kappa=+1 cycloid requires 0 < t < 2 pi GM");
    hi = 2.0 * kPi;
  } else {
    if (!(t > 0.0)) throw DomainError("kappa=-1 solution requires t > 0");
    hi = 1.0;
    while (t_of(hi) < t) hi *= 2.0;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (t_of(mid) < t ? lo : hi) = mid;
  }
  double eta = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double d = dt_of(eta);
    if (!(d > 0.0)) break;
    const double step = (t_of(eta) - t) / d;
    eta -= step;
    eta = std::clamp(eta, lo, hi);
    if (std::abs(step) < 1e-15 * std::max(1.0, eta)) break;
  }

  if (closed) {
    st.R = GM * (1.0 - std::cos(eta));
    st.Rdot = std::sin(eta) / (1.0 - std::cos(eta));
  } else {
    st.R = GM * (std::cosh(eta) - 1.0);
    st.Rdot = std::sinh(eta) / (std::cosh(eta) - 1.0);
  }
  st.Rddot = -GM / (st.R * st.R);
  return st;
}

// ---------------------------------------------------------------------------
// Cross-check suite
// ---------------------------------------------------------------------------

namespace {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen);
  }
  int pick_kappa() {
    return std::uniform_int_distribution<int>(-1, 1)(gen);
  }
  SpacetimePoint point(int) {
    // components in (-1,1) keep r^2 < 3, inside the kappa=-1 patch (r < 2)
    SpacetimePoint p;
    p.t = uniform(0.5, 3.0);
    p.x = uniform(-1.0, 1.0);
    p.y = uniform(-1.0, 1.0);
    p.z = uniform(-1.0, 1.0);
    return p;
  }
  ScaleState state() {
    ScaleState st;
    st.t = uniform(0.5, 3.0);
    st.R = uniform(0.4, 2.5);
    st.Rdot = uniform(-2.0, 2.0);
    st.Rddot = uniform(-2.0, 2.0);
    return st;
  }

  // state pinned to the evaluation point's time (the scale model a
  // finite-difference probe sees must be centered there)
  ScaleState state_at(double t) {
    ScaleState st = state();
    st.t = t;
    return st;
  }
  // s with |1 - s R^2| > min_gap
  double s_for(double R, double min_gap) {
    for (;;) {
      const double s = uniform(-1.0, 1.0);
      if (std::abs(shell_factor(s, R)) > min_gap) return s;
    }
  }
};

struct GeodesicBackground {
  CosmologyParams params;  // s filled per case
  double t0;
  double t_char;  // Hubble time R/|Rdot| at t0
};

// Dust backgrounds with start times chosen so that one characteristic time
// of integration stays well inside the patch and off the s R^2 = 1 shell
// for the s values the suites use (|s| <= 0.5).
GeodesicBackground background_for(int kappa) {
  GeodesicBackground bg;
  bg.params.kappa = kappa;
  bg.params.G = 1.0;
  if (kappa == 0) {
    bg.params.M = 2.0 / 9.0;  // R = t^(2/3)
    bg.t0 = 0.6;
  } else if (kappa == 1) {
    bg.params.M = 1.0;
    bg.t0 = kPi / 2.0 - 1.0;  // eta = pi/2, R = 1
  } else {
    bg.params.M = 1.0;
    const double eta = std::acosh(1.5);  // R = 0.5
    bg.t0 = std::sinh(eta) - eta;
  }
  const ScaleState st = analytic_scale(bg.params, bg.t0);
  bg.t_char = st.R / std::abs(st.Rdot);
  return bg;
}

Vec3 random_unit_direction(Rng& rng) {
  for (;;) {
    Vec3 d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double n = d.norm();
    if (n > 0.1 && n <= 1.0) return d / n;
  }
}

using CheckBody = std::function<void(CheckResult&)>;

}  // namespace

SuiteReport run_suite(const OracleConfig& cfg, const SamplePlan& plan) {
  SuiteReport report;
  report.seed = plan.seed;

  std::vector<std::pair<std::string, CheckBody>> checks;
  const auto add = [&checks](const std::string& name, CheckBody body) {
    checks.emplace_back(name, std::move(body));
  };

  const std::array<MetricTag, 2> tags = {MetricTag::standard,
                                         MetricTag::deformed};

  // -- closed forms satisfy the structure equations (FD derivatives) -------
  add("structure_equations", [&](CheckResult& r) {
    r.tolerance = 1e-9;
    // one decade coarser than the connection solve: the residual compares
    // raw first derivatives of 1/(1-sR^2)-type components, where the finer
    // step is already roundoff-limited
    OracleConfig cfg_s = cfg;
    cfg_s.fd_step = 10.0 * cfg.fd_step;
    Rng rng(plan.seed + 1);
    for (int n = 0; n < 100; ++n) {
      const int kappa = rng.pick_kappa();
      const SpacetimePoint p = rng.point(kappa);
      const ScaleState st = rng.state_at(p.t);
      for (MetricTag tag : tags) {
        CosmologyParams params;
        params.kappa = kappa;
        // margin from the shell: derivatives of 1/(1-sR^2)^2 grow like
        // |1-sR^2|^-5, which would swamp a 1e-9 residual bound
        params.s =
            tag == MetricTag::deformed ? rng.s_for(st.R, 0.5) : 0.0;
        const ScaleModel model = taylor_scale_model(st);
        const auto theta_field = make_coframe_field(params, model);
        const auto g_field = make_metric_field(tag, params, model);
        const auto theta_mat = [&theta_field](const SpacetimePoint& q) {
          return theta_field(q).e;
        };
        const std::array<Mat4, 4> dtheta = fd_partials(theta_mat, p, cfg_s);
        const std::array<Mat4, 4> dg = fd_partials(g_field, p, cfg_s);
        const CoframeMatrix theta = theta_field(p);
        const Mat4 e = theta.dual();
        const auto C = structure_functions(theta, dtheta);
        const Mat4 g = g_field(p);
        const ConnectionCoeffs gamma =
            tag == MetricTag::standard ? connection_standard(p, st, params)
                                       : connection_deformed(p, st, params);
        // torsion: Gamma^mu_{rho nu} - Gamma^mu_{nu rho} = C^mu_{nu rho}
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu)
            for (int rho = 0; rho < 4; ++rho)
              r.worst = std::max(
                  r.worst, std::abs(gamma(mu, rho, nu) - gamma(mu, nu, rho) -
                                    C[mu](nu, rho)));
        // metricity: X_rho(g_{mu nu}) = Gamma_{mu nu rho} + Gamma_{nu mu rho}
        std::array<Mat4, 4> low;
        for (int mu = 0; mu < 4; ++mu) {
          low[mu].setZero();
          for (int lam = 0; lam < 4; ++lam)
            low[mu] += g(mu, lam) * gamma.gamma[lam];
        }
        for (int rho = 0; rho < 4; ++rho) {
          Mat4 xg = Mat4::Zero();
          for (int a = 0; a < 4; ++a) xg += e(a, rho) * dg[a];
          for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu)
              r.worst = std::max(
                  r.worst, std::abs(xg(mu, nu) - low[mu](nu, rho) -
                                    low[nu](mu, rho)));
        }
        ++r.samples;
      }
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- FD structure-equation solver reproduces the closed forms ------------
  for (MetricTag tag : tags) {
    const std::string name = tag == MetricTag::standard
                                 ? "connection_oracle_standard"
                                 : "connection_oracle_deformed";
    add(name, [&, tag](CheckResult& r) {
      r.tolerance = 1e-8;
      Rng rng(plan.seed + (tag == MetricTag::standard ? 2 : 3));
      std::vector<double> svals =
          tag == MetricTag::standard ? std::vector<double>{0.0}
                                     : plan.s_values;
      if (plan.include_singular_shell && tag == MetricTag::deformed)
        svals.push_back(std::numeric_limits<double>::quiet_NaN());  // marker
      for (int kappa : {-1, 0, 1})
        for (double s : svals)
          for (int n = 0; n < plan.n_connection; ++n) {
            const SpacetimePoint p = rng.point(kappa);
            ScaleState st = rng.state_at(p.t);
            CosmologyParams params;
            params.kappa = kappa;
            if (std::isnan(s)) {
              // deliberately land on the singular shell
              params.s = (1.0 - 1e-13) / (st.R * st.R);
            } else {
              params.s = s;
              if (tag == MetricTag::deformed &&
                  std::abs(shell_factor(s, st.R)) < 0.1) {
                st.R = 0.5;  // step away from the shell
                if (std::abs(shell_factor(s, st.R)) < 0.1) continue;
              }
            }
            const ScaleModel model = taylor_scale_model(st);
            try {
              const ConnectionCoeffs fd = connection_from_structure(
                  make_coframe_field(params, model),
                  make_metric_field(tag, params, model), p, cfg);
              const ConnectionCoeffs closed =
                  tag == MetricTag::standard
                      ? connection_standard(p, st, params)
                      : connection_deformed(p, st, params);
              r.worst = std::max(r.worst, max_abs_diff(fd, closed));
              ++r.samples;
            } catch (const MetricSingular&) {
              ++r.skipped;
            }
          }
      r.pass = r.worst < r.tolerance;
    });
  }

  // -- second-order convergence of the plain central differences -----------
  add("fd_convergence_order", [&](CheckResult& r) {
    r.tolerance = 0.5;  // |mean ratio - 4| band
    Rng rng(plan.seed + 4);
    OracleConfig coarse = cfg;
    coarse.richardson = false;
    // stay where truncation dominates roundoff, else ratios are noise
    coarse.fd_step = std::max(1e-3, cfg.fd_step);
    OracleConfig fine = coarse;
    fine.fd_step = 0.5 * coarse.fd_step;
    double ratio_sum = 0.0;
    int n_ratio = 0;
    for (int n = 0; n < 10; ++n) {
      const int kappa = n % 2 == 0 ? 1 : -1;
      const SpacetimePoint p = rng.point(kappa);
      const ScaleState st = rng.state_at(p.t);
      CosmologyParams params;
      params.kappa = kappa;
      params.s = rng.s_for(st.R, 0.3);
      const ScaleModel model = taylor_scale_model(st);
      const MetricTag tag = n % 3 == 0 ? MetricTag::standard
                                       : MetricTag::deformed;
      const auto cofield = make_coframe_field(params, model);
      const auto gfield = make_metric_field(tag, params, model);
      const ConnectionCoeffs closed =
          tag == MetricTag::standard ? connection_standard(p, st, params)
                                     : connection_deformed(p, st, params);
      const double e1 = max_abs_diff(
          connection_from_structure(cofield, gfield, p, coarse), closed);
      const double e2 = max_abs_diff(
          connection_from_structure(cofield, gfield, p, fine), closed);
      if (e2 > 1e-14) {
        ratio_sum += e1 / e2;
        ++n_ratio;
      }
      ++r.samples;
    }
    const double mean = n_ratio > 0 ? ratio_sum / n_ratio : 0.0;
    r.worst = std::abs(mean - 4.0);
    r.pass = n_ratio > 0 && r.worst < r.tolerance;
  });

  // -- pointwise projective relation between the two connections -----------
  add("projective_pointwise", [&](CheckResult& r) {
    r.tolerance = 1e-10;
    Rng rng(plan.seed + 5);
    for (int n = 0; n < 200; ++n) {
      const int kappa = rng.pick_kappa();
      const SpacetimePoint p = rng.point(kappa);
      const ScaleState st = rng.state();
      CosmologyParams params;
      params.kappa = kappa;
      params.s = rng.s_for(st.R, 0.1);
      const ConnectionCoeffs gamma = connection_standard(p, st, params);
      const OneForm A = projective_one_form(st, params.s);
      ConnectionCoeffs tilde = connection_deformed(p, st, params);
      if (plan.mutation == SamplePlan::Mutation::flip_connection_sign)
        tilde(0, 0, 0) = -tilde(0, 0, 0);
      r.worst =
          std::max(r.worst, max_abs_diff(apply_projective(gamma, A), tilde));
      ++r.samples;
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- closed-form Einstein tensors vs the curvature route -----------------
  add("einstein_closed_vs_curvature", [&](CheckResult& r) {
    r.tolerance = 1e-7;
    Rng rng(plan.seed + 6);
    for (int n = 0; n < plan.n_einstein; ++n) {
      const int kappa = rng.pick_kappa();
      const SpacetimePoint p = rng.point(kappa);
      const ScaleState st = rng.state();
      CosmologyParams params;
      params.kappa = kappa;
      params.s = rng.s_for(st.R, 0.1);
      for (MetricTag tag : tags) {
        const Mat4 closed = einstein_closed_form(st, params, tag);
        const double scale = closed.cwiseAbs().maxCoeff();
        if (scale < 1e-3) continue;  // relative comparison needs a scale
        const CurvatureBundle cb = curvature_bundle(tag, p, st, params);
        r.worst = std::max(
            r.worst, (cb.einstein - closed).cwiseAbs().maxCoeff() / scale);
        ++r.samples;
      }
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- conformal flatness ----------------------------------------------------
  add("weyl_flatness", [&](CheckResult& r) {
    r.tolerance = 1e-9;
    Rng rng(plan.seed + 7);
    for (int n = 0; n < plan.n_weyl; ++n) {
      const int kappa = rng.pick_kappa();
      const SpacetimePoint p = rng.point(kappa);
      const ScaleState st = rng.state();
      CosmologyParams params;
      params.kappa = kappa;
      params.s = rng.s_for(st.R, 0.1);
      for (MetricTag tag : tags) {
        const CurvatureBundle cb = curvature_bundle(tag, p, st, params);
        r.worst = std::max(r.worst, cb.weyl.max_abs());
        ++r.samples;
      }
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- first Bianchi identity ------------------------------------------------
  add("bianchi_first", [&](CheckResult& r) {
    r.tolerance = 1e-9;
    Rng rng(plan.seed + 8);
    for (int n = 0; n < 50; ++n) {
      const int kappa = rng.pick_kappa();
      const SpacetimePoint p = rng.point(kappa);
      const ScaleState st = rng.state();
      CosmologyParams params;
      params.kappa = kappa;
      params.s = rng.s_for(st.R, 0.1);
      for (MetricTag tag : tags) {
        const CurvatureBundle cb = curvature_bundle(tag, p, st, params);
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu)
            for (int rho = 0; rho < 4; ++rho)
              for (int sg = 0; sg < 4; ++sg)
                r.worst = std::max(
                    r.worst, std::abs(cb.riemann(mu, nu, rho, sg) +
                                      cb.riemann(mu, rho, sg, nu) +
                                      cb.riemann(mu, sg, nu, rho)));
        ++r.samples;
      }
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- Einstein equations of the deformed metric along dust solutions ------
  add("reinterpretation_residual", [&](CheckResult& r) {
    r.tolerance = 1e-9;
    for (int kappa : {-1, 0, 1}) {
      CosmologyParams params;
      params.kappa = kappa;
      params.M = kappa == 0 ? 2.0 / 9.0 : 1.0;
      const double tmin = kappa == 1 ? 0.3 : 0.5;
      const double tmax = kappa == 1 ? 2.0 * kPi - 0.3 : 4.0;
      for (double s : {-1.0, -0.1, 0.1, 0.3}) {
        params.s = s;
        for (int i = 0; i < 20; ++i) {
          const double t = tmin + (tmax - tmin) * i / 19.0;
          const ScaleState st = analytic_scale(params, t);
          if (std::abs(shell_factor(s, st.R)) <= 0.05) {
            ++r.skipped;
            continue;
          }
          const Mat4 res_d =
              einstein_residual(st, params, MetricTag::deformed);
          const Mat4 res_s =
              einstein_residual(st, params, MetricTag::standard);
          r.worst = std::max({r.worst, res_d.cwiseAbs().maxCoeff(),
                              res_s.cwiseAbs().maxCoeff()});
          ++r.samples;
        }
      }
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- the algebraic identity 8 pi G rho - 3 s kappa - Lambda~ = 8 pi G rho~
  add("reinterpretation_identity", [&](CheckResult& r) {
    r.tolerance = 1e-12;
    for (int kappa : {-1, 0, 1}) {
      CosmologyParams params;
      params.kappa = kappa;
      params.M = kappa == 0 ? 2.0 / 9.0 : 1.0;
      const double tmin = kappa == 1 ? 0.3 : 0.5;
      const double tmax = kappa == 1 ? 2.0 * kPi - 0.3 : 4.0;
      for (double s : {-1.0, -0.1, 0.1, 0.3}) {
        params.s = s;
        for (int i = 0; i < 20; ++i) {
          const double t = tmin + (tmax - tmin) * i / 19.0;
          const ScaleState st = analytic_scale(params, t);
          const double lhs = 8.0 * kPi * params.G *
                                 dust_density(st.R, params) -
                             3.0 * s * kappa - lambda_tilde(st, params);
          const double rhs = 8.0 * kPi * params.G * rho_tilde(st, params);
          const double scale =
              std::max(1.0, 8.0 * kPi * params.G * dust_density(st.R, params));
          r.worst = std::max(r.worst, std::abs(lhs - rhs) / scale);
          ++r.samples;
        }
      }
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- Friedmann solver vs the analytic solutions ---------------------------
  add("friedmann_solver", [&](CheckResult& r) {
    r.tolerance = 1e-6;
    const auto compare = [&r](const CosmologyParams& params, double t0,
                              double t1, bool recollapse) {
      const ScaleState init = analytic_scale(params, t0);
      FriedmannOptions opts;
      opts.n_output = 64;
      opts.allow_recollapse = recollapse;
      const ScaleHistory hist =
          solve_friedmann(params, init.R, t0, t1, opts);
      for (const auto& st : hist.samples) {
        const ScaleState ref = analytic_scale(params, st.t);
        r.worst = std::max(r.worst, std::abs(st.R - ref.R) / ref.R);
        ++r.samples;
      }
    };
    CosmologyParams flat;
    flat.M = 2.0 / 9.0;
    compare(flat, 1.0, 100.0, false);
    CosmologyParams closed;
    closed.kappa = 1;
    closed.M = 1.0;
    compare(closed, 0.3, 2.6, false);
    compare(closed, 0.3, 5.4, true);  // across the turning point
    CosmologyParams open;
    open.kappa = -1;
    open.M = 1.0;
    compare(open, 0.05, 7.0, false);
    r.pass = r.worst < r.tolerance;
  });

  // -- constraint drift over ten e-folds of flat expansion ------------------
  add("constraint_drift", [&](CheckResult& r) {
    r.tolerance = 1e-8;
    CosmologyParams params;
    params.M = 2.0 / 9.0;
    const double t1 = std::exp(15.0);  // R grows by e^10
    const ScaleHistory hist = solve_friedmann(params, 1.0, 1.0, t1);
    for (const auto& st : hist.samples) {
      const double scale =
          std::max(1.0, 2.0 * params.G * params.M / st.R);
      r.worst = std::max(
          r.worst, std::abs(friedmann_constraint(st, params)) / scale);
      ++r.samples;
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- coincidence of unparametrized geodesics -------------------------------
  add("geodesic_coincidence", [&](CheckResult& r) {
    r.tolerance = 1e-5;
    Rng rng(plan.seed + 9);
    for (int kappa : {-1, 0, 1}) {
      GeodesicBackground bg = background_for(kappa);
      const ScaleModel model = [params = bg.params](double t) {
        return analytic_scale(params, t);
      };
      const SpacetimePoint p0{bg.t0, 0.3, -0.2, 0.1};
      const ScaleState st0 = model(bg.t0);
      for (double s : {-0.5, 0.2}) {
        bg.params.s = s;
        for (CausalClass cls : {CausalClass::timelike, CausalClass::null,
                                CausalClass::spacelike}) {
          for (int n = 0; n < plan.geodesic_dirs_per_class; ++n) {
            const Vec3 dir = random_unit_direction(rng);
            const GeodesicState init = init_geodesic(
                p0, dir, cls, MetricTag::standard, st0, s);
            const GeodesicPath a = integrate_geodesic(
                init, MetricTag::standard, bg.params, model, bg.t_char);
            const GeodesicPath b = integrate_geodesic(
                init, MetricTag::deformed, bg.params, model, bg.t_char);
            r.worst = std::max(r.worst, path_distance(a, b));
            ++r.samples;
          }
        }
      }
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- projective reparametrization law --------------------------------------
  add("reparametrization", [&](CheckResult& r) {
    r.tolerance = 1e-6;
    Rng rng(plan.seed + 10);
    for (int kappa : {-1, 0, 1}) {
      GeodesicBackground bg = background_for(kappa);
      const ScaleModel model = [params = bg.params](double t) {
        return analytic_scale(params, t);
      };
      const SpacetimePoint p0{bg.t0, 0.3, -0.2, 0.1};
      const ScaleState st0 = model(bg.t0);
      for (double s : {-0.5, 0.2}) {
        bg.params.s = s;
        for (CausalClass cls : {CausalClass::timelike, CausalClass::null,
                                CausalClass::spacelike}) {
          for (int n = 0; n < plan.geodesic_dirs_per_class; ++n) {
            const Vec3 dir = random_unit_direction(rng);
            const GeodesicState init = init_geodesic(
                p0, dir, cls, MetricTag::standard, st0, s);
            const ReparamReport rep = reparametrization_check(
                init, bg.params, model, bg.t_char);
            r.worst = std::max(r.worst, rep.max_deviation);
            ++r.samples;
          }
        }
      }
    }
    r.pass = r.worst < r.tolerance;
  });

  // -- normal form certificate -----------------------------------------------
  add("normal_form", [&](CheckResult& r) {
    r.tolerance = 1e-8;
    CosmologyParams params;
    params.M = 2.0 / 9.0;
    params.s = 0.1;
    const ScaleHistory hist = solve_friedmann(params, 1.0, 1.0, 3.0);
    const NormalFormMap map = rw_normal_form(hist, params.s);
    r.worst = map.max_component_mismatch;
    r.samples = static_cast<int>(map.samples.size());
    r.pass = r.worst < r.tolerance;
  });

  for (auto& [name, body] : checks) {
    if (!plan.only.empty() && name.find(plan.only) == std::string::npos)
      continue;
    CheckResult r;
    r.name = name;
    body(r);
    report.checks.push_back(r);
  }
  return report;
}

}  // namespace rwproj
