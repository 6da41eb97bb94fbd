#include "rwproj/geodesics.hpp"

#include "rwproj/frame_geometry.hpp"
#include "rwproj/ode.hpp"
#include "rwproj/projective.hpp"

#include <algorithm>
#include <cmath>

namespace rwproj {

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;

SpacetimePoint point_of(const Vec8& y) {
  return SpacetimePoint{y(0), y(1), y(2), y(3)};
}

double metric_norm(const Vec4& v, MetricTag tag, double s, double R) {
  const Mat4 g = frame_metric(tag, s, R).gcomp;
  return v.dot(g * v);
}

// shared RHS: affine geodesic flow, optionally with the projective drive
// -2 (A.v) v^mu on top of the standard connection
struct GeodesicRhs {
  MetricTag tag;
  CosmologyParams params;
  ScaleModel scale;
  bool projective_drive = false;
  double drive_s = 0.0;
  Vec4 A_perturbation = Vec4::Zero();

  Vec8 operator()(double, const Vec8& y) const {
    const SpacetimePoint p = point_of(y);
    const ScaleState st = scale(p.t);
    const Vec4 v = y.tail<4>();
    const double f = patch_factor(p, params.kappa);

    Vec8 dy;
    // dx^a/dl = e_mu^a v^mu: diagonal dual frame (1, f/R, f/R, f/R)
    dy(0) = v(0);
    const double fr = f / st.R;
    dy(1) = fr * v(1);
    dy(2) = fr * v(2);
    dy(3) = fr * v(3);

    const ConnectionCoeffs gamma = tag == MetricTag::standard
                                       ? connection_standard(p, st, params)
                                       : connection_deformed(p, st, params);
    for (int mu = 0; mu < 4; ++mu)
      dy(4 + mu) = -v.dot(gamma.gamma[mu] * v);

    if (projective_drive) {
      Vec4 A = projective_one_form(st, drive_s).a + A_perturbation;
      const double Av = A.dot(v);
      dy.tail<4>() -= 2.0 * Av * v;
    }
    return dy;
  }
};

GeodesicPath run_geodesic(const GeodesicState& init, const GeodesicRhs& rhs,
                          MetricTag norm_tag, double s, double lambda_max,
                          const GeodesicOptions& opts, CausalClass cls,
                          const std::vector<double>* lambda_grid = nullptr) {
  if (!(lambda_max > 0.0)) throw SingularInput("lambda_max must be positive");

  Vec8 y0;
  y0 << init.p.t, init.p.x, init.p.y, init.p.z, init.v(0), init.v(1),
      init.v(2), init.v(3);

  OdeOptions ode;
  ode.rel_tol = opts.rel_tol;
  ode.abs_tol = opts.abs_tol;
  ode.max_steps = opts.max_steps;
  if (opts.min_samples > 0) ode.h_max = lambda_max / opts.min_samples;

  const CosmologyParams params = rhs.params;
  const ScaleModel& scale = rhs.scale;
  const double guard = opts.patch_guard;

  std::vector<OdeEvent<8>> events;
  if (params.kappa == -1)
    events.push_back({[params, guard](double, const Vec8& y) {
                        return patch_factor(point_of(y), params.kappa) - guard;
                      },
                      true});
  const bool watch_shell =
      norm_tag == MetricTag::deformed || rhs.projective_drive;
  if (watch_shell && s != 0.0)
    events.push_back({[&scale, s, guard](double, const Vec8& y) {
                        return std::abs(shell_factor(s, scale(y(0)).R)) -
                               guard;
                      },
                      true});

  GeodesicPath path;
  path.metric_tag = norm_tag;
  path.causal_class = cls;
  auto observe = [&path, init](double l, const Vec8& y) {
    GeodesicSample smp;
    smp.lambda = init.lambda + l;
    smp.p = point_of(y);
    smp.v = y.tail<4>();
    path.samples.push_back(smp);
  };

  const OdeOutcome outcome = integrate_ode<8>(
      rhs, 0.0, y0, lambda_max, ode, observe,
      events.empty() ? nullptr : &events, lambda_grid);
  if (outcome == OdeOutcome::event_stop)
    throw PatchExit(
        "geodesic reached the patch boundary or the s R^2 = 1 shell");

  // norm bookkeeping against the metric the flow belongs to
  path.norm0 = metric_norm(path.samples.front().v, norm_tag, s,
                           scale(path.samples.front().p.t).R);
  for (const auto& smp : path.samples) {
    const double nrm = metric_norm(smp.v, norm_tag, s, scale(smp.p.t).R);
    path.max_norm_drift =
        std::max(path.max_norm_drift, std::abs(nrm - path.norm0));
  }
  return path;
}

}  // namespace

const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::timelike: return "timelike";
    case CausalClass::null: return "null";
    default: return "spacelike";
  }
}

GeodesicState init_geodesic(const SpacetimePoint& p, const Vec3& direction,
                            CausalClass cls, MetricTag tag,
                            const ScaleState& st, double s) {
  const Mat4 g = frame_metric(tag, s, st.R).gcomp;

  const double dnorm = direction.norm();
  if (dnorm == 0.0 && cls != CausalClass::timelike)
    throw DegenerateDirection("null/spacelike classes need a direction");

  GeodesicState out;
  out.p = p;
  const double g00 = -g(0, 0);  // positive
  if (cls == CausalClass::timelike) {
    double S = 0.0;
    for (int i = 1; i <= 3; ++i)
      S += g(i, i) * direction(i - 1) * direction(i - 1);
    if (!(1.0 + S > 0.0))
      throw DegenerateDirection(
          "no timelike vector through this direction (spatial form not "
          "positive here)");
    out.v(0) = std::sqrt((1.0 + S) / g00);
    out.v.tail<3>() = direction;
    return out;
  }
  if (cls == CausalClass::null) {
    double S = 0.0;
    for (int i = 1; i <= 3; ++i)
      S += g(i, i) * direction(i - 1) * direction(i - 1);
    if (!(S > 0.0))
      throw DegenerateDirection("null direction has no spatial content");
    out.v(0) = std::sqrt(S / g00);
    out.v.tail<3>() = direction;
    return out;
  }
  // spacelike: rescale to spatial norm 2, then v0 > 0 gives g(v,v) = +1
  double S = 0.0;
  for (int i = 1; i <= 3; ++i)
    S += g(i, i) * direction(i - 1) * direction(i - 1);
  if (!(S > 0.0))
    throw DegenerateDirection("spacelike direction has no spatial content");
  const Vec3 d = direction * std::sqrt(2.0 / S);
  out.v(0) = std::sqrt(1.0 / g00);
  out.v.tail<3>() = d;
  return out;
}

GeodesicPath integrate_geodesic(const GeodesicState& init, MetricTag tag,
                                const CosmologyParams& params,
                                const ScaleModel& scale, double lambda_max,
                                const GeodesicOptions& opts) {
  const ScaleState st0 = scale(init.p.t);
  if (tag == MetricTag::deformed &&
      std::abs(shell_factor(params.s, st0.R)) < kSingularGuard)
    throw MetricSingular("deformed metric singular at the initial point");
  GeodesicRhs rhs{tag, params, scale};
  // causal class by the integrating metric's sign convention
  const double nrm = metric_norm(init.v, tag, params.s, st0.R);
  CausalClass cls = CausalClass::null;
  if (nrm < -1e-12) cls = CausalClass::timelike;
  if (nrm > 1e-12) cls = CausalClass::spacelike;
  return run_geodesic(init, rhs, tag, params.s, lambda_max, opts, cls);
}

double path_distance(const GeodesicPath& a, const GeodesicPath& b) {
  const auto arc = [](const GeodesicPath& p) {
    std::vector<double> s(p.samples.size(), 0.0);
    for (std::size_t i = 1; i < p.samples.size(); ++i) {
      const auto& u = p.samples[i - 1].p;
      const auto& v = p.samples[i].p;
      const double dt = v.t - u.t, dx = v.x - u.x, dy = v.y - u.y,
                   dz = v.z - u.z;
      s[i] = s[i - 1] + std::sqrt(dt * dt + dx * dx + dy * dy + dz * dz);
    }
    return s;
  };
  if (a.samples.size() < 2 || b.samples.size() < 2)
    throw EmptyOverlap("paths too short to compare");
  const std::vector<double> sa = arc(a), sb = arc(b);
  const double L = std::min(sa.back(), sb.back());
  if (!(L > 0.0)) throw EmptyOverlap("no common arc-length range");

  const auto eval = [](const GeodesicPath& p, const std::vector<double>& s,
                       double u) {
    auto it = std::lower_bound(s.begin(), s.end(), u);
    if (it == s.begin()) ++it;
    if (it == s.end()) --it;
    const std::size_t i = static_cast<std::size_t>(it - s.begin());
    const double w =
        s[i] > s[i - 1] ? (u - s[i - 1]) / (s[i] - s[i - 1]) : 0.0;
    const auto& pa = p.samples[i - 1].p;
    const auto& pb = p.samples[i].p;
    return Vec4{pa.t + w * (pb.t - pa.t), pa.x + w * (pb.x - pa.x),
                pa.y + w * (pb.y - pa.y), pa.z + w * (pb.z - pa.z)};
  };

  const int n = 512;
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double u = L * k / n;
    worst = std::max(worst, (eval(a, sa, u) - eval(b, sb, u)).norm());
  }
  return worst;
}

ReparamReport reparametrization_check(const GeodesicState& init_g,
                                      const CosmologyParams& params,
                                      const ScaleModel& scale,
                                      double lambda_max,
                                      const GeodesicOptions& opts,
                                      const Vec4& A_perturbation) {
  ReparamReport report;

  // shared affine-parameter grid so the two flows are compared pointwise
  const int n = std::max(opts.min_samples, 2);
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (int i = 0; i <= n; ++i) grid.push_back(lambda_max * i / n);
  grid.back() = lambda_max;

  GeodesicRhs affine{MetricTag::deformed, params, scale};
  report.affine_path =
      run_geodesic(init_g, affine, MetricTag::deformed, params.s, lambda_max,
                   opts, CausalClass::timelike, &grid);

  GeodesicRhs reparam{MetricTag::standard, params, scale};
  reparam.projective_drive = true;
  reparam.drive_s = params.s;
  reparam.A_perturbation = A_perturbation;
  report.reparam_path =
      run_geodesic(init_g, reparam, MetricTag::standard, params.s, lambda_max,
                   opts, CausalClass::timelike, &grid);

  const std::size_t m = std::min(report.affine_path.samples.size(),
                                 report.reparam_path.samples.size());
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = report.affine_path.samples[i].p;
    const auto& b = report.reparam_path.samples[i].p;
    const Vec4 d{a.t - b.t, a.x - b.x, a.y - b.y, a.z - b.z};
    report.max_deviation = std::max(report.max_deviation, d.norm());
  }
  return report;
}

}  // namespace rwproj
