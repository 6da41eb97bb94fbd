#include "rwproj/cosmology.hpp"

#include "rwproj/frame_geometry.hpp"
#include "rwproj/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwproj {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Vec2 = Eigen::Matrix<double, 2, 1>;
using Vec3s = Eigen::Matrix<double, 3, 1>;

double rddot_of(double R, const CosmologyParams& params) {
  return -params.G * params.M / (R * R);
}

}  // namespace

ScaleState ScaleHistory::at(double t) const {
  if (samples.empty()) throw SingularInput("empty history");
  if (t <= samples.front().t) {
    if (t < samples.front().t - 1e-12 * std::max(1.0, std::abs(t)))
      throw DomainError("time before history start");
    return samples.front();
  }
  if (t >= samples.back().t) {
    if (t > samples.back().t + 1e-12 * std::max(1.0, std::abs(t)))
      throw DomainError("time after history end");
    return samples.back();
  }
  auto it = std::lower_bound(
      samples.begin(), samples.end(), t,
      [](const ScaleState& st, double tt) { return st.t < tt; });
  const ScaleState& b = *it;
  const ScaleState& a = *(it - 1);
  const double h = b.t - a.t;
  const double u = (t - a.t) / h;
  // cubic Hermite on (R, Rdot)
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
  const double dh00 = 6 * u2 - 6 * u, dh10 = 3 * u2 - 4 * u + 1;
  const double dh01 = -6 * u2 + 6 * u, dh11 = 3 * u2 - 2 * u;
  ScaleState out;
  out.t = t;
  out.R = h00 * a.R + h10 * h * a.Rdot + h01 * b.R + h11 * h * b.Rdot;
  out.Rdot =
      (dh00 * a.R + dh10 * h * a.Rdot + dh01 * b.R + dh11 * h * b.Rdot) / h;
  out.Rddot = rddot_of(out.R, params);
  return out;
}

ScaleModel ScaleHistory::model() const {
  return [hist = *this](double t) { return hist.at(t); };
}

ScaleHistory solve_friedmann(const CosmologyParams& params, double R0,
                             double t0, double t1,
                             const FriedmannOptions& opts) {
  params.validate();
  if (!(R0 > 0.0)) throw SingularInput("R0 must be positive");
  if (!(t1 > t0)) throw SingularInput("t_range requires t1 > t0");
  const double GM = params.G * params.M;
  const double v2 = 2.0 * GM / R0 - params.kappa;
  if (v2 < 0.0)
    throw SingularInput(
        "no real expansion rate at R0: 2GM/R0 - kappa < 0");

  ScaleHistory hist;
  hist.params = params;
  hist.t0 = t0;
  hist.t1 = t1;

  Vec2 y0;
  y0 << R0, (opts.branch >= 0 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, v2));

  auto rhs = [GM](double, const Vec2& y) {
    Vec2 dy;
    dy << y(1), -GM / (y(0) * y(0));
    return dy;
  };

  OdeOptions ode;
  ode.rel_tol = opts.rel_tol;
  ode.abs_tol = opts.abs_tol;

  std::vector<OdeEvent<2>> events;
  const bool watch_turning = params.kappa == 1 && params.M > 0.0;
  int turning_slot = -1, collapse_slot = -1;
  if (watch_turning) {
    turning_slot = static_cast<int>(events.size());
    events.push_back(
        {[](double, const Vec2& y) { return y(1); }, !opts.allow_recollapse});
  }
  const double floor = opts.collapse_floor * R0;
  collapse_slot = static_cast<int>(events.size());
  events.push_back(
      {[floor](double, const Vec2& y) { return y(0) - floor; }, true});

  std::vector<double> grid;
  const std::vector<double>* grid_ptr = nullptr;
  if (opts.n_output > 0) {
    grid.reserve(opts.n_output + 1);
    for (int i = 0; i <= opts.n_output; ++i)
      grid.push_back(t0 + (t1 - t0) * i / opts.n_output);
    grid.back() = t1;
    grid_ptr = &grid;
  }

  auto observe = [&hist, &params](double t, const Vec2& y) {
    hist.samples.push_back({t, y(0), y(1), rddot_of(y(0), params)});
  };

  const OdeOutcome outcome = integrate_ode<2>(
      rhs, t0, y0, t1, ode, observe, &events, grid_ptr);

  if (outcome == OdeOutcome::event_stop) {
    if (!opts.allow_recollapse && turning_slot >= 0 &&
        events[turning_slot].fired_index >= 0)
      throw TurningPoint(
          "kappa=+1 expansion reached its maximum before t1; "
          "enable recollapse to continue onto the contracting branch");
    if (events[collapse_slot].fired_index >= 0) {
      hist.truncated_at_collapse = true;
      return hist;
    }
  }
  if (watch_turning && opts.allow_recollapse &&
      events[turning_slot].fired_index >= 0) {
    hist.hit_turning_point = true;
    // the refined apex sample is the one with the smallest |Rdot|
    double best = std::numeric_limits<double>::infinity();
    for (const auto& st : hist.samples)
      if (std::abs(st.Rdot) < best) {
        best = std::abs(st.Rdot);
        hist.t_turning = st.t;
      }
  }
  return hist;
}

double dust_density(double R, const CosmologyParams& params) {
  if (!(R > 0.0)) throw SingularInput("R must be positive");
  return 3.0 * params.M / (4.0 * kPi * R * R * R);
}

double friedmann_constraint(const ScaleState& st,
                            const CosmologyParams& params) {
  return st.Rdot * st.Rdot - 2.0 * params.G * params.M / st.R + params.kappa;
}

double acceleration_constraint(const ScaleState& st,
                               const CosmologyParams& params) {
  return params.kappa + st.Rdot * st.Rdot + 2.0 * st.R * st.Rddot;
}

double lambda_tilde(const ScaleState& st, const CosmologyParams& params) {
  return 3.0 * params.s * (2.0 * params.G * params.M / st.R - params.kappa);
}

double rho_tilde(const ScaleState& st, const CosmologyParams& params) {
  return dust_density(st.R, params) * shell_factor(params.s, st.R);
}

Reinterpretation reinterpret(const ScaleState& st,
                             const CosmologyParams& params) {
  if (!(st.R > 0.0)) throw SingularInput("R must be positive");
  const double q = shell_factor(params.s, st.R);
  if (std::abs(q) < kSingularGuard)
    throw MetricSingular("deformed metric singular: |1 - s R^2| < guard");
  const double scale = std::max(1.0, 2.0 * params.G * params.M / st.R);
  const double res = std::max(std::abs(friedmann_constraint(st, params)),
                              std::abs(acceleration_constraint(st, params)));
  if (res > kFriedmannGate * scale)
    throw FriedmannViolation(
        "state does not satisfy the Friedmann equations within tolerance");
  Reinterpretation out;
  out.lambda_tilde = lambda_tilde(st, params);
  out.rho_tilde = rho_tilde(st, params);
  out.u_tilde_factor = q;
  return out;
}

Mat4 einstein_residual(const ScaleState& st, const CosmologyParams& params,
                       MetricTag which) {
  const double eightPiG = 8.0 * kPi * params.G;
  Mat4 res = einstein_closed_form(st, params, which);
  if (which == MetricTag::standard) {
    // u_mu = (-1,0,0,0), so the dust term only hits the 00 slot
    res(0, 0) -= eightPiG * dust_density(st.R, params);
    return res;
  }
  const double q = shell_factor(params.s, st.R);
  if (std::abs(q) < kSingularGuard)
    throw MetricSingular("deformed metric singular: |1 - s R^2| < guard");
  const Mat4 gt = frame_metric(MetricTag::deformed, params.s, st.R).gcomp;
  res += lambda_tilde(st, params) * gt;
  // u~_mu = g~_{mu nu} u~^nu with u~^mu = (q,0,0,0): u~_0 = -1/q
  res(0, 0) -= eightPiG * rho_tilde(st, params) / (q * q);
  return res;
}

NormalFormMap rw_normal_form(const ScaleHistory& hist, double s) {
  if (hist.samples.size() < 2)
    throw SingularInput("history too short for a normal form");
  for (const auto& st : hist.samples)
    if (!(shell_factor(s, st.R) > 0.0))
      throw MetricSingular(
          "1 - s R^2 changes sign inside the history; the normal form does "
          "not bridge the singular shell");

  const CosmologyParams& params = hist.params;
  const double GM = params.G * params.M;
  const double t0 = hist.samples.front().t;
  const double t1 = hist.samples.back().t;

  // re-integrate the scale flow with the quadrature t~' = 1/(1 - s R^2)
  // carried as a third component
  auto rhs = [GM, s](double, const Vec3s& y) {
    Vec3s dy;
    dy << y(1), -GM / (y(0) * y(0)), 1.0 / shell_factor(s, y(0));
    return dy;
  };

  Vec3s y0;
  y0 << hist.samples.front().R, hist.samples.front().Rdot, 0.0;

  const int n = 1024;
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (int i = 0; i <= n; ++i) grid.push_back(t0 + (t1 - t0) * i / n);
  grid.back() = t1;

  OdeOptions ode;
  ode.rel_tol = 1e-12;
  ode.abs_tol = 1e-14;

  NormalFormMap map;
  map.samples.reserve(grid.size());
  std::vector<double> scale_values;  // R at the grid points, solver-accurate
  scale_values.reserve(grid.size());
  auto observe = [&map, &scale_values, s](double t, const Vec3s& y) {
    const double q = shell_factor(s, y(0));
    if (!(q > 0.0))
      throw MetricSingular("history crossed the s R^2 = 1 shell");
    map.samples.push_back({t, y(2), y(0) / std::sqrt(q)});
    scale_values.push_back(y(0));
  };
  integrate_ode<3>(rhs, t0, y0, t1, ode, observe, nullptr, &grid);

  // certificate: recompute the deformed components from the mapping and
  // compare with frame_metric(deformed).  dt~/dt comes from a 4th-order
  // stencil on the uniform grid, independent of the quadrature integrand.
  const double h = (t1 - t0) / n;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < map.samples.size(); ++i) {
    const double dtt = (-map.samples[i + 2].t_tilde +
                        8.0 * map.samples[i + 1].t_tilde -
                        8.0 * map.samples[i - 1].t_tilde +
                        map.samples[i - 2].t_tilde) /
                       (12.0 * h);
    const double R = scale_values[i];
    const Mat4 gt = frame_metric(MetricTag::deformed, s, R).gcomp;
    const double g00 = -dtt * dtt;
    const double gii =
        (map.samples[i].R_tilde / R) * (map.samples[i].R_tilde / R);
    worst = std::max(worst, std::abs(g00 - gt(0, 0)));
    worst = std::max(worst, std::abs(gii - gt(1, 1)));
  }
  map.max_component_mismatch = worst;
  return map;
}

}  // namespace rwproj
