#ifndef RWPROJ_ODE_HPP
#define RWPROJ_ODE_HPP

// Embedded Dormand-Prince 5(4) integrator with sign-change event detection.
// Events are refined by bisection on the step start, re-stepping with the
// same 5th-order stage so the refined point carries the step's accuracy.

#include "rwproj/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace rwproj {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 0.0;  // 0: derived from the span
  double h_max = 0.0;   // 0: the whole span
  long max_steps = 4000000;
};

enum class OdeOutcome { reached_end, event_stop };

template <int N>
struct OdeEvent {
  // fires when the value changes sign across an accepted step
  std::function<double(double, const Eigen::Matrix<double, N, 1>&)> value;
  bool stop = true;
  int fired_index = -1;  // set by the driver
};

template <int N, class RHS>
class Dopri5 {
 public:
  using Vec = Eigen::Matrix<double, N, 1>;

  Dopri5(RHS rhs, const OdeOptions& opts) : rhs_(std::move(rhs)), opts_(opts) {}

  // One step of size h from (t, y) with derivative k1 = rhs(t, y).
  // Returns the 5th-order solution; err is the scaled embedded-error norm;
  // k_last is the FSAL derivative at the step end.
  Vec step(double t, const Vec& y, const Vec& k1, double h, double& err,
           Vec& k_last) const {
    const Vec k2 = rhs_(t + h * c2, y + h * (a21 * k1));
    const Vec k3 = rhs_(t + h * c3, y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = rhs_(t + h * c4, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = rhs_(t + h * c5,
                        y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 =
        rhs_(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                             a65 * k5));
    const Vec y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k_last = rhs_(t + h, y5);
    const Vec e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                       e7 * k_last);
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc =
          opts_.abs_tol +
          opts_.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      const double r = e(i) / sc;
      sum += r * r;
    }
    err = std::sqrt(sum / N);
    return y5;
  }

  // Integrates from t0 to t1 (t1 > t0).  observe is called at (t0, y0), at
  // every accepted step, and at each refined event point.  Events that stop
  // truncate the integration.
  OdeOutcome integrate(
      double t0, Vec y0, double t1,
      const std::function<void(double, const Vec&)>& observe,
      std::vector<OdeEvent<N>>* events = nullptr,
      const std::vector<double>* output_times = nullptr) {
    if (!(t1 > t0)) throw SingularInput("integration requires t1 > t0");
    const double span = t1 - t0;
    double h_max = opts_.h_max > 0.0 ? opts_.h_max : span;
    double h = opts_.h_init > 0.0 ? opts_.h_init : std::min(h_max, 1e-3 * span);

    double t = t0;
    Vec y = y0;
    Vec k1 = rhs_(t, y);
    std::size_t next_out = 0;
    if (output_times) {
      // the caller's grid is assumed sorted inside [t0, t1]
      while (next_out < output_times->size() &&
             (*output_times)[next_out] <= t0) {
        if ((*output_times)[next_out] == t0) observe(t, y);
        ++next_out;
      }
    } else {
      observe(t, y);
    }

    std::vector<double> ev_prev;
    if (events) {
      ev_prev.reserve(events->size());
      for (auto& ev : *events) ev_prev.push_back(ev.value(t, y));
    }

    for (long steps = 0; steps < opts_.max_steps; ++steps) {
      if (t >= t1) return OdeOutcome::reached_end;
      h = std::min(h, h_max);
      bool hit_end = false;
      if (t + h >= t1) {
        h = t1 - t;
        hit_end = true;
      }
      // clip to the next requested output time
      bool hit_out = false;
      if (output_times && next_out < output_times->size()) {
        const double t_next = (*output_times)[next_out];
        if (t + h >= t_next) {
          h = t_next - t;
          hit_out = true;
          hit_end = false;
        }
      }
      if (!(h > 0.0)) {
        // output time coincides with the current point
        if (hit_out) {
          observe(t, y);
          ++next_out;
          continue;
        }
        throw StepFailure("step size underflow");
      }

      double err = 0.0;
      Vec k_last;
      const Vec y_new = step(t, y, k1, h, err, k_last);

      if (!std::isfinite(err)) {
        h *= 0.25;
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
          throw StepFailure("non-finite step error");
        continue;
      }
      if (err > 1.0) {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
          throw StepFailure("step size underflow under error control");
        continue;
      }

      // accepted; look for the earliest event in (t, t+h]
      if (events) {
        int fired = -1;
        double tau_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < events->size(); ++i) {
          if ((*events)[i].fired_index >= 0) continue;  // one-shot
          const double g0 = ev_prev[i];
          const double g1 = (*events)[i].value(t + h, y_new);
          if (g0 == 0.0) continue;  // event active at step start: ignore
          if (g0 * g1 < 0.0 || g1 == 0.0) {
            const double tau = refine_event(t, y, k1, h, (*events)[i], g0);
            if (tau < tau_min) {
              tau_min = tau;
              fired = static_cast<int>(i);
            }
          }
        }
        if (fired >= 0) {
          double err_e = 0.0;
          Vec k_e;
          const Vec y_e = step(t, y, k1, tau_min, err_e, k_e);
          const double t_e = t + tau_min;
          observe(t_e, y_e);
          (*events)[fired].fired_index = fired;
          if ((*events)[fired].stop) return OdeOutcome::event_stop;
          // continue from the event point
          t = t_e;
          y = y_e;
          k1 = rhs_(t, y);
          for (std::size_t i = 0; i < events->size(); ++i)
            ev_prev[i] = (*events)[i].value(t, y);
          continue;
        }
      }

      t += h;
      y = y_new;
      k1 = k_last;  // FSAL
      if (events)
        for (std::size_t i = 0; i < events->size(); ++i)
          ev_prev[i] = (*events)[i].value(t, y);

      if (output_times) {
        if (hit_out) {
          observe(t, y);
          ++next_out;
        }
      } else {
        observe(t, y);
      }
      if (hit_end && t >= t1) return OdeOutcome::reached_end;

      const double fac =
          err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)))
                    : 5.0;
      h *= fac;
    }
    throw StepFailure("maximum step count exceeded");
  }

 private:
  // locates the zero of ev.value inside (t, t+h] by bisection on the step
  // length, re-stepping from (t, y) each probe
  double refine_event(double t, const Vec& y, const Vec& k1, double h,
                      const OdeEvent<N>& ev, double g0) const {
    double lo = 0.0, hi = h;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (hi - lo < 1e-15 * std::max(1.0, std::abs(t) + h)) break;
      double err = 0.0;
      Vec k_e;
      const Vec y_mid = step(t, y, k1, mid, err, k_e);
      const double g = ev.value(t + mid, y_mid);
      if (g == 0.0) return mid;
      if (g0 * g < 0.0)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }

  RHS rhs_;
  OdeOptions opts_;

  // Dormand-Prince RK5(4)7M tableau
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                          c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                          a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                          b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                          b6 = 11.0 / 84.0;
  // b - b*: coefficients of the embedded error estimate
  static constexpr double e1 = b1 - 5179.0 / 57600.0;
  static constexpr double e3 = b3 - 7571.0 / 16695.0;
  static constexpr double e4 = b4 - 393.0 / 640.0;
  static constexpr double e5 = b5 + 92097.0 / 339200.0;
  static constexpr double e6 = b6 - 187.0 / 2100.0;
  static constexpr double e7 = -1.0 / 40.0;
};

template <int N, class RHS>
OdeOutcome integrate_ode(RHS&& rhs, double t0,
                         const Eigen::Matrix<double, N, 1>& y0, double t1,
                         const OdeOptions& opts,
                         const std::function<void(
                             double, const Eigen::Matrix<double, N, 1>&)>& observe,
                         std::vector<OdeEvent<N>>* events = nullptr,
                         const std::vector<double>* output_times = nullptr) {
  Dopri5<N, std::decay_t<RHS>> solver(std::forward<RHS>(rhs), opts);
  return solver.integrate(t0, y0, t1, observe, events, output_times);
}

}  // namespace rwproj

#endif
