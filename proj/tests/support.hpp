#ifndef RWPROJ_TESTS_SUPPORT_HPP
#define RWPROJ_TESTS_SUPPORT_HPP

#include "rwproj/types.hpp"

#include <random>

namespace rwtest {

using namespace rwproj;

// deterministic sampler for property-style tests
struct Sampler {
  std::mt19937_64 gen;
  explicit Sampler(std::uint64_t seed = 20240917) : gen(seed) {}

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen);
  }
  int pick_kappa() { return std::uniform_int_distribution<int>(-1, 1)(gen); }

  SpacetimePoint point() {
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

  // state pinned to the evaluation point's time, for finite-difference
  // probes whose scale model must be centered there
  ScaleState state_at(double t) {
    ScaleState st = state();
    st.t = t;
    return st;
  }

  double s_for(double R, double min_gap) {
    for (;;) {
      const double s = uniform(-1.0, 1.0);
      if (std::abs(shell_factor(s, R)) > min_gap) return s;
    }
  }

  // s on the Lorentzian side of the shell: 1 - s R^2 >= min_q
  double s_lorentzian(double R, double min_q) {
    for (;;) {
      const double s = uniform(-1.0, 1.0);
      if (shell_factor(s, R) >= min_q) return s;
    }
  }

  Vec3 unit_direction() {
    for (;;) {
      Vec3 d(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      const double n = d.norm();
      if (n > 0.1 && n <= 1.0) return d / n;
    }
  }
};

}  // namespace rwtest

#endif
