#ifndef RWPROJ_COSMOLOGY_HPP
#define RWPROJ_COSMOLOGY_HPP

// Friedmann dust dynamics and the reinterpretation of a pure-dust solution
// as dust plus a dark-energy-type term in the deformed metric.  Solving
// E~ + Lambda~ g~ = 8 pi G rho~ u~ (x) u~ along a dust solution gives
//
//   Lambda~ = 3 s (2GM/R - kappa),
//   rho~    = rho (1 - s R^2),
//   u~      = (1 - s R^2) u,
//
// so the {00} reduction 8 pi G rho - 3 s kappa - Lambda~ = 8 pi G rho~
// holds identically and everything degenerates to (0, rho, u) at s = 0.

#include "rwproj/types.hpp"

#include <vector>

namespace rwproj {

struct ScaleHistory {
  std::vector<ScaleState> samples;
  CosmologyParams params;
  double t0 = 0.0;
  double t1 = 0.0;  // requested end; the history may stop earlier
  bool hit_turning_point = false;
  double t_turning = 0.0;
  bool truncated_at_collapse = false;

  // Hermite interpolation of (R, Rdot) between samples; Rddot from the
  // field equation
  ScaleState at(double t) const;
  ScaleModel model() const;
};

struct FriedmannOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int branch = +1;               // sign of Rdot at t0
  bool allow_recollapse = false; // continue through the kappa=+1 turning point
  int n_output = 0;              // >0: uniform grid with n_output+1 samples
  double collapse_floor = 1e-6;  // stop when R < floor * R0 on the way down
};

// Integrates R'' = -GM/R^2 with Rdot(t0) fixed by the Friedmann constraint
// Rdot^2 = 2GM/R - kappa.  The constraint is a first integral, so drift
// measures solver error directly.
ScaleHistory solve_friedmann(const CosmologyParams& params, double R0,
                             double t0, double t1,
                             const FriedmannOptions& opts = {});

// rho = 3M / (4 pi R^3)
double dust_density(double R, const CosmologyParams& params);

// Rdot^2 - 2GM/R + kappa (zero on solutions)
double friedmann_constraint(const ScaleState& st,
                            const CosmologyParams& params);

// kappa + Rdot^2 + 2 R Rddot (zero on solutions; fixes Rddot)
double acceleration_constraint(const ScaleState& st,
                               const CosmologyParams& params);

double lambda_tilde(const ScaleState& st, const CosmologyParams& params);
double rho_tilde(const ScaleState& st, const CosmologyParams& params);

struct Reinterpretation {
  double lambda_tilde = 0.0;
  double rho_tilde = 0.0;
  double u_tilde_factor = 1.0;  // 1 - s R^2
};

inline constexpr double kFriedmannGate = 1e-6;

// Reinterpretation data for a state on a Friedmann solution.  Throws
// FriedmannViolation when the state fails the constraint gate, and
// MetricSingular on the s R^2 = 1 shell.
Reinterpretation reinterpret(const ScaleState& st,
                             const CosmologyParams& params);

// Einstein-equation residual in the common coframe:
//   standard: E - 8 pi G rho u x u            (u^mu = (1,0,0,0))
//   deformed: E~ + Lambda~ g~ - 8 pi G rho~ u~ x u~
// Evaluates the formulas on any state, so a non-solution shows up as a
// residual of matching size.
Mat4 einstein_residual(const ScaleState& st, const CosmologyParams& params,
                       MetricTag which);

struct NormalFormSample {
  double t = 0.0;
  double t_tilde = 0.0;
  double R_tilde = 0.0;
};

struct NormalFormMap {
  std::vector<NormalFormSample> samples;
  // worst mismatch of the recomputed deformed metric components against
  // frame_metric(deformed) along the history
  double max_component_mismatch = 0.0;
};

// The deformed member is again Robertson-Walker after
//   t~ = integral dt / (1 - s R^2),   R~ = R / sqrt(1 - s R^2).
// Requires 1 - s R^2 > 0 on the whole history.
NormalFormMap rw_normal_form(const ScaleHistory& hist, double s);

}  // namespace rwproj

#endif
