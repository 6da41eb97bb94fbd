#ifndef RWPROJ_ORACLE_HPP
#define RWPROJ_ORACLE_HPP

// Independent verification paths.  Everything here differentiates by
// central finite differences (optionally Richardson-extrapolated) and knows
// nothing about the closed-form connections: the structure-equation solver
// consumes only pointwise coframe and metric values, so agreement with the
// analytic route is a genuine cross-check.

#include "rwproj/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rwproj {

struct OracleConfig {
  double fd_step = 1e-6;   // relative to the characteristic scale at p
  bool richardson = true;  // extrapolate the central differences
};

using CoframeField = std::function<CoframeMatrix(const SpacetimePoint&)>;
using MetricField = std::function<Mat4(const SpacetimePoint&)>;

// canonical fields of the family over a scale model
CoframeField make_coframe_field(const CosmologyParams& params,
                                const ScaleModel& scale);
MetricField make_metric_field(MetricTag tag, const CosmologyParams& params,
                              const ScaleModel& scale);

// Solves the torsion-free + metricity conditions for the 64 connection
// coefficients by the anholonomic Koszul formula
//   Gamma_{mu nu rho} = (1/2) [ X_rho(g_{mu nu}) + X_nu(g_{mu rho})
//                             - X_mu(g_{nu rho})
//                             + C_{mu rho nu} + C_{nu mu rho} - C_{rho nu mu} ]
// with structure functions and metric derivatives from finite differences.
ConnectionCoeffs connection_from_structure(const CoframeField& coframe,
                                           const MetricField& metric,
                                           const SpacetimePoint& p,
                                           const OracleConfig& cfg = {});

// Closed-form Friedmann dust solutions with Big Bang at t = 0:
//   kappa =  0: R = (9GM/2)^(1/3) t^(2/3)
//   kappa = +1: R = GM (1 - cos eta),  t = GM (eta - sin eta), eta in (0,2pi)
//   kappa = -1: R = GM (cosh eta - 1), t = GM (sinh eta - eta)
ScaleState analytic_scale(const CosmologyParams& params, double t);

// ---------------------------------------------------------------------------
// Cross-check suite
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  int samples = 0;
  int skipped = 0;       // MetricSingular guard hits, not failures
  double worst = 0.0;    // worst residual (or |ratio - 4| for convergence)
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  std::uint64_t seed = 0;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct SamplePlan {
  std::uint64_t seed = 42;
  int n_connection = 200;  // per (kappa, s) cell
  int n_einstein = 120;
  int n_weyl = 100;
  int geodesic_dirs_per_class = 2;  // the acceptance suite runs 20
  std::vector<double> s_values = {-1.0, -0.5, -0.1, 0.1, 0.3, 0.5};
  bool include_singular_shell = false;  // adds sR^2 ~ 1 samples (skips)
  std::string only;  // substring filter on check names; empty runs all

  // test hook: deliberately corrupts one fixture so the matching check
  // must fail (suite self-test)
  enum class Mutation { none, flip_connection_sign } mutation = Mutation::none;
};

SuiteReport run_suite(const OracleConfig& cfg, const SamplePlan& plan = {});

}  // namespace rwproj

#endif
