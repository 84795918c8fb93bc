#pragma once

#include <string>
#include <vector>

#include "osm/driver/discretization.hpp"
#include "osm/krylov/gmres.hpp"
#include "osm/precon/al_preconditioner.hpp"
#include "osm/precon/multigrid.hpp"

namespace osm
{

enum class NonlinearMethod
{
  picard,
  newton,
};

enum class PreconditionerKind
{
  lu,
  al,
  gmg_al,
  gmg_vanka,
};

/// "lu", "al", "gmg-al", "gmg-vanka".
std::string to_string(PreconditionerKind kind);
PreconditionerKind parse_preconditioner(const std::string &name);

struct EisenstatWalker
{
  double initial = 0.3;
  double gamma = 0.9;
  double exponent = 2.0;
  double floor = 1e-6;
  double ceiling = 0.9;

  /// Forcing term for the next solve; `previous` is the last forcing term.
  double next(double residual, double previous_residual, double previous, double target) const;
};

struct NonlinearConfig
{
  NonlinearMethod method = NonlinearMethod::picard;
  /// Update norm (Picard) or relative residual (Newton) at which the iteration stops.
  double tolerance = 1e-9;
  /// Newton also stops once the residual norm is at or below this value.
  double absolute_tolerance = 0.0;
  int max_iterations = 50;
  EisenstatWalker forcing;
  /// Reserved; no continuation is performed.
  int continuation_steps = 0;
  PreconditionerKind preconditioner = PreconditionerKind::al;
  FluxSolverKind al_flux_solver = FluxSolverKind::cholesky;
  FluxGmgOptions flux_gmg;
  MonolithicOptions monolithic;
  KrylovConfig krylov;
  double alpha = 10.0;
  /// Augmentation parameter; non-positive keeps the problem's value.
  double gamma = 0.0;

  void validate() const;
  static NonlinearConfig picard_defaults();
  static NonlinearConfig newton_defaults();
};

struct OuterStep
{
  int krylov_iterations = 0;
  bool krylov_converged = false;
  /// Update norm (Picard) or residual norm before the step (Newton).
  double norm = 0.0;
  double forcing = 0.0;
};

struct NonlinearResult
{
  std::vector<OuterStep> steps;
  /// Newton residual norms, including the final one.
  std::vector<double> residuals;
  bool converged = false;
  /// Set when the state left the admissible range; the state is the last valid one.
  bool aborted = false;
  std::string message;
  double wall_seconds = 0.0;

  int outer_iterations() const { return static_cast<int>(steps.size()); }
  double mean_krylov() const;
};

/// Defect-correction Picard iteration; `state` holds the initial guess and receives the result.
NonlinearResult run_picard(const ProblemData &problem, const Discretization &disc,
                           const NonlinearConfig &config, Vector &state);

/// Inexact Newton with Eisenstat-Walker forcing and no line search.
NonlinearResult run_newton(const ProblemData &problem, const Discretization &disc,
                           const NonlinearConfig &config, Vector &state);

/// L2 product norm over all flux and potential fields.
double l2_product_norm(const FieldLayout &layout, const Vector &v);

/// Problem copy with the augmentation parameter replaced when gamma > 0.
ProblemData with_gamma(const ProblemData &problem, double gamma);

}  // namespace osm
