#include "osm/driver/nonlinear.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "osm/assembly/assembly.hpp"
#include "osm/elements/interpolation.hpp"
#include "osm/error.hpp"
#include "osm/krylov/direct.hpp"

namespace osm
{

std::string to_string(PreconditionerKind kind)
{
  switch (kind)
  {
    case PreconditionerKind::lu:
      return "lu";
    case PreconditionerKind::al:
      return "al";
    case PreconditionerKind::gmg_al:
      return "gmg-al";
    case PreconditionerKind::gmg_vanka:
      return "gmg-vanka";
  }
  return "unknown";
}

PreconditionerKind parse_preconditioner(const std::string &name)
{
  for (auto k : {PreconditionerKind::lu, PreconditionerKind::al, PreconditionerKind::gmg_al,
                 PreconditionerKind::gmg_vanka})
  {
    if (to_string(k) == name)
    {
      return k;
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown preconditioner '" + name + "'");
}

double EisenstatWalker::next(double residual, double previous_residual, double previous,
                             double target) const
{
  double eta = gamma * std::pow(residual / previous_residual, exponent);
  // Do not let the forcing term drop abruptly while it is still large.
  const double guard = gamma * std::pow(previous, exponent);
  if (guard > 0.1)
  {
    eta = std::max(eta, guard);
  }
  eta = std::min(eta, ceiling);
  // Avoid oversolving the last step.
  eta = std::max(eta, 0.5 * target / residual);
  return std::clamp(eta, floor, ceiling);
}

void NonlinearConfig::validate() const
{
  OSM_REQUIRE(tolerance > 0.0, ErrorCode::invalid_argument, "tolerance must be positive");
  OSM_REQUIRE(absolute_tolerance >= 0.0, ErrorCode::invalid_argument,
              "absolute tolerance must be nonnegative");
  OSM_REQUIRE(max_iterations >= 1, ErrorCode::invalid_argument, "need at least one outer iteration");
  OSM_REQUIRE(alpha >= 0.0 && std::isfinite(alpha), ErrorCode::invalid_argument,
              "alpha must be nonnegative");
  OSM_REQUIRE(std::isfinite(gamma), ErrorCode::invalid_argument, "gamma must be finite");
  OSM_REQUIRE(0.0 < forcing.floor && forcing.floor <= forcing.initial &&
                  forcing.initial <= forcing.ceiling && forcing.ceiling < 1.0,
              ErrorCode::invalid_argument, "forcing terms must satisfy 0 < floor <= initial <= ceiling < 1");
  OSM_REQUIRE(preconditioner == PreconditionerKind::gmg_vanka || preconditioner == PreconditionerKind::lu ||
                  alpha > 0.0,
              ErrorCode::invalid_argument, "AL preconditioners need alpha > 0");
  krylov.validate();
}

NonlinearConfig NonlinearConfig::picard_defaults()
{
  NonlinearConfig c;
  c.method = NonlinearMethod::picard;
  c.tolerance = 1e-9;
  c.alpha = 10.0;
  c.preconditioner = PreconditionerKind::al;
  c.al_flux_solver = FluxSolverKind::cholesky;
  return c;
}

NonlinearConfig NonlinearConfig::newton_defaults()
{
  NonlinearConfig c;
  c.method = NonlinearMethod::newton;
  c.tolerance = 1e-8;
  c.alpha = 0.1;
  c.preconditioner = PreconditionerKind::gmg_al;
  c.al_flux_solver = FluxSolverKind::gmg;
  return c;
}

double NonlinearResult::mean_krylov() const
{
  if (steps.empty())
  {
    return 0.0;
  }
  double s = 0.0;
  for (const auto &st : steps)
  {
    s += st.krylov_iterations;
  }
  return s / static_cast<double>(steps.size());
}

double l2_product_norm(const FieldLayout &layout, const Vector &v)
{
  OSM_REQUIRE(v.size() == layout.size(), ErrorCode::invalid_argument, "vector does not match layout");
  const SparseMatrix m = rt_mass_matrix(layout);
  double s = 0.0;
  for (int i = 0; i < layout.species(); ++i)
  {
    const Vector f = v.segment(layout.flux_offset(i), layout.rt_size());
    s += f.dot(m * f);
  }
  // The DG basis is orthogonal with unit mean square on every cell.
  const int nd = layout.dg().dimension();
  for (int i = 0; i < layout.species(); ++i)
  {
    for (int c = 0; c < layout.mesh().num_cells(); ++c)
    {
      const double area = layout.mesh().geometry(c).area();
      for (int q = 0; q < nd; ++q)
      {
        const double x = v[layout.potential_offset(i) + layout.dg_dof(c, q)];
        s += area * x * x;
      }
    }
  }
  return std::sqrt(s);
}

ProblemData with_gamma(const ProblemData &problem, double gamma)
{
  ProblemData p = problem;
  if (gamma > 0.0)
  {
    p.spec.gamma = gamma;
    p.spec.validate();
  }
  return p;
}

namespace
{

using Clock = std::chrono::steady_clock;

class LuOperator final : public LinearOperator
{
public:
  explicit LuOperator(const SparseMatrix &a) : f_(a), n_(static_cast<int>(a.rows())) {}
  int size() const override { return n_; }
  void apply(const Vector &x, Vector &y) const override { y = f_.solve(x); }

private:
  LuFactorization f_;
  int n_;
};

bool uses_hierarchy(const NonlinearConfig &config)
{
  return config.preconditioner == PreconditionerKind::gmg_al ||
         config.preconditioner == PreconditionerKind::gmg_vanka ||
         (config.preconditioner == PreconditionerKind::al &&
          config.al_flux_solver == FluxSolverKind::gmg);
}

// Rediscretised operators on the coarser levels at the injected state.
std::vector<BlockSystem> coarse_systems(const ProblemData &problem, const Discretization &disc,
                                        const Vector &state, const Vector &kappa, bool newton)
{
  std::vector<BlockSystem> out;
  for (int l = 0; l + 1 < disc.num_levels(); ++l)
  {
    const Vector s = disc.inject(state, l);
    if (newton)
    {
      out.push_back(assemble_newton(disc.level(l), problem, s, kappa));
    }
    else
    {
      QuadratureField c = concentrations_from_state(disc.level(l), s, problem.spec);
      normalize(c, problem.pressure, problem.spec);
      out.push_back(assemble_picard(disc.level(l), problem, c, kappa));
    }
  }
  return out;
}

std::shared_ptr<const LinearOperator> make_preconditioner(const ProblemData &problem,
                                                          const Discretization &disc,
                                                          const BlockSystem &fine,
                                                          const Vector &state,
                                                          const NonlinearConfig &config, bool newton)
{
  const FieldLayout &layout = disc.fine();
  if (config.preconditioner == PreconditionerKind::lu)
  {
    return std::make_shared<LuOperator>(fine.matrix);
  }
  std::vector<BlockSystem> coarse;
  if (uses_hierarchy(config))
  {
    OSM_REQUIRE(static_cast<int>(disc.transfers.size()) + 1 == disc.num_levels(),
                ErrorCode::invalid_argument, "multigrid needs a discretization with transfers");
    coarse = coarse_systems(problem, disc, state, fine.kappa, newton);
  }
  std::vector<const BlockSystem *> systems;
  for (const auto &s : coarse)
  {
    systems.push_back(&s);
  }
  systems.push_back(&fine);

  if (config.preconditioner == PreconditionerKind::al)
  {
    auto pc = std::make_shared<ALPreconditioner>();
    if (config.al_flux_solver != FluxSolverKind::gmg)
    {
      pc->setup(layout, fine, config.al_flux_solver);
      return pc;
    }
    std::vector<std::shared_ptr<const LinearOperator>> solvers;
    std::vector<SparseMatrix> prolongations;
    for (const auto &t : disc.transfers)
    {
      prolongations.push_back(t.rt);
    }
    for (int i = 0; i < layout.species(); ++i)
    {
      std::vector<SparseMatrix> blocks;
      for (int l = 0; l < disc.num_levels(); ++l)
      {
        blocks.push_back(flux_block(disc.level(l), *systems[l], i));
      }
      solvers.push_back(std::make_shared<GmgCycle>(
          build_flux_block_gmg(disc.layout_pointers(), i, blocks, prolongations, config.flux_gmg)));
    }
    pc->setup(layout, fine, std::move(solvers));
    return pc;
  }
  MonolithicOptions options = config.monolithic;
  options.smoother = config.preconditioner == PreconditionerKind::gmg_al ? SmootherKind::al
                                                                         : SmootherKind::vanka;
  return std::make_shared<GmgCycle>(
      build_monolithic_gmg(disc.layout_pointers(), systems, disc.transfer_pointers(), options));
}

// Vanka smoothing and direct solves do not need the augmentation.
double effective_alpha(const NonlinearConfig &config)
{
  return config.preconditioner == PreconditionerKind::gmg_vanka ? 0.0 : config.alpha;
}

Vector kappa_for(const FieldLayout &layout, const ProblemData &problem, const QuadratureField &c,
                 double alpha)
{
  if (alpha <= 0.0)
  {
    return Vector();
  }
  return choose_kappa(layout, problem.spec, c, alpha, problem.length_ref);
}

bool is_state_error(const Error &e)
{
  return e.code() == ErrorCode::state_out_of_range || e.code() == ErrorCode::invalid_state;
}

}  // namespace

NonlinearResult run_picard(const ProblemData &problem_in, const Discretization &disc,
                           const NonlinearConfig &config, Vector &state)
{
  config.validate();
  const auto start = Clock::now();
  const ProblemData problem = with_gamma(problem_in, config.gamma);
  const FieldLayout &layout = disc.fine();
  OSM_REQUIRE(state.size() == layout.size(), ErrorCode::invalid_argument,
              "state does not match the finest layout");
  NonlinearResult result;
  const double alpha = effective_alpha(config);
  Vector last_valid = state;
  for (int it = 0; it < config.max_iterations; ++it)
  {
    Vector update;
    OuterStep step;
    try
    {
      QuadratureField c = concentrations_from_state(layout, state, problem.spec);
      normalize(c, problem.pressure, problem.spec);
      const Vector kappa = kappa_for(layout, problem, c, alpha);
      const BlockSystem sys = assemble_picard(layout, problem, c, kappa);
      const auto pc = make_preconditioner(problem, disc, sys, state, config, false);
      Vector residual = sys.rhs - sys.matrix * state;
      update = Vector::Zero(state.size());
      const MatrixOperator op(sys.matrix);
      const SolveReport rep = gmres(op, residual, update, pc.get(), config.krylov);
      step.krylov_iterations = rep.iterations;
      step.krylov_converged = rep.converged;
    }
    catch (const Error &e)
    {
      if (!is_state_error(e))
      {
        throw;
      }
      result.aborted = true;
      result.message = e.what();
      state = last_valid;
      break;
    }
    last_valid = state;
    if (!update.allFinite())
    {
      result.aborted = true;
      result.message = "non-finite Picard update";
      break;
    }
    state += update;
    step.norm = l2_product_norm(layout, update);
    result.steps.push_back(step);
    if (step.norm < config.tolerance)
    {
      result.converged = true;
      break;
    }
  }
  if (!result.converged && !result.aborted)
  {
    result.message = "Picard iteration did not converge in " + std::to_string(config.max_iterations) +
                     " steps";
  }
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

NonlinearResult run_newton(const ProblemData &problem_in, const Discretization &disc,
                           const NonlinearConfig &config, Vector &state)
{
  config.validate();
  const auto start = Clock::now();
  const ProblemData problem = with_gamma(problem_in, config.gamma);
  const FieldLayout &layout = disc.fine();
  OSM_REQUIRE(state.size() == layout.size(), ErrorCode::invalid_argument,
              "state does not match the finest layout");
  NonlinearResult result;
  const double alpha = effective_alpha(config);
  double initial_norm = 0.0;
  double previous_norm = 0.0;
  double eta = config.forcing.initial;
  Vector last_valid = state;
  for (int it = 0; it <= config.max_iterations; ++it)
  {
    try
    {
      const QuadratureField c = concentrations_from_state(layout, state, problem.spec);
      // kappa follows the current iterate.
      const Vector kappa = kappa_for(layout, problem, c, alpha);
      const BlockSystem sys = assemble_newton(layout, problem, state, kappa);
      const double norm = sys.rhs.norm();
      OSM_REQUIRE(std::isfinite(norm), ErrorCode::state_out_of_range, "non-finite residual");
      result.residuals.push_back(norm);
      last_valid = state;
      if (it == 0)
      {
        initial_norm = norm;
      }
      if (norm <= config.tolerance * initial_norm || norm <= config.absolute_tolerance)
      {
        result.converged = true;
        break;
      }
      if (it == config.max_iterations)
      {
        break;
      }
      if (it > 0)
      {
        eta = config.forcing.next(norm, previous_norm, eta, config.tolerance * initial_norm);
      }
      previous_norm = norm;
      const auto pc = make_preconditioner(problem, disc, sys, state, config, true);
      KrylovConfig kc = config.krylov;
      kc.rtol = eta;
      Vector update = Vector::Zero(state.size());
      const MatrixOperator op(sys.matrix);
      const SolveReport rep = gmres(op, Vector(-sys.rhs), update, pc.get(), kc);
      OSM_REQUIRE(update.allFinite(), ErrorCode::state_out_of_range, "non-finite Newton update");
      OuterStep step;
      step.krylov_iterations = rep.iterations;
      step.krylov_converged = rep.converged;
      step.norm = norm;
      step.forcing = eta;
      result.steps.push_back(step);
      state += update;
    }
    catch (const Error &e)
    {
      if (!is_state_error(e))
      {
        throw;
      }
      result.aborted = true;
      result.message = e.what();
      state = last_valid;
      break;
    }
  }
  if (!result.converged && !result.aborted)
  {
    result.message = "Newton iteration did not converge in " + std::to_string(config.max_iterations) +
                     " steps";
  }
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace osm
