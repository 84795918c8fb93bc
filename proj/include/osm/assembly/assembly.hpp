#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "osm/elements/layout.hpp"
#include "osm/krylov/sparse.hpp"
#include "osm/osmcore/problems.hpp"

namespace osm
{

/// Species concentrations at the assembly quadrature points of every cell.
struct QuadratureField
{
  int species = 0;
  int points_per_cell = 0;
  /// species x (cells * points_per_cell)
  Eigen::MatrixXd values;

  Eigen::VectorXd at(int cell, int q) const { return values.col(cell * points_per_cell + q); }
};

/// c = c(mu) from the potential coefficients of `state`.
QuadratureField concentrations_from_state(const FieldLayout &layout, const Vector &state,
                                          const MixtureSpec &spec);
/// Samples a concentration function at the quadrature points.
QuadratureField sample_concentrations(const FieldLayout &layout,
                                      const std::function<Eigen::VectorXd(const Point &)> &c);
/// Rescales every point so that c_T RT = p.
void normalize(QuadratureField &field, double p, const MixtureSpec &spec);

/// Assembled (flux, potential) system in the species-major layout ordering.
struct BlockSystem
{
  /// Monolithic operator, essential unknowns eliminated symmetrically.
  SparseMatrix matrix;
  /// Right-hand side (Picard) or nonlinear residual (Newton), consistent with `matrix`.
  Vector rhs;
  /// Flux-flux block of the transport form (without augmentation), not eliminated.
  SparseMatrix a;
  /// Potential-by-flux divergence block, not eliminated.
  SparseMatrix b;
  /// diag(kappa) B^T Mp^{-1} B over the flux unknowns.
  SparseMatrix al;
  /// Newton sensitivity of the flux equations to the potentials (empty for Picard).
  SparseMatrix coupling;
  /// Diagonal of the potential mass matrix.
  Vector mass_p;
  /// Flux-equation load: bulk-momentum term plus Dirichlet potential term.
  Vector load;
  /// Potential-equation load -(r_i, w_i) with r projected onto the potential space.
  Vector continuity;
  /// kappa-weighted AL load B^T Mp^{-1} continuity.
  Vector al_load;
  std::vector<bool> essential;
  Vector essential_values;
  Vector kappa;
};

/// Prescribed values of the essential flux unknowns (zero elsewhere).
Vector essential_values(const FieldLayout &layout, const ProblemData &problem);

/// kappa_i = alpha M_i^2 L^2 max_j |<Mt_ij>| with the spatial average over the domain.
Vector choose_kappa(const FieldLayout &layout, const MixtureSpec &spec, const QuadratureField &c,
                    double alpha, double length_ref);

/// Frozen-coefficient system. An empty or zero kappa gives the unaugmented system.
BlockSystem assemble_picard(const FieldLayout &layout, const ProblemData &problem,
                            const QuadratureField &c, const Vector &kappa);

/// AL operator and its load for given blocks (factored per cell).
struct AlTerms
{
  SparseMatrix block;
  Vector load;
};
AlTerms assemble_al(const FieldLayout &layout, const SparseMatrix &b, const Vector &mass_p,
                    const Vector &continuity, const Vector &kappa);

/// Nonlinear residual and Jacobian at `state` (coefficients recomputed from its potentials).
/// kappa is held fixed in the Jacobian.
BlockSystem assemble_newton(const FieldLayout &layout, const ProblemData &problem,
                            const Vector &state, const Vector &kappa);

/// Residual only, without elimination of essential rows (for difference checks).
Vector newton_residual(const FieldLayout &layout, const ProblemData &problem, const Vector &state,
                       const Vector &kappa);

/// Per-species diagonal flux blocks of `a` (the a_diag form).
SparseMatrix species_diagonal(const FieldLayout &layout, const SparseMatrix &a);

/// Indices of species i's flux (or potential) unknowns in the monolithic ordering.
std::vector<int> flux_indices(const FieldLayout &layout, int species);
std::vector<int> potential_indices(const FieldLayout &layout, int species);

}  // namespace osm
