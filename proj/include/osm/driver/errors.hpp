#pragma once

#include <vector>

#include "osm/elements/layout.hpp"
#include "osm/krylov/sparse.hpp"
#include "osm/osmcore/problems.hpp"

namespace osm
{

struct FieldErrors
{
  /// sqrt of the sum over species of squared L2 errors.
  double flux = 0.0;
  double potential = 0.0;
  std::vector<double> flux_per_species;
  std::vector<double> potential_per_species;
};

FieldErrors measure_errors(const FieldLayout &layout, const Vector &state, const ManufacturedCase &exact);

/// log2(e_{j} / e_{j+1}) for consecutive entries (uniform refinement halves h).
std::vector<double> convergence_rates(const std::vector<double> &errors);

/// Post-solve physics checks, evaluated at quadrature points.
struct Diagnostics
{
  /// ||sum_i J_i - rho v_bulk||_{L2}
  double mass_average = 0.0;
  /// ||c_T RT - p||_{L2}
  double equation_of_state = 0.0;
  double min_mole_fraction = 0.0;
  double max_mole_fraction = 0.0;
  double min_concentration = 0.0;
};

Diagnostics physics_diagnostics(const FieldLayout &layout, const ProblemData &problem,
                                const Vector &state);

}  // namespace osm
