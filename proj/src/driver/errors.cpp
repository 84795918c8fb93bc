#include "osm/driver/errors.hpp"

#include <cmath>
#include <limits>

#include "osm/elements/interpolation.hpp"
#include "osm/error.hpp"
#include "osm/osmcore/mixture.hpp"

namespace osm
{

FieldErrors measure_errors(const FieldLayout &layout, const Vector &state, const ManufacturedCase &exact)
{
  OSM_REQUIRE(state.size() == layout.size(), ErrorCode::invalid_argument, "state does not match layout");
  OSM_REQUIRE(layout.species() == exact.spec().n, ErrorCode::invalid_argument,
              "species count differs from the exact solution");
  FieldErrors out;
  double sj = 0.0;
  double sm = 0.0;
  for (int i = 0; i < layout.species(); ++i)
  {
    const std::span<const double> j(state.data() + layout.flux_offset(i), layout.rt_size());
    const std::span<const double> mu(state.data() + layout.potential_offset(i), layout.dg_size());
    const double ej = flux_l2_error(layout, j, [&](const Point &x) { return exact.flux(i, x); });
    const double em = potential_l2_error(layout, mu, [&](const Point &x) { return exact.potential(i, x); });
    out.flux_per_species.push_back(ej);
    out.potential_per_species.push_back(em);
    sj += ej * ej;
    sm += em * em;
  }
  out.flux = std::sqrt(sj);
  out.potential = std::sqrt(sm);
  return out;
}

std::vector<double> convergence_rates(const std::vector<double> &errors)
{
  std::vector<double> rates;
  for (std::size_t j = 0; j + 1 < errors.size(); ++j)
  {
    rates.push_back(std::log2(errors[j] / errors[j + 1]));
  }
  return rates;
}

Diagnostics physics_diagnostics(const FieldLayout &layout, const ProblemData &problem,
                                const Vector &state)
{
  OSM_REQUIRE(state.size() == layout.size(), ErrorCode::invalid_argument, "state does not match layout");
  const MixtureSpec &spec = problem.spec;
  const int n = layout.species();
  const RuleTables tables = make_tables(layout, 2 * layout.degree() + 4);
  Diagnostics d;
  d.min_mole_fraction = std::numeric_limits<double>::infinity();
  d.max_mole_fraction = -std::numeric_limits<double>::infinity();
  d.min_concentration = std::numeric_limits<double>::infinity();
  double mass = 0.0;
  double eos = 0.0;
  Eigen::VectorXd mu(n);
  for (int c = 0; c < layout.mesh().num_cells(); ++c)
  {
    const CellValues cv = cell_values(layout, c, tables);
    const auto dofs = layout.rt_cell_dofs(c);
    for (int q = 0; q < cv.weights.size(); ++q)
    {
      Point total(0.0, 0.0);
      for (int i = 0; i < n; ++i)
      {
        double v = 0.0;
        for (int a = 0; a < cv.psi.rows(); ++a)
        {
          v += state[layout.potential_offset(i) + layout.dg_dof(c, a)] * cv.psi(a, q);
        }
        mu[i] = v;
        for (int a = 0; a < cv.phi_x.rows(); ++a)
        {
          const double coef = state[layout.flux_offset(i) + dofs[a]];
          total.x() += coef * cv.phi_x(a, q);
          total.y() += coef * cv.phi_y(a, q);
        }
      }
      const Eigen::VectorXd conc = concentrations_from_potentials(mu, spec);
      const Point mb = problem.bulk_momentum ? problem.bulk_momentum(cv.points[q]) : Point(0.0, 0.0);
      mass += cv.weights[q] * (total - mb).squaredNorm();
      const double ct = conc.sum();
      eos += cv.weights[q] * std::pow(ct * spec.rt - problem.pressure, 2);
      d.min_mole_fraction = std::min(d.min_mole_fraction, conc.minCoeff() / ct);
      d.max_mole_fraction = std::max(d.max_mole_fraction, conc.maxCoeff() / ct);
      d.min_concentration = std::min(d.min_concentration, conc.minCoeff());
    }
  }
  d.mass_average = std::sqrt(mass);
  d.equation_of_state = std::sqrt(eos);
  return d;
}

}  // namespace osm
