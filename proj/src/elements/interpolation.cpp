#include "osm/elements/interpolation.hpp"

#include <cmath>

#include "osm/error.hpp"
#include "osm/krylov/sparse.hpp"

namespace osm
{

RuleTables make_tables(const FieldLayout &layout, int degree)
{
  RuleTables t;
  t.rule = triangle_rule(degree);
  t.rt = layout.rt().tabulate(t.rule.points);
  t.dg = layout.dg().tabulate(t.rule.points);
  return t;
}

namespace
{

void fill_cell_values(const FieldLayout &layout, int cell, const TriangleRule &rule,
                      const Tabulation &rt, const Tabulation &dg, CellValues &out)
{
  const CellGeometry &g = layout.mesh().geometry(cell);
  const auto signs = layout.rt_cell_signs(cell);
  const int nrt = layout.rt().dimension();
  const Eigen::Map<const Eigen::VectorXd> s(signs.data(), nrt);
  const Eigen::Matrix2d &jac = g.jacobian;
  const double inv_det = 1.0 / g.det;
  out.phi_x = (s * inv_det).asDiagonal() * (jac(0, 0) * rt.values + jac(0, 1) * rt.values_y);
  out.phi_y = (s * inv_det).asDiagonal() * (jac(1, 0) * rt.values + jac(1, 1) * rt.values_y);
  out.div = (s * inv_det).asDiagonal() * rt.divergence;
  out.psi = dg.values;
  out.weights = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size()) * g.det;
  out.points.resize(rule.size());
  for (int q = 0; q < rule.size(); ++q)
  {
    out.points[q] = g.map(rule.points[q]);
  }
}

}  // namespace

CellValues cell_values(const FieldLayout &layout, int cell, const RuleTables &tables)
{
  CellValues out;
  fill_cell_values(layout, cell, tables.rule, tables.rt, tables.dg, out);
  return out;
}

CellValues cell_values(const FieldLayout &layout, int cell)
{
  CellValues out;
  fill_cell_values(layout, cell, layout.rule(), layout.rt_table(), layout.dg_table(), out);
  return out;
}

Eigen::VectorXd interpolate_flux(const FieldLayout &layout, const VectorField &f)
{
  const Mesh &mesh = layout.mesh();
  const ReferenceElement &rt = layout.rt();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.rt_size());
  std::vector<bool> done(layout.rt_size(), false);
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const CellGeometry &g = mesh.geometry(c);
    // Inverse contravariant Piola: fhat = det J^{-1} f(F(xhat)).
    const Eigen::VectorXd local = rt.apply_duals(
        [&](const Point &xhat) -> Point { return g.det * (g.jacobian_inv * f(g.map(xhat))); });
    const auto dofs = layout.rt_cell_dofs(c);
    const auto signs = layout.rt_cell_signs(c);
    for (int l = 0; l < rt.dimension(); ++l)
    {
      if (!done[dofs[l]])
      {
        out[dofs[l]] = signs[l] * local[l];
        done[dofs[l]] = true;
      }
    }
  }
  return out;
}

Eigen::VectorXd project_potential(const FieldLayout &layout, const ScalarField &f)
{
  const Mesh &mesh = layout.mesh();
  const RuleTables tables = make_tables(layout, 2 * layout.degree() + 2);
  const int nd = layout.dg().dimension();
  Eigen::VectorXd out(layout.dg_size());
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const CellGeometry &g = mesh.geometry(c);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(nd);
    for (int q = 0; q < tables.rule.size(); ++q)
    {
      acc += tables.rule.weights[q] * f(g.map(tables.rule.points[q])) * tables.dg.values.col(q);
    }
    // Reference mass is I/2.
    out.segment(layout.dg_dof(c, 0), nd) = 2.0 * acc;
  }
  return out;
}

Point evaluate_flux(const FieldLayout &layout, std::span<const double> coeffs, int cell,
                    const Point &xhat)
{
  const Tabulation tab = layout.rt().tabulate(std::span<const Point>(&xhat, 1));
  const auto dofs = layout.rt_cell_dofs(cell);
  const auto signs = layout.rt_cell_signs(cell);
  Point ref(0.0, 0.0);
  for (int l = 0; l < layout.rt().dimension(); ++l)
  {
    const double u = signs[l] * coeffs[dofs[l]];
    ref += u * Point(tab.values(l, 0), tab.values_y(l, 0));
  }
  const CellGeometry &g = layout.mesh().geometry(cell);
  return g.jacobian * ref / g.det;
}

double evaluate_divergence(const FieldLayout &layout, std::span<const double> coeffs, int cell,
                           const Point &xhat)
{
  const Tabulation tab = layout.rt().tabulate(std::span<const Point>(&xhat, 1));
  const auto dofs = layout.rt_cell_dofs(cell);
  const auto signs = layout.rt_cell_signs(cell);
  double d = 0.0;
  for (int l = 0; l < layout.rt().dimension(); ++l)
  {
    d += signs[l] * coeffs[dofs[l]] * tab.divergence(l, 0);
  }
  return d / layout.mesh().geometry(cell).det;
}

double evaluate_potential(const FieldLayout &layout, std::span<const double> coeffs, int cell,
                          const Point &xhat)
{
  const Tabulation tab = layout.dg().tabulate(std::span<const Point>(&xhat, 1));
  double v = 0.0;
  for (int q = 0; q < layout.dg().dimension(); ++q)
  {
    v += coeffs[layout.dg_dof(cell, q)] * tab.values(q, 0);
  }
  return v;
}

double flux_l2_error(const FieldLayout &layout, std::span<const double> coeffs,
                     const VectorField &exact)
{
  OSM_REQUIRE(static_cast<int>(coeffs.size()) == layout.rt_size(), ErrorCode::invalid_argument,
              "flux coefficient length does not match layout");
  const RuleTables tables = make_tables(layout, 2 * layout.degree() + 4);
  const int nrt = layout.rt().dimension();
  double sum = 0.0;
  Eigen::VectorXd u(nrt);
  for (int c = 0; c < layout.mesh().num_cells(); ++c)
  {
    const CellValues cv = cell_values(layout, c, tables);
    const auto dofs = layout.rt_cell_dofs(c);
    for (int l = 0; l < nrt; ++l)
    {
      u[l] = coeffs[dofs[l]];
    }
    const Eigen::VectorXd vx = cv.phi_x.transpose() * u;
    const Eigen::VectorXd vy = cv.phi_y.transpose() * u;
    for (int q = 0; q < tables.rule.size(); ++q)
    {
      Point d(vx[q], vy[q]);
      if (exact)
      {
        d -= exact(cv.points[q]);
      }
      sum += cv.weights[q] * d.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double potential_l2_error(const FieldLayout &layout, std::span<const double> coeffs,
                          const ScalarField &exact)
{
  OSM_REQUIRE(static_cast<int>(coeffs.size()) == layout.dg_size(), ErrorCode::invalid_argument,
              "potential coefficient length does not match layout");
  const RuleTables tables = make_tables(layout, 2 * layout.degree() + 4);
  const int nd = layout.dg().dimension();
  double sum = 0.0;
  for (int c = 0; c < layout.mesh().num_cells(); ++c)
  {
    const CellGeometry &g = layout.mesh().geometry(c);
    const Eigen::Map<const Eigen::VectorXd> u(coeffs.data() + layout.dg_dof(c, 0), nd);
    const Eigen::VectorXd v = tables.dg.values.transpose() * u;
    for (int q = 0; q < tables.rule.size(); ++q)
    {
      double d = v[q];
      if (exact)
      {
        d -= exact(g.map(tables.rule.points[q]));
      }
      sum += tables.rule.weights[q] * g.det * d * d;
    }
  }
  return std::sqrt(sum);
}

SparseMatrix rt_mass_matrix(const FieldLayout &layout)
{
  const int nrt = layout.rt().dimension();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(layout.mesh().num_cells()) * nrt * nrt);
  for (int c = 0; c < layout.mesh().num_cells(); ++c)
  {
    const CellValues cv = cell_values(layout, c);
    const Eigen::MatrixXd m = cv.phi_x * cv.weights.asDiagonal() * cv.phi_x.transpose() +
                              cv.phi_y * cv.weights.asDiagonal() * cv.phi_y.transpose();
    const auto dofs = layout.rt_cell_dofs(c);
    for (int a = 0; a < nrt; ++a)
    {
      for (int b = 0; b < nrt; ++b)
      {
        t.emplace_back(dofs[a], dofs[b], m(a, b));
      }
    }
  }
  return from_triplets(layout.rt_size(), layout.rt_size(), t);
}

}  // namespace osm
