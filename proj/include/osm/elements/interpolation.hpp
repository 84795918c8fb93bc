#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

#include "osm/elements/layout.hpp"
#include "osm/krylov/sparse.hpp"

namespace osm
{

using VectorField = std::function<Point(const Point &)>;
using ScalarField = std::function<double(const Point &)>;

/// Physical basis values on one cell at the points of a reference rule, with the
/// orientation signs of the global basis already applied.
struct CellValues
{
  Eigen::MatrixXd phi_x;  ///< RT x-components, dim x nq
  Eigen::MatrixXd phi_y;
  Eigen::MatrixXd div;
  Eigen::MatrixXd psi;  ///< DG values, dim x nq
  Eigen::VectorXd weights;  ///< physical quadrature weights
  std::vector<Point> points;  ///< physical quadrature points
};

/// Tabulations of a layout's elements on an arbitrary rule (default: the layout's rule).
struct RuleTables
{
  TriangleRule rule;
  Tabulation rt;
  Tabulation dg;
};

RuleTables make_tables(const FieldLayout &layout, int degree);
CellValues cell_values(const FieldLayout &layout, int cell, const RuleTables &tables);
CellValues cell_values(const FieldLayout &layout, int cell);

/// Canonical RT interpolant (edge and interior moments) of a physical vector field.
Eigen::VectorXd interpolate_flux(const FieldLayout &layout, const VectorField &f);

/// L2 projection onto the discontinuous space.
Eigen::VectorXd project_potential(const FieldLayout &layout, const ScalarField &f);

/// Point evaluation at reference coordinates `xhat` of `cell`; coefficients are one field.
Point evaluate_flux(const FieldLayout &layout, std::span<const double> coeffs, int cell,
                    const Point &xhat);
double evaluate_divergence(const FieldLayout &layout, std::span<const double> coeffs, int cell,
                           const Point &xhat);
double evaluate_potential(const FieldLayout &layout, std::span<const double> coeffs, int cell,
                          const Point &xhat);

/// ||u_h - f||_{L2} with a rule of exactness 2k+4; pass an empty function for ||u_h||.
double flux_l2_error(const FieldLayout &layout, std::span<const double> coeffs,
                     const VectorField &exact);
double potential_l2_error(const FieldLayout &layout, std::span<const double> coeffs,
                          const ScalarField &exact);

/// Unit-coefficient RT mass matrix of one flux field.
SparseMatrix rt_mass_matrix(const FieldLayout &layout);

}  // namespace osm
