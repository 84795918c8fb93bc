#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

#include "osm/meshkit/mesh.hpp"

namespace osm
{

enum class ElementFamily
{
  raviart_thomas,
  discontinuous,
};

/// Basis values at a set of reference points, one row per basis function.
struct Tabulation
{
  Eigen::MatrixXd values;  ///< scalar values (discontinuous) or x-component (RT)
  Eigen::MatrixXd values_y;  ///< RT only
  Eigen::MatrixXd divergence;  ///< RT only
};

/// Reference Raviart-Thomas or discontinuous Lagrange element on the unit triangle.
///
/// RT_k uses the convention where RT_1 is the lowest-order space: dim = k(k+2), with k
/// normal moments per edge (against Legendre polynomials in the edge parameter) followed
/// by k(k-1) interior moments. The discontinuous element of degree d uses a basis that is
/// L2-orthogonal on the reference cell with every function normalised so that its mean
/// square is one; the degree-0 function is the constant 1.
class ReferenceElement
{
public:
  /// k in 1..5.
  static ReferenceElement raviart_thomas(int k);
  /// Polynomial degree 0..4.
  static ReferenceElement discontinuous(int degree);

  ElementFamily family() const { return family_; }
  int degree() const { return degree_; }
  int dimension() const { return dimension_; }
  int dofs_per_edge() const { return dofs_per_edge_; }
  int dofs_per_cell_interior() const { return dofs_per_interior_; }

  Tabulation tabulate(std::span<const Point> points) const;

  /// Dual functionals applied to the basis (identity up to roundoff). RT only.
  Eigen::MatrixXd dual_matrix() const;

  /// Applies the RT dual functionals to an arbitrary reference vector field.
  Eigen::VectorXd apply_duals(const std::function<Point(const Point &)> &field) const;

  /// Same for `count` fields at once; `fields(p)` returns a 2 x count block.
  Eigen::MatrixXd apply_duals_block(const std::function<Eigen::Matrix2Xd(const Point &)> &fields,
                                    int count) const;

private:
  ReferenceElement() = default;

  ElementFamily family_ = ElementFamily::discontinuous;
  int degree_ = 0;
  int dimension_ = 0;
  int dofs_per_edge_ = 0;
  int dofs_per_interior_ = 0;
  int monomial_degree_ = 0;
  // Coefficients in the monomial basis (rows: monomials, cols: basis functions).
  Eigen::MatrixXd coeff_x_;
  Eigen::MatrixXd coeff_y_;
};

/// Monomials x^a y^b with a + b <= degree in graded order.
int monomial_count(int degree);
Eigen::VectorXd eval_monomials(int degree, const Point &p);
/// Partial derivatives of the monomials.
Eigen::VectorXd eval_monomials_dx(int degree, const Point &p);
Eigen::VectorXd eval_monomials_dy(int degree, const Point &p);

}  // namespace osm
