#include "osm/elements/reference_element.hpp"

#include <array>
#include <cmath>

#include "osm/elements/quadrature.hpp"
#include "osm/error.hpp"

namespace osm
{

int monomial_count(int degree)
{
  return degree < 0 ? 0 : (degree + 1) * (degree + 2) / 2;
}

namespace
{

int monomial_index(int a, int b)
{
  const int d = a + b;
  return monomial_count(d - 1) + b;
}

double ipow(double x, int n)
{
  double r = 1.0;
  for (int i = 0; i < n; ++i)
  {
    r *= x;
  }
  return r;
}

// Reference vertices and outward (unnormalised) edge normals; edge e joins (e+1)%3 -> (e+2)%3.
const std::array<Point, 3> kRefVertices = {Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};

}  // namespace

Eigen::VectorXd eval_monomials(int degree, const Point &p)
{
  Eigen::VectorXd m(monomial_count(degree));
  int i = 0;
  for (int d = 0; d <= degree; ++d)
  {
    for (int b = 0; b <= d; ++b)
    {
      m[i++] = ipow(p.x(), d - b) * ipow(p.y(), b);
    }
  }
  return m;
}

Eigen::VectorXd eval_monomials_dx(int degree, const Point &p)
{
  Eigen::VectorXd m(monomial_count(degree));
  int i = 0;
  for (int d = 0; d <= degree; ++d)
  {
    for (int b = 0; b <= d; ++b)
    {
      const int a = d - b;
      m[i++] = a == 0 ? 0.0 : a * ipow(p.x(), a - 1) * ipow(p.y(), b);
    }
  }
  return m;
}

Eigen::VectorXd eval_monomials_dy(int degree, const Point &p)
{
  Eigen::VectorXd m(monomial_count(degree));
  int i = 0;
  for (int d = 0; d <= degree; ++d)
  {
    for (int b = 0; b <= d; ++b)
    {
      const int a = d - b;
      m[i++] = b == 0 ? 0.0 : b * ipow(p.x(), a) * ipow(p.y(), b - 1);
    }
  }
  return m;
}

ReferenceElement ReferenceElement::discontinuous(int degree)
{
  if (degree < 0 || degree > 4)
  {
    throw Error(ErrorCode::unsupported_degree,
                "discontinuous degree " + std::to_string(degree) + " outside 0..4");
  }
  ReferenceElement el;
  el.family_ = ElementFamily::discontinuous;
  el.degree_ = degree;
  el.monomial_degree_ = degree;
  const int n = monomial_count(degree);
  el.dimension_ = n;
  el.dofs_per_interior_ = n;

  const TriangleRule rule = triangle_rule(2 * degree);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (int q = 0; q < rule.size(); ++q)
  {
    const Eigen::VectorXd m = eval_monomials(degree, rule.points[q]);
    gram.noalias() += rule.weights[q] * m * m.transpose();
  }
  // Graded Gram-Schmidt via Cholesky: psi = L^{-T} m, scaled to mean square one.
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  const Eigen::MatrixXd lower = llt.matrixL();
  el.coeff_x_ = std::sqrt(0.5) * lower.transpose().triangularView<Eigen::Upper>().solve(
                                     Eigen::MatrixXd::Identity(n, n));
  return el;
}

ReferenceElement ReferenceElement::raviart_thomas(int k)
{
  if (k < 1 || k > 5)
  {
    throw Error(ErrorCode::unsupported_degree,
                "Raviart-Thomas degree " + std::to_string(k) + " outside 1..5");
  }
  ReferenceElement el;
  el.family_ = ElementFamily::raviart_thomas;
  el.degree_ = k;
  el.monomial_degree_ = k;
  el.dimension_ = k * (k + 2);
  el.dofs_per_edge_ = k;
  el.dofs_per_interior_ = k * (k - 1);

  // Spanning set (P_{k-1})^2 + x * homogeneous P_{k-1}.
  const int nm = monomial_count(k);
  const int dim = el.dimension_;
  Eigen::MatrixXd span_x = Eigen::MatrixXd::Zero(nm, dim);
  Eigen::MatrixXd span_y = Eigen::MatrixXd::Zero(nm, dim);
  int col = 0;
  for (int d = 0; d <= k - 1; ++d)
  {
    for (int b = 0; b <= d; ++b)
    {
      span_x(monomial_index(d - b, b), col++) = 1.0;
      span_y(monomial_index(d - b, b), col++) = 1.0;
    }
  }
  for (int b = 0; b <= k - 1; ++b)
  {
    const int a = k - 1 - b;
    span_x(monomial_index(a + 1, b), col) = 1.0;
    span_y(monomial_index(a, b + 1), col) = 1.0;
    ++col;
  }

  el.coeff_x_ = span_x;
  el.coeff_y_ = span_y;
  Eigen::MatrixXd duals(dim, dim);
  for (int j = 0; j < dim; ++j)
  {
    duals.col(j) = el.apply_duals([&](const Point &p) {
      const Eigen::VectorXd m = eval_monomials(k, p);
      return Point(span_x.col(j).dot(m), span_y.col(j).dot(m));
    });
  }
  const Eigen::MatrixXd inv = duals.fullPivLu().inverse();
  el.coeff_x_ = span_x * inv;
  el.coeff_y_ = span_y * inv;
  return el;
}

Eigen::VectorXd ReferenceElement::apply_duals(const std::function<Point(const Point &)> &field) const
{
  return apply_duals_block([&](const Point &p) { return Eigen::Matrix2Xd(field(p)); }, 1).col(0);
}

Eigen::MatrixXd ReferenceElement::apply_duals_block(
    const std::function<Eigen::Matrix2Xd(const Point &)> &fields, int count) const
{
  OSM_REQUIRE(family_ == ElementFamily::raviart_thomas, ErrorCode::invalid_argument,
              "dual functionals are defined for Raviart-Thomas only");
  const int k = degree_;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dimension_, count);
  const LineRule line = gauss_legendre(k + 3);
  int row = 0;
  for (int e = 0; e < 3; ++e)
  {
    const Point a = kRefVertices[(e + 1) % 3];
    const Point b = kRefVertices[(e + 2) % 3];
    const Point d = b - a;
    const Point normal(d.y(), -d.x());
    for (std::size_t q = 0; q < line.points.size(); ++q)
    {
      const double t = line.points[q];
      const Eigen::RowVectorXd flux = normal.transpose() * fields(a + t * d);
      for (int j = 0; j < k; ++j)
      {
        out.row(row + j) += line.weights[q] * legendre(j, 2.0 * t - 1.0) * flux;
      }
    }
    row += k;
  }
  if (k >= 2)
  {
    const ReferenceElement moments = discontinuous(k - 2);
    const TriangleRule rule = triangle_rule(2 * k + 4);
    const Tabulation tab = moments.tabulate(rule.points);
    const int nq = moments.dimension();
    for (int q = 0; q < rule.size(); ++q)
    {
      const Eigen::Matrix2Xd v = fields(rule.points[q]);
      for (int i = 0; i < nq; ++i)
      {
        const double w = rule.weights[q] * tab.values(i, q);
        out.row(row + 2 * i) += w * v.row(0);
        out.row(row + 2 * i + 1) += w * v.row(1);
      }
    }
  }
  return out;
}

Eigen::MatrixXd ReferenceElement::dual_matrix() const
{
  Eigen::MatrixXd out(dimension_, dimension_);
  for (int j = 0; j < dimension_; ++j)
  {
    out.col(j) = apply_duals([&](const Point &p) {
      const Eigen::VectorXd m = eval_monomials(monomial_degree_, p);
      return Point(coeff_x_.col(j).dot(m), coeff_y_.col(j).dot(m));
    });
  }
  return out;
}

Tabulation ReferenceElement::tabulate(std::span<const Point> points) const
{
  const int np = static_cast<int>(points.size());
  Tabulation tab;
  tab.values.resize(dimension_, np);
  if (family_ == ElementFamily::discontinuous)
  {
    for (int q = 0; q < np; ++q)
    {
      tab.values.col(q) = coeff_x_.transpose() * eval_monomials(monomial_degree_, points[q]);
    }
    return tab;
  }
  tab.values_y.resize(dimension_, np);
  tab.divergence.resize(dimension_, np);
  for (int q = 0; q < np; ++q)
  {
    const Eigen::VectorXd m = eval_monomials(monomial_degree_, points[q]);
    tab.values.col(q) = coeff_x_.transpose() * m;
    tab.values_y.col(q) = coeff_y_.transpose() * m;
    tab.divergence.col(q) = coeff_x_.transpose() * eval_monomials_dx(monomial_degree_, points[q]) +
                            coeff_y_.transpose() * eval_monomials_dy(monomial_degree_, points[q]);
  }
  return tab;
}

}  // namespace osm
