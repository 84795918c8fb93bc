#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "osm/elements/interpolation.hpp"
#include "osm/elements/layout.hpp"
#include "osm/elements/quadrature.hpp"
#include "osm/elements/reference_element.hpp"
#include "osm/elements/transfer.hpp"
#include "osm/error.hpp"

namespace
{

using namespace osm;

std::span<const double> view(const Eigen::VectorXd &v)
{
  return {v.data(), static_cast<std::size_t>(v.size())};
}

TEST(Quadrature, GaussLegendreIntegratesMonomials)
{
  const LineRule rule = gauss_legendre(4);
  for (int p = 0; p <= 7; ++p)
  {
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q)
    {
      sum += rule.weights[q] * std::pow(rule.points[q], p);
    }
    EXPECT_NEAR(sum, 1.0 / (p + 1), 1e-14);
  }
}

TEST(Quadrature, TriangleRuleExactness)
{
  // Integral of x^a y^b over the reference triangle is a! b! / (a + b + 2)!.
  auto exact = [](int a, int b) {
    return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
  };
  for (int degree = 0; degree <= 12; ++degree)
  {
    const TriangleRule rule = triangle_rule(degree);
    for (int a = 0; a <= degree; ++a)
    {
      for (int b = 0; a + b <= degree; ++b)
      {
        double sum = 0.0;
        for (int q = 0; q < rule.size(); ++q)
        {
          sum += rule.weights[q] * std::pow(rule.points[q].x(), a) * std::pow(rule.points[q].y(), b);
        }
        EXPECT_NEAR(sum, exact(a, b), 1e-14) << "degree " << degree << " x^" << a << " y^" << b;
      }
    }
  }
}

TEST(ReferenceElement, Dg0IsConstantOne)
{
  const auto el = ReferenceElement::discontinuous(0);
  const std::vector<Point> pts{Point(0.2, 0.3), Point(0.0, 1.0)};
  const Tabulation t = el.tabulate(pts);
  ASSERT_EQ(t.values.rows(), 1);
  EXPECT_DOUBLE_EQ(t.values(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(t.values(0, 1), 1.0);
}

TEST(ReferenceElement, RtDimensionsAndNodality)
{
  for (int k = 1; k <= 5; ++k)
  {
    const auto el = ReferenceElement::raviart_thomas(k);
    EXPECT_EQ(el.dimension(), k * (k + 2));
    EXPECT_EQ(el.dofs_per_edge(), k);
    const Eigen::MatrixXd d = el.dual_matrix();
    EXPECT_LT((d - Eigen::MatrixXd::Identity(d.rows(), d.cols())).cwiseAbs().maxCoeff(), 1e-10)
        << "k = " << k;
  }
}

TEST(ReferenceElement, ConstantFieldIsDivergenceFree)
{
  const auto el = ReferenceElement::raviart_thomas(2);
  const Eigen::VectorXd coeffs = el.apply_duals([](const Point &) { return Point(0.7, -1.3); });
  const TriangleRule rule = triangle_rule(4);
  const Tabulation t = el.tabulate(rule.points);
  const Eigen::VectorXd div = t.divergence.transpose() * coeffs;
  EXPECT_LT(div.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ReferenceElement, DgBasisIsOrthonormalInMeanSquare)
{
  const auto el = ReferenceElement::discontinuous(3);
  const TriangleRule rule = triangle_rule(6);
  const Tabulation t = el.tabulate(rule.points);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(el.dimension(), el.dimension());
  for (int q = 0; q < rule.size(); ++q)
  {
    gram += 2.0 * rule.weights[q] * t.values.col(q) * t.values.col(q).transpose();
  }
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ReferenceElement, UnsupportedDegree)
{
  EXPECT_THROW(ReferenceElement::raviart_thomas(0), Error);
  EXPECT_THROW(ReferenceElement::raviart_thomas(6), Error);
  EXPECT_THROW(ReferenceElement::discontinuous(5), Error);
}

TEST(Layout, TwoCellSizes)
{
  auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh(1, 1));
  const FieldLayout one = build_layout(mesh, 1, 1, {});
  EXPECT_EQ(one.size(), 7);
  EXPECT_EQ(one.num_essential(), 0);
  const FieldLayout walls = build_layout(mesh, 1, 1, {{"left", "right", "bottom", "top"}});
  EXPECT_EQ(walls.num_essential(), 4);
  const FieldLayout four = build_layout(mesh, 4, 1, {});
  EXPECT_EQ(four.size(), 28);
  EXPECT_EQ(four.potential_offset(0), 20);
}

TEST(Layout, RejectsUnknownTag)
{
  auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh(1, 1));
  EXPECT_THROW(build_layout(mesh, 1, 1, {{"front"}}), Error);
  EXPECT_THROW(build_layout(mesh, 2, 1, {{"left"}}), Error);
}

TEST(Interpolation, ReproducesPolynomialsOfTheSpace)
{
  auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh(2, 2));
  for (int k = 1; k <= 3; ++k)
  {
    const FieldLayout layout(mesh, 1, k, {});
    // x * P_{k-1} homogeneous plus P_{k-1} lies in RT_k.
    const VectorField f = [k](const Point &p) {
      const double s = std::pow(p.x() + 2.0 * p.y(), k - 1);
      return Point(0.3 + p.x() * s, -0.2 + p.y() * s);
    };
    const Eigen::VectorXd j = interpolate_flux(layout, f);
    EXPECT_LT(flux_l2_error(layout, view(j), f), 1e-12) << "k = " << k;
    const ScalarField g = [k](const Point &p) { return std::pow(p.x() - p.y(), k - 1); };
    EXPECT_LT(potential_l2_error(layout, view(project_potential(layout, g)), g), 1e-12);
  }
}

TEST(Interpolation, ZeroFieldHasZeroError)
{
  auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh(2, 2));
  const FieldLayout layout(mesh, 1, 2, {});
  const Eigen::VectorXd zero_j = Eigen::VectorXd::Zero(layout.rt_size());
  const Eigen::VectorXd zero_mu = Eigen::VectorXd::Zero(layout.dg_size());
  EXPECT_EQ(flux_l2_error(layout, view(zero_j), [](const Point &) { return Point(0.0, 0.0); }), 0.0);
  EXPECT_EQ(potential_l2_error(layout, view(zero_mu), [](const Point &) { return 0.0; }), 0.0);
}

TEST(Interpolation, InterpolationErrorDecaysAtOrderK)
{
  const VectorField f = [](const Point &p) {
    return Point(std::sin(std::numbers::pi * p.x()) * p.y(), std::exp(p.x() * p.y()));
  };
  for (int k = 1; k <= 3; ++k)
  {
    std::vector<double> err;
    for (int n : {4, 8, 16})
    {
      auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh(n, n));
      const FieldLayout layout(mesh, 1, k, {});
      err.push_back(flux_l2_error(layout, view(interpolate_flux(layout, f)), f));
    }
    const double rate = std::log2(err[1] / err[2]);
    EXPECT_NEAR(rate, k, 0.25) << "k = " << k;
  }
}

TEST(Interpolation, RtMassMatrixIsSymmetricPositive)
{
  auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh(2, 2));
  const FieldLayout layout(mesh, 1, 2, {});
  const SparseMatrix m = rt_mass_matrix(layout);
  EXPECT_LT(asymmetry(m), 1e-14);
  const Eigen::MatrixXd d(m);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(d).eigenvalues().minCoeff(), 0.0);
}

class TransferTest : public ::testing::TestWithParam<int>
{
};

TEST_P(TransferTest, ConstantsAndCommutingDivergence)
{
  const int k = GetParam();
  const MeshHierarchy h(build_rectangle_mesh(2, 2), 1);
  const FieldLayout coarse(h.level_ptr(0), 1, k, {});
  const FieldLayout fine(h.level_ptr(1), 1, k, {});
  const LevelTransfer t = build_transfer(coarse, fine, h.refinement(0));

  const VectorField constant = [](const Point &) { return Point(1.5, -0.5); };
  const Eigen::VectorXd pc = t.rt * interpolate_flux(coarse, constant);
  EXPECT_LT((pc - interpolate_flux(fine, constant)).cwiseAbs().maxCoeff(), 1e-12);

  // div(P_rt u) equals P_dg(div u) cell by cell.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Eigen::VectorXd u(coarse.rt_size());
  for (auto &x : u)
  {
    x = normal(rng);
  }
  const Eigen::VectorXd fine_u = t.rt * u;
  for (int c = 0; c < fine.mesh().num_cells(); ++c)
  {
    const int parent = h.refinement(0).cell_parent[c];
    for (const Point xhat : {Point(0.2, 0.2), Point(0.6, 0.1)})
    {
      const Point x = fine.mesh().geometry(c).map(xhat);
      const Point xc = coarse.mesh().geometry(parent).pullback(x);
      EXPECT_NEAR(evaluate_divergence(fine, view(fine_u), c, xhat),
                  evaluate_divergence(coarse, view(u), parent, xc), 1e-10);
    }
  }
}

TEST_P(TransferTest, RestrictionIsTransposeAndInjectionIsLeftInverse)
{
  const int k = GetParam();
  const MeshHierarchy h(build_rectangle_mesh(1, 2), 1);
  const FieldLayout coarse(h.level_ptr(0), 2, k, {});
  const FieldLayout fine(h.level_ptr(1), 2, k, {});
  const LevelTransfer t = build_transfer(coarse, fine, h.refinement(0));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(coarse.size());
  Eigen::VectorXd y(fine.size());
  for (auto &v : x)
  {
    v = normal(rng);
  }
  for (auto &v : y)
  {
    v = normal(rng);
  }
  EXPECT_NEAR(t.prolong(x).dot(y), x.dot(t.restrict_to_coarse(y)), 1e-10);
  EXPECT_LT((t.inject(t.prolong(x)) - x).cwiseAbs().maxCoeff(), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Degrees, TransferTest, ::testing::Values(1, 2, 3));

TEST(Transfer, LevelMismatch)
{
  const MeshHierarchy h(build_rectangle_mesh(1, 1), 1);
  const FieldLayout coarse(h.level_ptr(0), 1, 1, {});
  const FieldLayout fine(h.level_ptr(1), 1, 2, {});
  try
  {
    build_transfer(coarse, fine, h.refinement(0));
    FAIL() << "expected level-mismatch";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::level_mismatch);
  }
}

}  // namespace
