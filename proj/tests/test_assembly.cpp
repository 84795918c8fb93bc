#include <gtest/gtest.h>

#include <random>

#include "osm/assembly/assembly.hpp"
#include "osm/driver/discretization.hpp"
#include "osm/elements/interpolation.hpp"
#include "osm/error.hpp"

namespace
{

using namespace osm;

Vector random_vector(int n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (auto &x : v)
  {
    x = normal(rng);
  }
  return v;
}

struct Fixture
{
  ProblemData problem = manufactured_problem();
  Discretization disc;
  QuadratureField c;

  explicit Fixture(int m = 0, int k = 1) : disc(build_discretization(problem, m, k, false))
  {
    c = sample_concentrations(disc.fine(), [this](const Point &x) {
      return problem.exact->concentrations(x);
    });
  }
  const FieldLayout &layout() const { return disc.fine(); }
};

TEST(Assembly, TransportBlockIsSymmetric)
{
  Fixture f(1, 2);
  const Vector kappa = choose_kappa(f.layout(), f.problem.spec, f.c, 10.0, 1.0);
  const BlockSystem sys = assemble_picard(f.layout(), f.problem, f.c, kappa);
  EXPECT_LT(asymmetry(sys.a), 1e-12 * sys.a.coeffs().cwiseAbs().maxCoeff());
  EXPECT_LT(asymmetry(sys.matrix), 1e-12 * sys.matrix.coeffs().cwiseAbs().maxCoeff());
}

TEST(Assembly, DivergenceKillsConstantFields)
{
  Fixture f(1, 2);
  const BlockSystem sys = assemble_picard(f.layout(), f.problem, f.c, {});
  const FieldLayout &l = f.layout();
  const Eigen::VectorXd one = interpolate_flux(l, [](const Point &) { return Point(2.0, -1.0); });
  Vector fluxes(l.species() * l.rt_size());
  for (int i = 0; i < l.species(); ++i)
  {
    fluxes.segment(l.flux_offset(i), l.rt_size()) = one;
  }
  EXPECT_LT((sys.b * fluxes).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Assembly, KappaRuleBinaryExample)
{
  Eigen::MatrixXd d(2, 2);
  d << 0.0, 2.0, 2.0, 0.0;
  const MixtureSpec spec = make_mixture(Eigen::Vector2d(1.0, 1.0), d, 1.0, 1.0, 1.0);
  auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh(1, 1));
  const FieldLayout layout(mesh, 2, 1, {});
  const QuadratureField c = sample_concentrations(layout, [](const Point &) {
    return Eigen::VectorXd(Eigen::Vector2d(1.0, 1.0));
  });
  const Vector kappa = choose_kappa(layout, spec, c, 10.0, 1.0);
  EXPECT_NEAR(kappa[0], 5.0, 1e-13);
  EXPECT_NEAR(kappa[1], 5.0, 1e-13);
  EXPECT_LT((choose_kappa(layout, spec, c, 20.0, 1.0) - 2.0 * kappa).norm(), 1e-13);
  EXPECT_THROW(choose_kappa(layout, spec, c, -1.0, 1.0), Error);
}

TEST(Assembly, AugmentationBlock)
{
  Fixture f(0, 2);
  const FieldLayout &l = f.layout();
  const BlockSystem sys = assemble_picard(l, f.problem, f.c, {});
  const Vector zero = Vector::Zero(l.species());
  const AlTerms none = assemble_al(l, sys.b, sys.mass_p, sys.continuity, zero);
  EXPECT_EQ(none.block.cwiseAbs().sum(), 0.0);

  const Vector kappa = Eigen::Vector4d(1.0, 2.0, 0.5, 3.0);
  const AlTerms al = assemble_al(l, sys.b, sys.mass_p, sys.continuity, kappa);
  // Dense oracle diag(kappa) B^T Mp^{-1} B.
  const Eigen::MatrixXd b(sys.b);
  Eigen::VectorXd scale = sys.mass_p.cwiseInverse();
  Eigen::VectorXd row_kappa(b.cols());
  for (int i = 0; i < l.species(); ++i)
  {
    row_kappa.segment(l.flux_offset(i), l.rt_size()).setConstant(kappa[i]);
  }
  const Eigen::MatrixXd oracle = row_kappa.asDiagonal() * b.transpose() * scale.asDiagonal() * b;
  const Eigen::MatrixXd got(al.block);
  EXPECT_LT((got - oracle).cwiseAbs().maxCoeff(), 1e-12 * oracle.cwiseAbs().maxCoeff());
  const Vector x = random_vector(static_cast<int>(b.cols()), 1);
  EXPECT_GE(x.dot(al.block * x), 0.0);
  const Vector load_oracle = row_kappa.asDiagonal() * (b.transpose() * scale.asDiagonal() * sys.continuity);
  EXPECT_LT((al.load - load_oracle).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + load_oracle.cwiseAbs().maxCoeff()));
}

TEST(Assembly, NewtonJacobianAgainstCentralDifferences)
{
  Fixture f(0, 1);
  const FieldLayout &l = f.layout();
  Vector state = newton_initial_state(l, f.problem) + 0.01 * random_vector(l.size(), 2);
  const Vector kappa = choose_kappa(l, f.problem.spec, f.c, 0.1, 1.0);
  const BlockSystem sys = assemble_newton(l, f.problem, state, kappa);
  const double eps = 1e-6;
  for (int trial = 0; trial < 5; ++trial)
  {
    const Vector dir = random_vector(l.size(), 100 + trial);
    const Vector fd = (newton_residual(l, f.problem, state + eps * dir, kappa) -
                       newton_residual(l, f.problem, state - eps * dir, kappa)) /
                      (2.0 * eps);
    const Vector jd = sys.matrix * dir;
    EXPECT_LT((fd - jd).norm() / jd.norm(), 1e-5);
  }
}

TEST(Assembly, NewtonWithoutCouplingIsPicard)
{
  Fixture f(0, 2);
  const FieldLayout &l = f.layout();
  const Vector state = newton_initial_state(l, f.problem) + 0.05 * random_vector(l.size(), 3);
  const QuadratureField c = concentrations_from_state(l, state, f.problem.spec);
  const Vector kappa = choose_kappa(l, f.problem.spec, c, 0.1, 1.0);
  const BlockSystem newton = assemble_newton(l, f.problem, state, kappa);
  const BlockSystem picard = assemble_picard(l, f.problem, c, kappa);
  const SparseMatrix diff = newton.matrix - picard.matrix;
  const int nf = l.species() * l.rt_size();
  double outside = 0.0;
  for (int r = 0; r < diff.outerSize(); ++r)
  {
    for (SparseMatrix::InnerIterator it(diff, r); it; ++it)
    {
      if (!(r < nf && it.col() >= nf))
      {
        outside = std::max(outside, std::abs(it.value()));
      }
    }
  }
  EXPECT_LT(outside, 1e-12 * picard.matrix.coeffs().cwiseAbs().maxCoeff());
  EXPECT_GT(newton.coupling.nonZeros(), 0);
}

TEST(Assembly, ResidualAtInterpolantDecreasesWithRefinement)
{
  const ProblemData problem = manufactured_problem();
  std::vector<double> res;
  for (int m = 1; m <= 3; ++m)
  {
    const Discretization disc = build_discretization(problem, m, 1, false);
    const FieldLayout &l = disc.fine();
    Vector state(l.size());
    for (int i = 0; i < l.species(); ++i)
    {
      state.segment(l.flux_offset(i), l.rt_size()) =
          interpolate_flux(l, [&](const Point &x) { return problem.exact->flux(i, x); });
      state.segment(l.potential_offset(i), l.dg_size()) =
          project_potential(l, [&](const Point &x) { return problem.exact->potential(i, x); });
    }
    const Vector kappa = Vector::Zero(l.species());
    const Vector r = newton_residual(l, problem, state, kappa);
    // Residuals are tested against basis functions; scale by the dual (mesh-size) norm.
    const double h = l.mesh().max_diameter();
    res.push_back(r.norm() / h);
  }
  EXPECT_LT(res[1], res[0]);
  EXPECT_LT(res[2], res[1]);
}

}  // namespace
