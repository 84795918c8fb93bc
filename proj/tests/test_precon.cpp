#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "osm/error.hpp"
#include "osm/krylov/direct.hpp"
#include "osm/meshkit/patches.hpp"
#include "osm/precon/relaxation.hpp"

namespace
{

using namespace osm;
using osm::testing::FrozenHierarchy;
using osm::testing::random_vector;

int gmres_count(const SparseMatrix &a, const LinearOperator &pc, const Vector &b, double rtol)
{
  const MatrixOperator op(a);
  Vector x = Vector::Zero(b.size());
  KrylovConfig cfg;
  cfg.rtol = rtol;
  const SolveReport r = gmres(op, b, x, &pc, cfg);
  EXPECT_TRUE(r.converged);
  return r.iterations;
}

// Error reduction of the stationary iteration x <- x + B (b - A x), measured as the
// geometric mean over several cycles.
double contraction(const SparseMatrix &a, const LinearOperator &b_op, const std::vector<bool> &ess)
{
  const int n = static_cast<int>(a.rows());
  Vector e = random_vector(n, 21);
  for (int i = 0; i < n; ++i)
  {
    if (!ess.empty() && ess[i])
    {
      e[i] = 0.0;
    }
  }
  const double e0 = e.norm();
  const int cycles = 6;
  for (int c = 0; c < cycles; ++c)
  {
    const Vector r = -(a * e);
    e += b_op(r);
  }
  return std::pow(e.norm() / e0, 1.0 / cycles);
}

TEST(ALPreconditioner, NotReadyBeforeSetup)
{
  const ALPreconditioner pc;
  EXPECT_FALSE(pc.ready());
  Vector z;
  try
  {
    pc.apply(Vector::Zero(3), z);
    FAIL() << "expected not-ready";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::not_ready);
  }
}

TEST(ALPreconditioner, LinearBlockDiagonalAndReproducible)
{
  const FrozenHierarchy h(1, 1, 10.0);
  ALPreconditioner pc;
  pc.setup(h.disc.fine(), h.fine());
  const FieldLayout &l = h.disc.fine();
  EXPECT_EQ(pc(Vector::Zero(l.size())).norm(), 0.0);

  const Vector r = random_vector(l.size(), 1);
  const Vector z = pc(r);
  EXPECT_EQ(z, pc(r));
  Vector r2 = r;
  r2.segment(l.flux_offset(1), l.rt_size()).setZero();
  r2.segment(l.potential_offset(1), l.dg_size()).setZero();
  const Vector z2 = pc(r2);
  EXPECT_EQ(z2.segment(l.flux_offset(0), l.rt_size()), z.segment(l.flux_offset(0), l.rt_size()));
  EXPECT_EQ(z2.segment(l.potential_offset(0), l.dg_size()), z.segment(l.potential_offset(0), l.dg_size()));
  EXPECT_EQ(z2.segment(l.flux_offset(1), l.rt_size()).norm(), 0.0);

  // Potential block applies -kappa_i Mp_i^{-1}.
  Vector rp = Vector::Zero(l.size());
  rp.segment(l.potential_offset(2), l.dg_size()) = r.segment(l.potential_offset(2), l.dg_size());
  const Vector zp = pc(rp);
  const Vector expected = -h.fine().kappa[2] *
                          rp.segment(l.potential_offset(2), l.dg_size())
                              .cwiseQuotient(h.fine().mass_p.segment(2 * l.dg_size(), l.dg_size()));
  EXPECT_LT((zp.segment(l.potential_offset(2), l.dg_size()) - expected).norm(), 1e-12 * expected.norm());
  EXPECT_LT((pc(r + rp) - z - zp).norm(), 1e-10 * z.norm());
}

TEST(ALPreconditioner, RequiresAugmentation)
{
  const FrozenHierarchy h(0, 1, 0.0);
  ALPreconditioner pc;
  EXPECT_THROW(pc.setup(h.disc.fine(), h.fine()), Error);
}

// With the inter-species coupling of A removed every species is a separate single-species
// saddle point problem, for which the preconditioned spectrum clusters as kappa grows.
TEST(ALPreconditioner, LargeKappaClustersOnTwoCells)
{
  ProblemData problem = manufactured_problem();
  problem.nx = 1;
  problem.ny = 1;
  const Discretization disc = build_discretization(problem, 0, 1, false);
  const QuadratureField c = sample_concentrations(
      disc.fine(), [&](const Point &x) { return problem.exact->concentrations(x); });
  const Vector kappa = choose_kappa(disc.fine(), problem.spec, c, 1e4, 1.0);
  BlockSystem sys = assemble_picard(disc.fine(), problem, c, kappa);
  const SparseMatrix cross = sys.a - species_diagonal(disc.fine(), sys.a);
  std::vector<Triplet> t;
  for (int r = 0; r < cross.outerSize(); ++r)
  {
    for (SparseMatrix::InnerIterator it(cross, r); it; ++it)
    {
      t.emplace_back(r, it.col(), it.value());
    }
  }
  const int n = static_cast<int>(sys.matrix.rows());
  sys.matrix -= from_triplets(n, n, t);
  ALPreconditioner pc;
  pc.setup(disc.fine(), sys, FluxSolverKind::lu);
  EXPECT_LE(gmres_count(sys.matrix, pc, sys.rhs, 1e-8), 5);
}

TEST(Relaxation, StarSmootherSweeps)
{
  const FrozenHierarchy h(1, 1, 0.1);
  const FieldLayout &l = h.disc.fine();
  const SparseMatrix a = flux_block(l, h.fine(), 0);
  const PatchSolver ps(a, vertex_star_patches(l.mesh(), l, 0, true), 0.5);
  const Vector r = random_vector(static_cast<int>(a.rows()), 2);
  EXPECT_LT((apply_star_smoother(a, ps, r, 1) - ps(r)).norm(), 1e-14 * r.norm());
  const Vector two = apply_star_smoother(a, ps, r, 2);
  const Vector one = ps(r);
  EXPECT_LT((two - (one + ps(r - a * one))).norm(), 1e-12 * two.norm());
}

TEST(Relaxation, RichardsonUsesPowerIterationEstimate)
{
  const SparseMatrix a = from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 4.0}});
  auto id = std::make_shared<FunctionOperator>(3, [](const Vector &r, Vector &z) { z = r; });
  const RichardsonSmoother s(a, id, 0.8, 50);
  EXPECT_NEAR(s.lambda_max(), 4.0, 1e-3);
  EXPECT_NEAR(s.omega(), 0.2, 1e-4);
  const Vector r = Eigen::Vector3d(1.0, 1.0, 1.0);
  EXPECT_LT((s(r) - s.omega() * r).norm(), 1e-15);
}

TEST(FluxGmg, OneLevelIsExact)
{
  const FrozenHierarchy h(0, 2, 0.1);
  const GmgCycle cycle = h.flux_gmg(1);
  const SparseMatrix a = flux_block(h.disc.fine(), h.fine(), 1);
  const Vector b = random_vector(static_cast<int>(a.rows()), 3);
  EXPECT_LT((a * cycle(b) - b).norm(), 1e-10 * b.norm());
}

TEST(FluxGmg, VCycleContractsByHalf)
{
  for (double alpha : {0.1, 0.0})
  {
    const FrozenHierarchy h(2, 1, alpha);
    const GmgCycle cycle = h.flux_gmg(0);
    const SparseMatrix a = flux_block(h.disc.fine(), h.fine(), 0);
    EXPECT_LE(contraction(a, cycle, {}), 0.5) << "alpha = " << alpha;
  }
}

TEST(FluxGmg, PreconditionedGmresBounded)
{
  for (int m = 1; m <= 4; ++m)
  {
    const FrozenHierarchy h(m, 1, 0.1);
    for (int i = 0; i < 4; ++i)
    {
      const GmgCycle cycle = h.flux_gmg(i);
      const SparseMatrix a = flux_block(h.disc.fine(), h.fine(), i);
      const Vector b = random_vector(static_cast<int>(a.rows()), 4);
      EXPECT_LE(gmres_count(a, cycle, b, 1e-8), 25) << "m = " << m << " species " << i;
    }
  }
}

TEST(MonolithicGmg, OneLevelIsExact)
{
  const FrozenHierarchy h(0, 1, 0.1);
  for (SmootherKind kind : {SmootherKind::al, SmootherKind::vanka})
  {
    MonolithicOptions options;
    options.smoother = kind;
    const GmgCycle cycle = h.monolithic(options);
    EXPECT_EQ(gmres_count(h.fine().matrix, cycle, h.fine().rhs, 1e-10), 1);
  }
}

TEST(MonolithicGmg, CyclesAreLinearPreconditioners)
{
  const FrozenHierarchy h(2, 1, 0.1);
  const FieldLayout &l = h.disc.fine();
  const std::vector<bool> ess = l.essential_mask();
  for (SmootherKind kind : {SmootherKind::al, SmootherKind::vanka})
  {
    MonolithicOptions options;
    options.smoother = kind;
    const GmgCycle cycle = h.monolithic(options);
    EXPECT_EQ(cycle.num_levels(), 3);
    const Vector r1 = random_vector(l.size(), 5);
    const Vector r2 = random_vector(l.size(), 6);
    EXPECT_LT((cycle(r1 + r2) - cycle(r1) - cycle(r2)).norm(), 1e-10 * cycle(r1).norm());
    // Eight digits of residual reduction on the frozen system.
    EXPECT_LE(gmres_count(h.fine().matrix, cycle, h.fine().rhs, 1e-8), 32);
  }
  EXPECT_EQ(describe(MonolithicOptions{}), "richardson(al-star)");
}

TEST(MonolithicGmg, LevelMismatch)
{
  const FrozenHierarchy h(1, 1, 0.1);
  std::vector<const BlockSystem *> systems{&h.systems[1]};
  try
  {
    build_monolithic_gmg(h.disc.layout_pointers(), systems, h.disc.transfer_pointers());
    FAIL() << "expected level-mismatch";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::level_mismatch);
  }
}

TEST(Patches, VankaToStarRatioAtInteriorVertices)
{
  const FrozenHierarchy h(1, 2, 0.1);
  const FieldLayout &l = h.disc.fine();
  const Mesh &mesh = l.mesh();
  const PatchSet vanka = vertex_vanka_patches(mesh, l);
  const PatchSet star = vertex_star_patches(mesh, l, 0);
  for (int v = 0; v < mesh.num_vertices(); ++v)
  {
    bool interior = true;
    for (int e : mesh.vertex_edges(v))
    {
      interior = interior && !mesh.is_boundary_edge(e);
    }
    if (interior)
    {
      EXPECT_GE(vanka.patches[v].dofs.size(), 4 * star.patches[v].dofs.size());
    }
  }
}

}  // namespace
