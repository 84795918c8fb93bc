#include "osm/elements/transfer.hpp"

#include "osm/elements/interpolation.hpp"
#include "osm/elements/quadrature.hpp"
#include "osm/error.hpp"

namespace osm
{

namespace
{

constexpr double kDropTol = 1e-13;

// Fine reference coordinates -> parent reference coordinates: xc = A xf + b.
struct ChildMap
{
  Eigen::Matrix2d a;
  Point b;
};

ChildMap child_map(const CellGeometry &parent, const CellGeometry &child)
{
  return {parent.jacobian_inv * child.jacobian, parent.jacobian_inv * (child.origin - parent.origin)};
}

SparseMatrix rt_prolongation(const FieldLayout &coarse, const FieldLayout &fine,
                             const RefinementMap &map)
{
  const ReferenceElement &rt = fine.rt();
  const int nrt = rt.dimension();
  std::vector<Triplet> t;
  std::vector<bool> done(fine.rt_size(), false);
  for (int f = 0; f < fine.mesh().num_cells(); ++f)
  {
    const int c = map.cell_parent[f];
    const ChildMap cm = child_map(coarse.mesh().geometry(c), fine.mesh().geometry(f));
    const double det_a = cm.a.determinant();
    const Eigen::Matrix2d scale = det_a * cm.a.inverse();
    // Child-local duals of the parent basis, pulled back through the composed Piola map.
    const Eigen::MatrixXd local = rt.apply_duals_block(
        [&](const Point &xhat) -> Eigen::Matrix2Xd {
          const Point xc = cm.a * xhat + cm.b;
          const Tabulation tab = rt.tabulate(std::span<const Point>(&xc, 1));
          Eigen::Matrix2Xd v(2, nrt);
          v.row(0) = tab.values.col(0).transpose();
          v.row(1) = tab.values_y.col(0).transpose();
          return scale * v;
        },
        nrt);
    const auto fd = fine.rt_cell_dofs(f);
    const auto fs = fine.rt_cell_signs(f);
    const auto cd = coarse.rt_cell_dofs(c);
    const auto cs = coarse.rt_cell_signs(c);
    for (int l = 0; l < nrt; ++l)
    {
      if (done[fd[l]])
      {
        continue;
      }
      done[fd[l]] = true;
      for (int m = 0; m < nrt; ++m)
      {
        const double v = fs[l] * local(l, m) * cs[m];
        if (std::abs(v) > kDropTol)
        {
          t.emplace_back(fd[l], cd[m], v);
        }
      }
    }
  }
  return from_triplets(fine.rt_size(), coarse.rt_size(), t);
}

SparseMatrix dg_prolongation(const FieldLayout &coarse, const FieldLayout &fine,
                             const RefinementMap &map)
{
  const ReferenceElement &dg = fine.dg();
  const int nd = dg.dimension();
  const TriangleRule rule = triangle_rule(2 * dg.degree());
  const Tabulation fine_tab = dg.tabulate(rule.points);
  std::vector<Triplet> t;
  std::vector<Point> mapped(rule.size());
  for (int f = 0; f < fine.mesh().num_cells(); ++f)
  {
    const int c = map.cell_parent[f];
    const ChildMap cm = child_map(coarse.mesh().geometry(c), fine.mesh().geometry(f));
    for (int q = 0; q < rule.size(); ++q)
    {
      mapped[q] = cm.a * rule.points[q] + cm.b;
    }
    const Tabulation coarse_tab = dg.tabulate(mapped);
    const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.size());
    const Eigen::MatrixXd local = 2.0 * fine_tab.values * w.asDiagonal() * coarse_tab.values.transpose();
    for (int a = 0; a < nd; ++a)
    {
      for (int b = 0; b < nd; ++b)
      {
        if (std::abs(local(a, b)) > kDropTol)
        {
          t.emplace_back(fine.dg_dof(f, a), coarse.dg_dof(c, b), local(a, b));
        }
      }
    }
  }
  return from_triplets(fine.dg_size(), coarse.dg_size(), t);
}

SparseMatrix rt_injection(const FieldLayout &coarse, const FieldLayout &fine,
                          const RefinementMap &map)
{
  const Mesh &cmesh = coarse.mesh();
  const Mesh &fmesh = fine.mesh();
  const ReferenceElement &rt = fine.rt();
  const int k = fine.degree();
  const int nrt = rt.dimension();
  std::vector<Triplet> t;

  // Edge moments, integrated half-edge by half-edge in the global edge direction.
  const LineRule line = gauss_legendre(k + 3);
  for (int e = 0; e < cmesh.num_edges(); ++e)
  {
    const auto &[lo, hi] = cmesh.edge(e);
    const Point a = cmesh.vertex(lo);
    const Point d = cmesh.vertex(hi) - a;
    const Point normal(d.y(), -d.x());
    for (int half = 0; half < 2; ++half)
    {
      const int fe = map.edge_children[e][half];
      const int fc = fmesh.edge_cells(fe)[0];
      const CellGeometry &g = fmesh.geometry(fc);
      const auto fd = fine.rt_cell_dofs(fc);
      const auto fs = fine.rt_cell_signs(fc);
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, nrt);
      for (std::size_t q = 0; q < line.points.size(); ++q)
      {
        const double tt = 0.5 * (line.points[q] + half);
        const Point xhat = g.pullback(a + tt * d);
        const Tabulation tab = rt.tabulate(std::span<const Point>(&xhat, 1));
        for (int l = 0; l < nrt; ++l)
        {
          const Point phi = g.jacobian * Point(tab.values(l, 0), tab.values_y(l, 0)) / g.det;
          const double flux = fs[l] * phi.dot(normal);
          for (int j = 0; j < k; ++j)
          {
            acc(j, l) += 0.5 * line.weights[q] * legendre(j, 2.0 * tt - 1.0) * flux;
          }
        }
      }
      for (int j = 0; j < k; ++j)
      {
        for (int l = 0; l < nrt; ++l)
        {
          if (std::abs(acc(j, l)) > kDropTol)
          {
            t.emplace_back(coarse.rt_edge_dof(e, j), fd[l], acc(j, l));
          }
        }
      }
    }
  }

  // Interior moments against the degree k-2 basis, summed over the children.
  if (k >= 2)
  {
    const ReferenceElement moments = ReferenceElement::discontinuous(k - 2);
    const int nq = moments.dimension();
    const TriangleRule rule = triangle_rule(2 * k + 4);
    const Tabulation ftab = rt.tabulate(rule.points);
    std::vector<Point> mapped(rule.size());
    for (int f = 0; f < fmesh.num_cells(); ++f)
    {
      const int c = map.cell_parent[f];
      const ChildMap cm = child_map(cmesh.geometry(c), fmesh.geometry(f));
      for (int q = 0; q < rule.size(); ++q)
      {
        mapped[q] = cm.a * rule.points[q] + cm.b;
      }
      const Tabulation mtab = moments.tabulate(mapped);
      const auto fd = fine.rt_cell_dofs(f);
      const auto fs = fine.rt_cell_signs(f);
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2 * nq, nrt);
      for (int q = 0; q < rule.size(); ++q)
      {
        for (int l = 0; l < nrt; ++l)
        {
          const Point v = fs[l] * (cm.a * Point(ftab.values(l, q), ftab.values_y(l, q)));
          for (int s = 0; s < nq; ++s)
          {
            const double w = rule.weights[q] * mtab.values(s, q);
            acc(2 * s, l) += w * v.x();
            acc(2 * s + 1, l) += w * v.y();
          }
        }
      }
      for (int r = 0; r < 2 * nq; ++r)
      {
        for (int l = 0; l < nrt; ++l)
        {
          if (std::abs(acc(r, l)) > kDropTol)
          {
            t.emplace_back(coarse.rt_interior_dof(c, r), fd[l], acc(r, l));
          }
        }
      }
    }
  }
  return from_triplets(coarse.rt_size(), fine.rt_size(), t);
}

}  // namespace

SparseMatrix field_block_diagonal(const SparseMatrix &a, const SparseMatrix &b, int n)
{
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n) * (a.nonZeros() + b.nonZeros()));
  const int rows = n * static_cast<int>(a.rows() + b.rows());
  const int cols = n * static_cast<int>(a.cols() + b.cols());
  for (int i = 0; i < n; ++i)
  {
    const int r0 = i * static_cast<int>(a.rows());
    const int c0 = i * static_cast<int>(a.cols());
    for (int r = 0; r < a.outerSize(); ++r)
    {
      for (SparseMatrix::InnerIterator it(a, r); it; ++it)
      {
        t.emplace_back(r0 + r, c0 + it.col(), it.value());
      }
    }
  }
  for (int i = 0; i < n; ++i)
  {
    const int r0 = n * static_cast<int>(a.rows()) + i * static_cast<int>(b.rows());
    const int c0 = n * static_cast<int>(a.cols()) + i * static_cast<int>(b.cols());
    for (int r = 0; r < b.outerSize(); ++r)
    {
      for (SparseMatrix::InnerIterator it(b, r); it; ++it)
      {
        t.emplace_back(r0 + r, c0 + it.col(), it.value());
      }
    }
  }
  return from_triplets(rows, cols, t);
}

LevelTransfer build_transfer(const FieldLayout &coarse, const FieldLayout &fine,
                             const RefinementMap &map)
{
  OSM_REQUIRE(coarse.species() == fine.species() && coarse.degree() == fine.degree(),
              ErrorCode::level_mismatch, "layouts differ in species count or degree");
  OSM_REQUIRE(static_cast<int>(map.cell_parent.size()) == fine.mesh().num_cells() &&
                  static_cast<int>(map.edge_children.size()) == coarse.mesh().num_edges(),
              ErrorCode::level_mismatch, "refinement map does not connect these meshes");
  LevelTransfer out;
  out.rt = rt_prolongation(coarse, fine, map);
  out.dg = dg_prolongation(coarse, fine, map);
  out.rt_inject = rt_injection(coarse, fine, map);

  // L2 projection = Mc^{-1} P^T Mf with diagonal DG masses |T| I.
  std::vector<Triplet> t;
  const int nd = fine.dg().dimension();
  for (int r = 0; r < out.dg.outerSize(); ++r)
  {
    const int f = r / nd;
    const double area_f = fine.mesh().geometry(f).area();
    for (SparseMatrix::InnerIterator it(out.dg, r); it; ++it)
    {
      const int c = it.col() / nd;
      t.emplace_back(it.col(), r, it.value() * area_f / coarse.mesh().geometry(c).area());
    }
  }
  out.dg_inject = from_triplets(coarse.dg_size(), fine.dg_size(), t);

  const int n = fine.species();
  out.prolongation = field_block_diagonal(out.rt, out.dg, n);
  out.restriction = out.prolongation.transpose();
  out.injection = field_block_diagonal(out.rt_inject, out.dg_inject, n);
  return out;
}

}  // namespace osm
