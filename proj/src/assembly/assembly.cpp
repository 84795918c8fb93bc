#include "osm/assembly/assembly.hpp"

#include <array>
#include <cmath>

#include "osm/elements/interpolation.hpp"
#include "osm/elements/quadrature.hpp"
#include "osm/error.hpp"

namespace osm
{

namespace
{

const std::array<Point, 3> kRefVertices = {Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};

void require_dirichlet_somewhere(const FieldLayout &layout)
{
  const Mesh &mesh = layout.mesh();
  for (int i = 0; i < layout.species(); ++i)
  {
    bool any = false;
    for (int e = 0; e < mesh.num_edges() && !any; ++e)
    {
      any = mesh.is_boundary_edge(e) && !layout.is_neumann(i, mesh.edge_tag(e));
    }
    OSM_REQUIRE(any, ErrorCode::invalid_argument,
                "species " + std::to_string(i) +
                    " has no potential boundary data; pure flux problems are not supported");
  }
}

void check_problem(const FieldLayout &layout, const ProblemData &problem)
{
  const int n = layout.species();
  OSM_REQUIRE(problem.spec.n == n, ErrorCode::invalid_argument,
              "layout and problem disagree on the species count");
  OSM_REQUIRE(static_cast<int>(problem.sources.size()) == n &&
                  static_cast<int>(problem.boundary_potential.size()) == n,
              ErrorCode::invalid_argument, "problem data incomplete");
  require_dirichlet_somewhere(layout);
}

// Everything except the AL terms, optionally with the Newton coupling at `state`.
struct CoreBlocks
{
  SparseMatrix a;
  SparseMatrix b;
  SparseMatrix coupling;
  Vector mass_p;
  Vector load;
  Vector continuity;
};

CoreBlocks assemble_core(const FieldLayout &layout, const ProblemData &problem,
                         const QuadratureField &conc, const Vector *state)
{
  check_problem(layout, problem);
  const Mesh &mesh = layout.mesh();
  const MixtureSpec &spec = problem.spec;
  const int n = layout.species();
  const int nrt = layout.rt().dimension();
  const int nd = layout.dg().dimension();
  const int nq = layout.rule().size();
  const int nrt_all = n * layout.rt_size();
  const int nd_all = n * layout.dg_size();
  const double gamma = spec.gamma;
  OSM_REQUIRE(conc.points_per_cell == nq && conc.species == n, ErrorCode::invalid_argument,
              "concentration field does not match the layout's quadrature");

  std::vector<Triplet> ta, tb, tc;
  ta.reserve(static_cast<std::size_t>(mesh.num_cells()) * n * n * nrt * nrt);
  tb.reserve(static_cast<std::size_t>(mesh.num_cells()) * n * nd * nrt);
  if (state != nullptr)
  {
    tc.reserve(static_cast<std::size_t>(mesh.num_cells()) * n * n * nrt * nd);
  }
  CoreBlocks out;
  out.mass_p.resize(nd_all);
  out.load = Vector::Zero(nrt_all);
  out.continuity = Vector::Zero(nd_all);

  std::vector<TransportJet> jets(nq);
  Eigen::VectorXd wq(nq);
  Eigen::MatrixXd local_j(n, 2 * nq);  // current fluxes at the points (Newton)
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const CellValues cv = cell_values(layout, c);
    const auto dofs = layout.rt_cell_dofs(c);
    const double area = mesh.geometry(c).area();
    Eigen::VectorXd bulk_x(nq), bulk_y(nq);
    Eigen::MatrixXd mb(2, nq);
    for (int q = 0; q < nq; ++q)
    {
      const Eigen::VectorXd cq = conc.at(c, q);
      jets[q] = flux_transport_jet(cq, spec, gamma, state != nullptr);
      const double rho = spec.molar_masses.dot(cq);
      const Point m = problem.bulk_momentum(cv.points[q]);
      mb.col(q) = m;
      bulk_x[q] = cv.weights[q] * gamma / (rho * rho) * m.x();
      bulk_y[q] = cv.weights[q] * gamma / (rho * rho) * m.y();
    }
    const Eigen::VectorXd bulk = cv.phi_x * bulk_x + cv.phi_y * bulk_y;

    for (int i = 0; i < n; ++i)
    {
      for (int j = 0; j < n; ++j)
      {
        for (int q = 0; q < nq; ++q)
        {
          wq[q] = cv.weights[q] * jets[q].value(i, j);
        }
        const Eigen::MatrixXd aij = cv.phi_x * wq.asDiagonal() * cv.phi_x.transpose() +
                                    cv.phi_y * wq.asDiagonal() * cv.phi_y.transpose();
        const int ri = layout.flux_offset(i);
        const int cj = layout.flux_offset(j);
        for (int r = 0; r < nrt; ++r)
        {
          for (int s = 0; s < nrt; ++s)
          {
            ta.emplace_back(ri + dofs[r], cj + dofs[s], aij(r, s));
          }
        }
      }

      const Eigen::MatrixXd bi = (-1.0 / spec.molar_masses[i]) * cv.psi * cv.weights.asDiagonal() *
                                 cv.div.transpose();
      const int prow = i * layout.dg_size() + layout.dg_dof(c, 0);
      for (int r = 0; r < nd; ++r)
      {
        out.mass_p[prow + r] = area;
        for (int s = 0; s < nrt; ++s)
        {
          tb.emplace_back(prow + r, layout.flux_offset(i) + dofs[s], bi(r, s));
        }
      }

      Eigen::VectorXd rw(nq);
      for (int q = 0; q < nq; ++q)
      {
        rw[q] = cv.weights[q] * problem.sources[i](cv.points[q]);
      }
      out.continuity.segment(prow, nd) = -(cv.psi * rw);
      for (int s = 0; s < nrt; ++s)
      {
        out.load[layout.flux_offset(i) + dofs[s]] += bulk[s];
      }
    }

    if (state != nullptr)
    {
      for (int j = 0; j < n; ++j)
      {
        Eigen::VectorXd u(nrt);
        for (int s = 0; s < nrt; ++s)
        {
          u[s] = (*state)[layout.flux_offset(j) + dofs[s]];
        }
        local_j.row(j).head(nq) = (cv.phi_x.transpose() * u).transpose();
        local_j.row(j).tail(nq) = (cv.phi_y.transpose() * u).transpose();
      }
      Eigen::VectorXd sx(nq), sy(nq);
      for (int i = 0; i < n; ++i)
      {
        for (int m = 0; m < n; ++m)
        {
          for (int q = 0; q < nq; ++q)
          {
            const Eigen::VectorXd cq = conc.at(c, q);
            const double rho = spec.molar_masses.dot(cq);
            // d/dc_m of the transport term and of the -gamma m_b / rho^2 load.
            double vx = 2.0 * gamma * spec.molar_masses[m] / (rho * rho * rho) * mb(0, q);
            double vy = 2.0 * gamma * spec.molar_masses[m] / (rho * rho * rho) * mb(1, q);
            for (int j = 0; j < n; ++j)
            {
              vx += jets[q].d_dc[m](i, j) * local_j(j, q);
              vy += jets[q].d_dc[m](i, j) * local_j(j, nq + q);
            }
            const double dc = cq[m] / spec.rt;
            sx[q] = cv.weights[q] * dc * vx;
            sy[q] = cv.weights[q] * dc * vy;
          }
          const Eigen::MatrixXd ef = cv.phi_x * sx.asDiagonal() * cv.psi.transpose() +
                                     cv.phi_y * sy.asDiagonal() * cv.psi.transpose();
          const int pcol = m * layout.dg_size() + layout.dg_dof(c, 0);
          for (int r = 0; r < nrt; ++r)
          {
            for (int s = 0; s < nd; ++s)
            {
              tc.emplace_back(layout.flux_offset(i) + dofs[r], pcol + s, ef(r, s));
            }
          }
        }
      }
    }
  }

  // Dirichlet potential data: -(1/M_i) <f_i, tau_i . n> on the non-essential boundary.
  const int k = layout.degree();
  const LineRule line = gauss_legendre(k + 3);
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    if (!mesh.is_boundary_edge(e))
    {
      continue;
    }
    const int c = mesh.edge_cells(e)[0];
    const int le = mesh.local_edge_index(c, e);
    const CellGeometry &g = mesh.geometry(c);
    const Point ah = kRefVertices[(le + 1) % 3];
    const Point dh = kRefVertices[(le + 2) % 3] - ah;
    const Point d = g.jacobian * dh;
    const Point normal(d.y(), -d.x());  // outward for counterclockwise cells
    std::vector<Point> pts(line.points.size());
    for (std::size_t q = 0; q < pts.size(); ++q)
    {
      pts[q] = ah + line.points[q] * dh;
    }
    const Tabulation tab = layout.rt().tabulate(pts);
    const auto dofs = layout.rt_cell_dofs(c);
    const auto signs = layout.rt_cell_signs(c);
    for (int i = 0; i < n; ++i)
    {
      if (layout.is_neumann(i, mesh.edge_tag(e)))
      {
        continue;
      }
      for (std::size_t q = 0; q < pts.size(); ++q)
      {
        const double f = problem.boundary_potential[i](g.map(pts[q]));
        for (int s = 0; s < nrt; ++s)
        {
          const Point phi = signs[s] * g.jacobian * Point(tab.values(s, q), tab.values_y(s, q)) / g.det;
          out.load[layout.flux_offset(i) + dofs[s]] -=
              line.weights[q] * f * phi.dot(normal) / spec.molar_masses[i];
        }
      }
    }
  }

  out.a = from_triplets(nrt_all, nrt_all, ta);
  out.b = from_triplets(nd_all, nrt_all, tb);
  if (state != nullptr)
  {
    out.coupling = from_triplets(nrt_all, nd_all, tc);
  }
  return out;
}

// [[A + AL, B^T + C], [B, 0]]
SparseMatrix monolithic(const SparseMatrix &a, const SparseMatrix &al, const SparseMatrix &b,
                        const SparseMatrix *coupling)
{
  const int nf = static_cast<int>(a.rows());
  const int np = static_cast<int>(b.rows());
  std::vector<Triplet> t;
  t.reserve(a.nonZeros() + al.nonZeros() + 2 * b.nonZeros() +
            (coupling ? coupling->nonZeros() : 0));
  auto add = [&t](const SparseMatrix &m, int r0, int c0, bool transpose) {
    for (int r = 0; r < m.outerSize(); ++r)
    {
      for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      {
        if (transpose)
        {
          t.emplace_back(r0 + it.col(), c0 + r, it.value());
        }
        else
        {
          t.emplace_back(r0 + r, c0 + it.col(), it.value());
        }
      }
    }
  };
  add(a, 0, 0, false);
  add(al, 0, 0, false);
  add(b, nf, 0, false);
  add(b, 0, nf, true);
  if (coupling != nullptr)
  {
    add(*coupling, 0, nf, false);
  }
  return from_triplets(nf + np, nf + np, t);
}

Vector concat(const Vector &top, const Vector &bottom)
{
  Vector v(top.size() + bottom.size());
  v << top, bottom;
  return v;
}

Vector normalized_kappa(const FieldLayout &layout, const Vector &kappa)
{
  if (kappa.size() == 0)
  {
    return Vector::Zero(layout.species());
  }
  OSM_REQUIRE(kappa.size() == layout.species(), ErrorCode::invalid_argument,
              "one kappa per species required");
  OSM_REQUIRE((kappa.array() >= 0.0).all(), ErrorCode::invalid_argument,
              "kappa must be nonnegative");
  return kappa;
}

}  // namespace

QuadratureField concentrations_from_state(const FieldLayout &layout, const Vector &state,
                                          const MixtureSpec &spec)
{
  OSM_REQUIRE(state.size() == layout.size(), ErrorCode::invalid_argument,
              "state length does not match layout");
  const int n = layout.species();
  const int nq = layout.rule().size();
  const int nd = layout.dg().dimension();
  QuadratureField f;
  f.species = n;
  f.points_per_cell = nq;
  f.values.resize(n, static_cast<Eigen::Index>(layout.mesh().num_cells()) * nq);
  const Eigen::MatrixXd &psi = layout.dg_table().values;
  Eigen::VectorXd mu(n);
  for (int c = 0; c < layout.mesh().num_cells(); ++c)
  {
    for (int q = 0; q < nq; ++q)
    {
      for (int i = 0; i < n; ++i)
      {
        mu[i] = state.segment(layout.potential_offset(i) + layout.dg_dof(c, 0), nd).dot(psi.col(q));
      }
      f.values.col(c * nq + q) = concentrations_from_potentials(mu, spec);
    }
  }
  return f;
}

QuadratureField sample_concentrations(const FieldLayout &layout,
                                      const std::function<Eigen::VectorXd(const Point &)> &c)
{
  const int nq = layout.rule().size();
  QuadratureField f;
  f.species = layout.species();
  f.points_per_cell = nq;
  f.values.resize(f.species, static_cast<Eigen::Index>(layout.mesh().num_cells()) * nq);
  for (int cell = 0; cell < layout.mesh().num_cells(); ++cell)
  {
    const CellGeometry &g = layout.mesh().geometry(cell);
    for (int q = 0; q < nq; ++q)
    {
      const Eigen::VectorXd v = c(g.map(layout.rule().points[q]));
      require_positive(v);
      f.values.col(cell * nq + q) = v;
    }
  }
  return f;
}

void normalize(QuadratureField &field, double p, const MixtureSpec &spec)
{
  for (Eigen::Index j = 0; j < field.values.cols(); ++j)
  {
    field.values.col(j) = normalize_concentrations(field.values.col(j), p, spec);
  }
}

Vector essential_values(const FieldLayout &layout, const ProblemData &problem)
{
  Vector g = Vector::Zero(layout.size());
  for (int i = 0; i < layout.species(); ++i)
  {
    if (static_cast<int>(problem.boundary_flux.size()) <= i || !problem.boundary_flux[i])
    {
      continue;
    }
    const Vector interp = interpolate_flux(layout, problem.boundary_flux[i]);
    const auto &mask = layout.essential(i);
    for (int d = 0; d < layout.rt_size(); ++d)
    {
      if (mask[d])
      {
        g[layout.flux_offset(i) + d] = interp[d];
      }
    }
  }
  return g;
}

Vector choose_kappa(const FieldLayout &layout, const MixtureSpec &spec, const QuadratureField &c,
                    double alpha, double length_ref)
{
  OSM_REQUIRE(alpha >= 0.0, ErrorCode::invalid_argument, "alpha must be nonnegative");
  const int n = spec.n;
  const int nq = layout.rule().size();
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(n, n);
  double area = 0.0;
  for (int cell = 0; cell < layout.mesh().num_cells(); ++cell)
  {
    const double det = layout.mesh().geometry(cell).det;
    for (int q = 0; q < nq; ++q)
    {
      const double w = layout.rule().weights[q] * det;
      avg += w * flux_transport_jet(c.at(cell, q), spec, spec.gamma, false).value;
      area += w;
    }
  }
  avg /= area;
  Vector kappa(n);
  for (int i = 0; i < n; ++i)
  {
    kappa[i] = alpha * spec.molar_masses[i] * spec.molar_masses[i] * length_ref * length_ref *
               avg.row(i).cwiseAbs().maxCoeff();
  }
  return kappa;
}

AlTerms assemble_al(const FieldLayout &layout, const SparseMatrix &b, const Vector &mass_p,
                    const Vector &continuity, const Vector &kappa)
{
  const Vector kap = normalized_kappa(layout, kappa);
  OSM_REQUIRE((mass_p.array() > 0.0).all(), ErrorCode::internal, "singular potential mass");
  Vector scale(mass_p.size());
  for (int i = 0; i < layout.species(); ++i)
  {
    scale.segment(i * layout.dg_size(), layout.dg_size()) =
        kap[i] * mass_p.segment(i * layout.dg_size(), layout.dg_size()).cwiseInverse();
  }
  AlTerms out;
  const SparseMatrix bt = b.transpose();
  out.block = bt * scale.asDiagonal() * b;
  out.block.makeCompressed();
  out.load = bt * scale.cwiseProduct(continuity);
  return out;
}

BlockSystem assemble_picard(const FieldLayout &layout, const ProblemData &problem,
                            const QuadratureField &c, const Vector &kappa)
{
  CoreBlocks core = assemble_core(layout, problem, c, nullptr);
  BlockSystem sys;
  sys.kappa = normalized_kappa(layout, kappa);
  AlTerms al = assemble_al(layout, core.b, core.mass_p, core.continuity, sys.kappa);
  sys.essential = layout.essential_mask();
  sys.essential_values = essential_values(layout, problem);

  const SparseMatrix full = monolithic(core.a, al.block, core.b, nullptr);
  Vector rhs = concat(core.load + al.load, core.continuity);
  // Symmetric elimination: move known columns to the right-hand side.
  rhs -= full * sys.essential_values;
  for (int d = 0; d < layout.size(); ++d)
  {
    if (sys.essential[d])
    {
      rhs[d] = sys.essential_values[d];
    }
  }
  sys.matrix = eliminate_rows_cols(full, sys.essential);
  sys.rhs = std::move(rhs);
  sys.a = std::move(core.a);
  sys.b = std::move(core.b);
  sys.al = std::move(al.block);
  sys.mass_p = std::move(core.mass_p);
  sys.load = std::move(core.load);
  sys.continuity = std::move(core.continuity);
  sys.al_load = std::move(al.load);
  return sys;
}

BlockSystem assemble_newton(const FieldLayout &layout, const ProblemData &problem,
                            const Vector &state, const Vector &kappa)
{
  const QuadratureField c = concentrations_from_state(layout, state, problem.spec);
  CoreBlocks core = assemble_core(layout, problem, c, &state);
  BlockSystem sys;
  sys.kappa = normalized_kappa(layout, kappa);
  AlTerms al = assemble_al(layout, core.b, core.mass_p, core.continuity, sys.kappa);
  sys.essential = layout.essential_mask();
  sys.essential_values = essential_values(layout, problem);

  const SparseMatrix picard = monolithic(core.a, al.block, core.b, nullptr);
  Vector residual = picard * state - concat(core.load + al.load, core.continuity);
  for (int d = 0; d < layout.size(); ++d)
  {
    if (sys.essential[d])
    {
      residual[d] = state[d] - sys.essential_values[d];
    }
  }
  sys.matrix = eliminate_rows_cols(monolithic(core.a, al.block, core.b, &core.coupling), sys.essential);
  sys.rhs = std::move(residual);
  sys.a = std::move(core.a);
  sys.b = std::move(core.b);
  sys.al = std::move(al.block);
  sys.coupling = std::move(core.coupling);
  sys.mass_p = std::move(core.mass_p);
  sys.load = std::move(core.load);
  sys.continuity = std::move(core.continuity);
  sys.al_load = std::move(al.load);
  return sys;
}

Vector newton_residual(const FieldLayout &layout, const ProblemData &problem, const Vector &state,
                       const Vector &kappa)
{
  const QuadratureField c = concentrations_from_state(layout, state, problem.spec);
  CoreBlocks core = assemble_core(layout, problem, c, nullptr);
  AlTerms al = assemble_al(layout, core.b, core.mass_p, core.continuity, kappa);
  const SparseMatrix picard = monolithic(core.a, al.block, core.b, nullptr);
  return picard * state - concat(core.load + al.load, core.continuity);
}

SparseMatrix species_diagonal(const FieldLayout &layout, const SparseMatrix &a)
{
  const int rt = layout.rt_size();
  std::vector<Triplet> t;
  for (int r = 0; r < a.outerSize(); ++r)
  {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it)
    {
      if (r / rt == it.col() / rt)
      {
        t.emplace_back(r, it.col(), it.value());
      }
    }
  }
  return from_triplets(static_cast<int>(a.rows()), static_cast<int>(a.cols()), t);
}

std::vector<int> flux_indices(const FieldLayout &layout, int species)
{
  std::vector<int> idx(layout.rt_size());
  for (int d = 0; d < layout.rt_size(); ++d)
  {
    idx[d] = layout.flux_offset(species) + d;
  }
  return idx;
}

std::vector<int> potential_indices(const FieldLayout &layout, int species)
{
  std::vector<int> idx(layout.dg_size());
  for (int d = 0; d < layout.dg_size(); ++d)
  {
    idx[d] = layout.potential_offset(species) + d;
  }
  return idx;
}

}  // namespace osm
