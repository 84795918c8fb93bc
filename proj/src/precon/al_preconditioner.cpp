#include "osm/precon/al_preconditioner.hpp"

#include "osm/error.hpp"
#include "osm/krylov/direct.hpp"

namespace osm
{

namespace
{

template <typename Factorization>
class DirectOperator final : public LinearOperator
{
public:
  explicit DirectOperator(const SparseMatrix &a) : f_(a), n_(static_cast<int>(a.rows())) {}
  int size() const override { return n_; }
  void apply(const Vector &x, Vector &y) const override { y = f_.solve(x); }

private:
  Factorization f_;
  int n_;
};

}  // namespace

SparseMatrix flux_block(const FieldLayout &layout, const BlockSystem &system, int species)
{
  const auto idx = flux_indices(layout, species);
  return sparse_submatrix(system.matrix, idx, idx);
}

void ALPreconditioner::set_blocks(const FieldLayout &layout, const BlockSystem &system)
{
  OSM_REQUIRE(system.matrix.rows() == layout.size(), ErrorCode::invalid_argument,
              "system does not match layout");
  OSM_REQUIRE(system.kappa.size() == layout.species() && (system.kappa.array() > 0.0).all(),
              ErrorCode::invalid_argument, "AL preconditioner needs kappa > 0 for every species");
  n_ = 0;
  kappa_ = system.kappa;
  flux_.clear();
  potential_.clear();
  schur_.clear();
  for (int i = 0; i < layout.species(); ++i)
  {
    flux_.push_back(flux_indices(layout, i));
    potential_.push_back(potential_indices(layout, i));
    // The potential mass matrix is diagonal in the orthogonal DG basis.
    schur_.push_back(-kappa_[i] *
                     system.mass_p.segment(i * layout.dg_size(), layout.dg_size()).cwiseInverse());
  }
}

void ALPreconditioner::setup(const FieldLayout &layout, const BlockSystem &system, FluxSolverKind kind)
{
  OSM_REQUIRE(kind != FluxSolverKind::gmg, ErrorCode::invalid_argument,
              "GMG flux solvers must be built by the caller");
  std::vector<std::shared_ptr<const LinearOperator>> solvers;
  for (int i = 0; i < layout.species(); ++i)
  {
    const SparseMatrix block = flux_block(layout, system, i);
    if (kind == FluxSolverKind::cholesky)
    {
      solvers.push_back(std::make_shared<DirectOperator<CholeskyFactorization>>(block));
    }
    else
    {
      solvers.push_back(std::make_shared<DirectOperator<LuFactorization>>(block));
    }
  }
  setup(layout, system, std::move(solvers));
}

void ALPreconditioner::setup(const FieldLayout &layout, const BlockSystem &system,
                             std::vector<std::shared_ptr<const LinearOperator>> flux_solvers)
{
  set_blocks(layout, system);
  OSM_REQUIRE(static_cast<int>(flux_solvers.size()) == layout.species(),
              ErrorCode::invalid_argument, "one flux solver per species required");
  for (const auto &s : flux_solvers)
  {
    OSM_REQUIRE(s && s->size() == layout.rt_size(), ErrorCode::invalid_argument,
                "flux solver size differs from the flux space");
  }
  flux_solvers_ = std::move(flux_solvers);
  n_ = layout.size();
}

void ALPreconditioner::apply(const Vector &r, Vector &z) const
{
  OSM_REQUIRE(ready(), ErrorCode::not_ready, "AL preconditioner applied before setup");
  OSM_REQUIRE(r.size() == n_, ErrorCode::invalid_argument, "residual size mismatch");
  z.setZero(n_);
  Vector local;
  Vector out;
  for (std::size_t i = 0; i < flux_.size(); ++i)
  {
    const auto &f = flux_[i];
    local.resize(f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
    {
      local[j] = r[f[j]];
    }
    out.resize(local.size());
    flux_solvers_[i]->apply(local, out);
    for (std::size_t j = 0; j < f.size(); ++j)
    {
      z[f[j]] = out[j];
    }
    const auto &p = potential_[i];
    for (std::size_t j = 0; j < p.size(); ++j)
    {
      z[p[j]] = schur_[i][j] * r[p[j]];
    }
  }
}

}  // namespace osm
