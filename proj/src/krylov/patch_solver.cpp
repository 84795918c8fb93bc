#include "osm/krylov/patch_solver.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "osm/error.hpp"

namespace osm
{

namespace
{

constexpr double kSingularRcond = 1e-14;

template <typename Matrix>
Eigen::PartialPivLU<Matrix> factor_patch(const SparseMatrix &a, const Patch &patch)
{
  const Eigen::MatrixXd local = dense_submatrix(a, patch.dofs, patch.dofs);
  OSM_REQUIRE(local.allFinite(), ErrorCode::singular_patch,
              "patch at vertex " + std::to_string(patch.vertex) + " has non-finite entries");
  Eigen::PartialPivLU<Matrix> lu(local.cast<typename Matrix::Scalar>());
  const double rc = static_cast<double>(lu.rcond());
  if (!(rc > kSingularRcond))
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", rc);
    throw Error(ErrorCode::singular_patch,
                "patch at vertex " + std::to_string(patch.vertex) + " is singular (rcond " + buf + ")");
  }
  return lu;
}

int worker_count(std::size_t work)
{
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char *env = std::getenv("OSM_THREADS"))
  {
    n = std::max(1, std::atoi(env));
  }
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(1, work / 64)));
}

}  // namespace

PatchSolver::PatchSolver(const SparseMatrix &a, const PatchSet &patches, double damping,
                         PatchPrecision precision)
  : n_(static_cast<int>(a.rows())), damping_(damping), precision_(precision)
{
  OSM_REQUIRE(a.rows() == a.cols(), ErrorCode::invalid_argument, "patch solver needs a square matrix");
  dofs_.reserve(patches.patches.size());
  if (precision_ == PatchPrecision::float64)
  {
    lu_.resize(patches.patches.size());
  }
  else
  {
    lu_single_.resize(patches.patches.size());
  }
  for (const Patch &p : patches.patches)
  {
    for (int d : p.dofs)
    {
      OSM_REQUIRE(d >= 0 && d < n_, ErrorCode::invalid_argument, "patch index out of range");
    }
    dofs_.push_back(p.dofs);
  }
  const int workers = worker_count(patches.patches.size());
  auto factor_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
    {
      if (patches.patches[i].dofs.empty())
      {
        continue;
      }
      if (precision_ == PatchPrecision::float64)
      {
        lu_[i] = factor_patch<Eigen::MatrixXd>(a, patches.patches[i]);
      }
      else
      {
        lu_single_[i] = factor_patch<Eigen::MatrixXf>(a, patches.patches[i]);
      }
    }
  };
  if (workers <= 1)
  {
    factor_range(0, patches.patches.size());
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (patches.patches.size() + workers - 1) / workers;
  for (int w = 0; w < workers; ++w)
  {
    pool.emplace_back([&, w] {
      try
      {
        factor_range(std::min(patches.patches.size(), w * chunk),
                     std::min(patches.patches.size(), (w + 1) * chunk));
      }
      catch (...)
      {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
  {
    t.join();
  }
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

Vector PatchSolver::solve_patch(int p, const Vector &r) const
{
  const auto &d = dofs_[p];
  Eigen::VectorXd local(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
  {
    local[i] = r[d[i]];
  }
  if (precision_ == PatchPrecision::float64)
  {
    return lu_[p].solve(local);
  }
  return lu_single_[p].solve(Eigen::VectorXf(local.cast<float>())).cast<double>();
}

void PatchSolver::apply(const Vector &r, Vector &z) const
{
  z.setZero(n_);
  // Sequential accumulation keeps the result independent of any threading.
  for (int p = 0; p < num_patches(); ++p)
  {
    if (dofs_[p].empty())
    {
      continue;
    }
    const Vector x = solve_patch(p, r);
    const auto &d = dofs_[p];
    for (std::size_t i = 0; i < d.size(); ++i)
    {
      z[d[i]] += damping_ * x[i];
    }
  }
}

std::size_t PatchSolver::stored_entries() const
{
  std::size_t s = 0;
  for (const auto &d : dofs_)
  {
    s += d.size() * d.size();
  }
  return s;
}

Vector patch_solve(const SparseMatrix &a, const Patch &patch, const Vector &r)
{
  const auto lu = factor_patch<Eigen::MatrixXd>(a, patch);
  Eigen::VectorXd local(patch.dofs.size());
  for (std::size_t i = 0; i < patch.dofs.size(); ++i)
  {
    local[i] = r[patch.dofs[i]];
  }
  return lu.solve(local);
}

}  // namespace osm
