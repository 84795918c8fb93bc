#include "osm/precon/relaxation.hpp"

#include <cmath>
#include <random>

#include "osm/error.hpp"

namespace osm
{

Vector apply_star_smoother(const SparseMatrix &a, const PatchSolver &patches, const Vector &r,
                           int sweeps)
{
  OSM_REQUIRE(sweeps >= 0, ErrorCode::invalid_argument, "negative sweep count");
  OSM_REQUIRE(r.size() == a.rows() && patches.size() == a.rows(), ErrorCode::invalid_argument,
              "smoother size mismatch");
  Vector x = Vector::Zero(r.size());
  Vector z(r.size());
  for (int s = 0; s < sweeps; ++s)
  {
    const Vector res = s == 0 ? r : Vector(r - a * x);
    patches.apply(res, z);
    x += z;
  }
  return x;
}

double estimate_lambda_max(const SparseMatrix &a, const LinearOperator &p, int iterations,
                           const std::vector<bool> &skip, std::uint64_t seed)
{
  OSM_REQUIRE(iterations >= 1, ErrorCode::invalid_argument, "need at least one power iteration");
  const int n = static_cast<int>(a.rows());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i)
  {
    v[i] = dist(rng);
    if (!skip.empty() && skip[i])
    {
      v[i] = 0.0;
    }
  }
  v.normalize();
  Vector w(n);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it)
  {
    p.apply(a * v, w);
    lambda = w.norm();
    OSM_REQUIRE(std::isfinite(lambda), ErrorCode::internal, "power iteration broke down");
    if (lambda == 0.0)
    {
      break;
    }
    v = w / lambda;
  }
  return lambda;
}

RichardsonSmoother::RichardsonSmoother(const SparseMatrix &a,
                                       std::shared_ptr<const LinearOperator> inner, double scale,
                                       int power_iterations, const std::vector<bool> &skip)
  : inner_(std::move(inner))
{
  OSM_REQUIRE(inner_ != nullptr, ErrorCode::invalid_argument, "missing inner relaxation");
  OSM_REQUIRE(scale > 0.0, ErrorCode::invalid_argument, "damping scale must be positive");
  lambda_max_ = estimate_lambda_max(a, *inner_, power_iterations, skip);
  OSM_REQUIRE(lambda_max_ > 0.0, ErrorCode::internal, "zero spectral estimate");
  omega_ = scale / lambda_max_;
}

void RichardsonSmoother::apply(const Vector &r, Vector &z) const
{
  inner_->apply(r, z);
  z *= omega_;
}

BlockDiagonalSmoother::BlockDiagonalSmoother(int size, std::vector<Block> blocks)
  : n_(size), blocks_(std::move(blocks))
{
  for (const Block &b : blocks_)
  {
    OSM_REQUIRE(b.flux_solver && b.flux_solver->size() == static_cast<int>(b.flux.size()),
                ErrorCode::invalid_argument, "flux solver does not match its block");
    OSM_REQUIRE(b.potential_scale.size() == static_cast<int>(b.potential.size()),
                ErrorCode::invalid_argument, "potential scale does not match its block");
  }
}

void BlockDiagonalSmoother::apply(const Vector &r, Vector &z) const
{
  z.setZero(n_);
  Vector local;
  Vector out;
  for (const Block &b : blocks_)
  {
    local.resize(b.flux.size());
    for (std::size_t i = 0; i < b.flux.size(); ++i)
    {
      local[i] = r[b.flux[i]];
    }
    out.resize(local.size());
    b.flux_solver->apply(local, out);
    for (std::size_t i = 0; i < b.flux.size(); ++i)
    {
      z[b.flux[i]] = out[i];
    }
    for (std::size_t i = 0; i < b.potential.size(); ++i)
    {
      z[b.potential[i]] = b.potential_scale[i] * r[b.potential[i]];
    }
  }
}

}  // namespace osm
