#pragma once

#include <random>
#include <vector>

#include "osm/assembly/assembly.hpp"
#include "osm/driver/discretization.hpp"
#include "osm/precon/al_preconditioner.hpp"
#include "osm/precon/multigrid.hpp"

namespace osm::testing
{

inline Vector random_vector(int n, std::uint64_t seed)
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

/// Picard systems of the manufactured problem at its exact concentrations on every level.
struct FrozenHierarchy
{
  ProblemData problem = manufactured_problem();
  Discretization disc;
  Vector kappa;
  std::vector<BlockSystem> systems;

  FrozenHierarchy(int m, int k, double alpha) : disc(build_discretization(problem, m, k))
  {
    auto exact = [this](const Point &x) { return problem.exact->concentrations(x); };
    kappa = choose_kappa(disc.fine(), problem.spec, sample_concentrations(disc.fine(), exact), alpha,
                         problem.length_ref);
    for (int l = 0; l < disc.num_levels(); ++l)
    {
      systems.push_back(assemble_picard(disc.level(l), problem,
                                        sample_concentrations(disc.level(l), exact), kappa));
    }
  }

  const BlockSystem &fine() const { return systems.back(); }

  std::vector<const BlockSystem *> system_pointers() const
  {
    std::vector<const BlockSystem *> out;
    for (const auto &s : systems)
    {
      out.push_back(&s);
    }
    return out;
  }

  GmgCycle flux_gmg(int species, const FluxGmgOptions &options = {}) const
  {
    std::vector<SparseMatrix> blocks;
    for (int l = 0; l < disc.num_levels(); ++l)
    {
      blocks.push_back(flux_block(disc.level(l), systems[l], species));
    }
    std::vector<SparseMatrix> prolongations;
    for (const auto &t : disc.transfers)
    {
      prolongations.push_back(t.rt);
    }
    return build_flux_block_gmg(disc.layout_pointers(), species, blocks, prolongations, options);
  }

  GmgCycle monolithic(const MonolithicOptions &options) const
  {
    return build_monolithic_gmg(disc.layout_pointers(), system_pointers(), disc.transfer_pointers(),
                                options);
  }
};

}  // namespace osm::testing
