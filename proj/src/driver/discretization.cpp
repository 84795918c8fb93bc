#include "osm/driver/discretization.hpp"

#include "osm/assembly/assembly.hpp"
#include "osm/elements/interpolation.hpp"
#include "osm/error.hpp"
#include "osm/osmcore/mixture.hpp"

namespace osm
{

std::vector<const FieldLayout *> Discretization::layout_pointers() const
{
  std::vector<const FieldLayout *> out;
  for (const auto &l : layouts)
  {
    out.push_back(l.get());
  }
  return out;
}

std::vector<const LevelTransfer *> Discretization::transfer_pointers() const
{
  std::vector<const LevelTransfer *> out;
  for (const auto &t : transfers)
  {
    out.push_back(&t);
  }
  return out;
}

Vector Discretization::inject(const Vector &fine_state, int level) const
{
  OSM_REQUIRE(level >= 0 && level < num_levels(), ErrorCode::invalid_argument, "no such level");
  OSM_REQUIRE(fine_state.size() == fine().size(), ErrorCode::invalid_argument,
              "state does not match the finest layout");
  OSM_REQUIRE(level == num_levels() - 1 || static_cast<int>(transfers.size()) + 1 == num_levels(),
              ErrorCode::invalid_state, "discretization was built without transfers");
  Vector v = fine_state;
  for (int l = num_levels() - 2; l >= level; --l)
  {
    v = transfers[l].inject(v);
  }
  return v;
}

Discretization build_discretization(const ProblemData &problem, int refinements, int k,
                                    bool with_transfers)
{
  OSM_REQUIRE(refinements >= 0 && refinements <= 8, ErrorCode::invalid_argument,
              "refinement count outside 0..8");
  Discretization d;
  d.refinements = refinements;
  d.degree = k;
  d.hierarchy = std::make_shared<const MeshHierarchy>(problem.coarse_mesh(), refinements);
  const int first = with_transfers ? 0 : d.hierarchy->num_levels() - 1;
  for (int l = first; l < d.hierarchy->num_levels(); ++l)
  {
    d.layouts.push_back(std::make_shared<const FieldLayout>(d.hierarchy->level_ptr(l), problem.spec.n,
                                                           k, problem.neumann_tags));
  }
  if (with_transfers)
  {
    for (int l = 0; l + 1 < d.num_levels(); ++l)
    {
      d.transfers.push_back(build_transfer(d.level(l), d.level(l + 1), d.hierarchy->refinement(l)));
    }
  }
  return d;
}

Vector state_from_concentrations(const FieldLayout &layout, const ProblemData &problem,
                                 const std::function<Eigen::VectorXd(const Point &)> &c)
{
  const int n = layout.species();
  Vector state = essential_values(layout, problem);
  for (int i = 0; i < n; ++i)
  {
    const Eigen::VectorXd mu = project_potential(layout, [&](const Point &x) {
      return potentials_from_concentrations(c(x), problem.spec)[i];
    });
    state.segment(layout.potential_offset(i), layout.dg_size()) = mu;
  }
  return state;
}

Vector picard_initial_state(const FieldLayout &layout, const ProblemData &problem)
{
  OSM_REQUIRE(static_cast<bool>(problem.picard_initial), ErrorCode::invalid_argument,
              "problem has no Picard initial guess");
  return state_from_concentrations(layout, problem, problem.picard_initial);
}

Vector newton_initial_state(const FieldLayout &layout, const ProblemData &problem)
{
  OSM_REQUIRE(static_cast<bool>(problem.newton_initial_fractions), ErrorCode::invalid_argument,
              "problem has no initial mole fractions");
  const double scale = problem.pressure / problem.spec.rt;
  const int n = problem.spec.n;
  return state_from_concentrations(layout, problem, [&](const Point &x) {
    const Eigen::VectorXd chi = problem.newton_initial_fractions(x);
    OSM_REQUIRE(chi.size() == n, ErrorCode::invalid_argument,
                "initial mole fractions do not match the species count");
    return Eigen::VectorXd(chi / chi.sum() * scale);
  });
}

}  // namespace osm
