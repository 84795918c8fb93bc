#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osm/driver/experiment.hpp"
#include "osm/error.hpp"

namespace
{

osm::FluxSolverKind parse_flux_solver(const std::string &name)
{
  if (name == "cholesky")
  {
    return osm::FluxSolverKind::cholesky;
  }
  if (name == "lu")
  {
    return osm::FluxSolverKind::lu;
  }
  if (name == "gmg")
  {
    return osm::FluxSolverKind::gmg;
  }
  throw osm::Error(osm::ErrorCode::invalid_argument, "unknown flux solver '" + name + "'");
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Mixed finite element solver and preconditioner lab for multicomponent diffusion"};
  app.require_subcommand(1);

  auto *run = app.add_subcommand("run", "Run an experiment grid and write CSV plus a text table");
  run->set_config("--config", "", "Read options from a file (key = flag name)");
  std::string experiment;
  std::vector<int> ks{1};
  std::vector<int> ms{1};
  std::vector<std::string> pcs;
  double alpha = -1.0;
  double gamma = 0.0;
  std::string out = "results";
  bool no_timing = false;
  int max_outer = 0;
  double star_damping = 0.0;
  double chebyshev_scale = 0.0;
  double schur_sign = 0.0;
  std::string flux_solver;
  run->add_option("experiment", experiment, "mms2d-picard, mms2d-newton or airway2d")
      ->required()
      ->check(CLI::IsMember(osm::experiment_names()));
  run->add_option("--k", ks, "Polynomial degrees (comma separated)")->delimiter(',');
  run->add_option("--m", ms, "Refinement counts (comma separated)")->delimiter(',');
  run->add_option("--pc", pcs, "Preconditioners: al, gmg-al, gmg-vanka, lu")
      ->delimiter(',')
      ->check(CLI::IsMember({"al", "gmg-al", "gmg-vanka", "lu"}));
  run->add_option("--alpha", alpha, "AL scaling (default: 10 for Picard, 0.1 for Newton)");
  run->add_option("--gamma", gamma, "Augmentation parameter (default: problem value)");
  run->add_option("--out", out, "Output directory");
  run->add_flag("--no-timing", no_timing, "Leave wall_s empty for reproducible files");
  run->add_option("--max-outer", max_outer, "Outer iteration limit");
  run->add_option("--star-damping", star_damping, "Star patch damping in the AL smoother");
  run->add_option("--chebyshev-scale", chebyshev_scale, "omega * lambda_max of the smoother wrapper");
  run->add_option("--schur-sign", schur_sign, "Sign of the potential block in the AL smoother");
  run->add_option("--flux-solver", flux_solver, "Flux solves for --pc al: cholesky, lu, gmg");

  auto *table = app.add_subcommand("table", "Render paper-style tables from a results CSV");
  std::string csv;
  table->add_option("csv", csv, "CSV written by 'osm run'")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*run)
    {
      osm::ExperimentConfig config;
      config.name = experiment;
      config.ks = ks;
      config.ms = ms;
      for (const auto &p : pcs)
      {
        config.pcs.push_back(osm::parse_preconditioner(p));
      }
      if (alpha >= 0.0)
      {
        config.alpha = alpha;
      }
      config.gamma = gamma;
      config.record_wall = !no_timing;
      if (max_outer > 0)
      {
        config.max_outer = max_outer;
      }
      if (star_damping > 0.0)
      {
        config.star_damping = star_damping;
      }
      if (chebyshev_scale > 0.0)
      {
        config.chebyshev_scale = chebyshev_scale;
      }
      if (schur_sign != 0.0)
      {
        config.schur_sign = schur_sign;
      }
      if (!flux_solver.empty())
      {
        config.al_flux_solver = parse_flux_solver(flux_solver);
      }
      const auto rows = osm::run_experiment(config, out);
      std::cout << osm::render_table(rows);
      std::cout << "wrote " << out << "/" << experiment << ".csv\n";
    }
    else if (*table)
    {
      std::ifstream in(csv);
      std::cout << osm::render_table(osm::read_csv(in));
    }
  }
  catch (const osm::Error &e)
  {
    std::cerr << "osm: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
