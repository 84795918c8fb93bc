#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osm/driver/nonlinear.hpp"

namespace osm
{

struct ExperimentConfig
{
  /// "mms2d-picard", "mms2d-newton" or "airway2d".
  std::string name;
  std::vector<int> ks{1};
  std::vector<int> ms{1};
  /// Empty selects the experiment's default set.
  std::vector<PreconditionerKind> pcs;
  std::optional<double> alpha;
  /// Non-positive keeps the problem's value.
  double gamma = 0.0;
  std::optional<int> max_outer;
  std::optional<double> star_damping;
  std::optional<double> chebyshev_scale;
  std::optional<double> schur_sign;
  std::optional<FluxSolverKind> al_flux_solver;
  /// Leave wall_s empty so reruns produce identical files.
  bool record_wall = true;
  /// Worker count for independent grid cells; 0 reads OSM_THREADS (default 1).
  int workers = 0;
};

/// One (m, k, preconditioner) cell of an experiment grid.
struct CellResult
{
  std::string experiment;
  int m = 0;
  int k = 0;
  std::string pc;
  double mean_krylov = 0.0;
  int outer_iters = 0;
  /// NaN when no exact solution is available.
  double err_j = 0.0;
  double err_mu = 0.0;
  double mass_avg_resid = 0.0;
  double eos_resid = 0.0;
  /// Negative when not recorded.
  double wall_s = -1.0;
  bool converged = false;
  std::vector<int> krylov_counts;
  std::map<std::string, std::string> metadata;
};

std::vector<std::string> experiment_names();
/// Nonlinear configuration used for one cell.
NonlinearConfig experiment_config(const ExperimentConfig &config, PreconditionerKind pc);
std::vector<PreconditionerKind> experiment_preconditioners(const ExperimentConfig &config);

/// Runs one grid cell.
CellResult run_cell(const ExperimentConfig &config, int m, int k, PreconditionerKind pc);

/// Runs the grid in (m, k, pc) order; cells may run concurrently, results keep grid order.
std::vector<CellResult> run_experiment(const ExperimentConfig &config);

/// Runs the grid and writes <out>/<name>.csv and <out>/<name>.txt.
std::vector<CellResult> run_experiment(const ExperimentConfig &config, const std::string &out_dir);

void write_csv(std::ostream &os, const std::vector<CellResult> &rows);
std::vector<CellResult> read_csv(std::istream &is);

/// Text table per experiment: rows m, columns k, cells "mean/mean/... (outer)".
std::string render_table(const std::vector<CellResult> &rows);

}  // namespace osm
