#include "osm/driver/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "osm/driver/errors.hpp"
#include "osm/error.hpp"

namespace osm
{

namespace
{

const std::vector<std::string> kColumns = {
    "experiment", "m", "k", "pc", "mean_krylov", "outer_iters", "err_J_l2", "err_mu_l2",
    "mass_avg_resid", "eos_resid", "wall_s", "converged", "krylov_counts"};

const std::vector<std::string> kMetadataColumns = {
    "method", "alpha", "gamma", "flux_solver", "mesh_family", "quad_degree", "star_damping",
    "chebyshev_scale", "power_iterations", "schur_sign", "coarse_operators", "initial_guess",
    "seed", "unknowns", "min_mole_fraction", "max_mole_fraction", "message"};

bool is_picard(const std::string &name)
{
  return name == "mms2d-picard";
}

std::string problem_for(const std::string &name)
{
  return name == "airway2d" ? "airway2d" : "mms2d";
}

std::string format_double(double v, const char *fmt = "%.6e")
{
  if (std::isnan(v))
  {
    return "";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string flux_solver_name(FluxSolverKind k)
{
  switch (k)
  {
    case FluxSolverKind::cholesky:
      return "cholesky";
    case FluxSolverKind::lu:
      return "lu";
    case FluxSolverKind::gmg:
      return "gmg";
  }
  return "unknown";
}

int worker_count(const ExperimentConfig &config, std::size_t cells)
{
  int n = config.workers;
  if (n <= 0)
  {
    n = 1;
    if (const char *env = std::getenv("OSM_THREADS"))
    {
      n = std::max(1, std::atoi(env));
    }
  }
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(cells, 1)));
}

std::vector<std::string> split(const std::string &s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
  {
    out.push_back(cur);
  }
  if (!s.empty() && s.back() == sep)
  {
    out.emplace_back();
  }
  return out;
}

double parse_double(const std::string &s)
{
  return s.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
}

}  // namespace

std::vector<std::string> experiment_names()
{
  return {"mms2d-picard", "mms2d-newton", "airway2d"};
}

std::vector<PreconditionerKind> experiment_preconditioners(const ExperimentConfig &config)
{
  if (!config.pcs.empty())
  {
    return config.pcs;
  }
  if (is_picard(config.name))
  {
    return {PreconditionerKind::al};
  }
  if (config.name == "mms2d-newton")
  {
    return {PreconditionerKind::al, PreconditionerKind::gmg_al, PreconditionerKind::gmg_vanka};
  }
  return {PreconditionerKind::gmg_al};
}

NonlinearConfig experiment_config(const ExperimentConfig &config, PreconditionerKind pc)
{
  const auto names = experiment_names();
  OSM_REQUIRE(std::find(names.begin(), names.end(), config.name) != names.end(),
              ErrorCode::invalid_argument, "unknown experiment '" + config.name + "'");
  NonlinearConfig c = is_picard(config.name) ? NonlinearConfig::picard_defaults()
                                             : NonlinearConfig::newton_defaults();
  c.preconditioner = pc;
  if (config.alpha)
  {
    c.alpha = *config.alpha;
  }
  c.gamma = config.gamma;
  if (config.max_outer)
  {
    c.max_iterations = *config.max_outer;
  }
  if (config.star_damping)
  {
    c.monolithic.star_damping = *config.star_damping;
  }
  if (config.chebyshev_scale)
  {
    c.monolithic.chebyshev_scale = *config.chebyshev_scale;
  }
  if (config.schur_sign)
  {
    c.monolithic.schur_sign = *config.schur_sign;
  }
  if (config.al_flux_solver)
  {
    c.al_flux_solver = *config.al_flux_solver;
  }
  return c;
}

CellResult run_cell(const ExperimentConfig &config, int m, int k, PreconditionerKind pc)
{
  const NonlinearConfig nc = experiment_config(config, pc);
  const ProblemData problem = with_gamma(make_problem(problem_for(config.name)), config.gamma);
  const bool needs_levels = pc != PreconditionerKind::lu &&
                            !(pc == PreconditionerKind::al && nc.al_flux_solver != FluxSolverKind::gmg);
  const Discretization disc = build_discretization(problem, m, k, needs_levels);
  const FieldLayout &layout = disc.fine();

  const bool picard = nc.method == NonlinearMethod::picard;
  Vector state = picard ? picard_initial_state(layout, problem) : newton_initial_state(layout, problem);
  const NonlinearResult res = picard ? run_picard(problem, disc, nc, state)
                                     : run_newton(problem, disc, nc, state);

  CellResult row;
  row.experiment = config.name;
  row.m = m;
  row.k = k;
  row.pc = to_string(pc);
  row.mean_krylov = res.mean_krylov();
  row.outer_iters = res.outer_iterations();
  row.converged = res.converged;
  for (const auto &s : res.steps)
  {
    row.krylov_counts.push_back(s.krylov_iterations);
  }
  row.err_j = std::numeric_limits<double>::quiet_NaN();
  row.err_mu = std::numeric_limits<double>::quiet_NaN();
  if (problem.exact)
  {
    const FieldErrors e = measure_errors(layout, state, *problem.exact);
    row.err_j = e.flux;
    row.err_mu = e.potential;
  }
  row.mass_avg_resid = std::numeric_limits<double>::quiet_NaN();
  row.eos_resid = std::numeric_limits<double>::quiet_NaN();
  Diagnostics diag;
  bool have_diag = false;
  try
  {
    diag = physics_diagnostics(layout, problem, state);
    have_diag = true;
    row.mass_avg_resid = diag.mass_average;
    row.eos_resid = diag.equation_of_state;
  }
  catch (const Error &)
  {
  }
  row.wall_s = config.record_wall ? res.wall_seconds : -1.0;

  auto &md = row.metadata;
  md["method"] = picard ? "picard" : "newton";
  md["alpha"] = format_double(pc == PreconditionerKind::gmg_vanka ? 0.0 : nc.alpha, "%g");
  md["gamma"] = format_double(problem.spec.gamma, "%g");
  md["flux_solver"] = pc == PreconditionerKind::al ? flux_solver_name(nc.al_flux_solver) : "";
  md["mesh_family"] = kMeshFamily;
  md["quad_degree"] = std::to_string(2 * k + 2);
  md["star_damping"] = pc == PreconditionerKind::gmg_al ? format_double(nc.monolithic.star_damping, "%g")
                       : (pc == PreconditionerKind::al && nc.al_flux_solver == FluxSolverKind::gmg)
                           ? format_double(nc.flux_gmg.star_damping, "%g")
                           : "";
  const bool mono = pc == PreconditionerKind::gmg_al || pc == PreconditionerKind::gmg_vanka;
  md["chebyshev_scale"] = mono ? format_double(nc.monolithic.chebyshev_scale, "%g") : "";
  md["power_iterations"] = mono ? std::to_string(nc.monolithic.power_iterations) : "";
  md["schur_sign"] = pc == PreconditionerKind::gmg_al ? format_double(nc.monolithic.schur_sign, "%+g") : "";
  md["coarse_operators"] = needs_levels ? "rediscretised" : "";
  md["initial_guess"] = problem.metadata.count(picard ? "picard_initial" : "newton_initial")
                            ? problem.metadata.at(picard ? "picard_initial" : "newton_initial")
                            : "";
  md["seed"] = "24301";
  md["unknowns"] = std::to_string(layout.size());
  md["min_mole_fraction"] = have_diag ? format_double(diag.min_mole_fraction) : "";
  md["max_mole_fraction"] = have_diag ? format_double(diag.max_mole_fraction) : "";
  md["message"] = res.message;
  return row;
}

std::vector<CellResult> run_experiment(const ExperimentConfig &config)
{
  const auto names = experiment_names();
  OSM_REQUIRE(std::find(names.begin(), names.end(), config.name) != names.end(),
              ErrorCode::invalid_argument, "unknown experiment '" + config.name + "'");
  OSM_REQUIRE(!config.ks.empty() && !config.ms.empty(), ErrorCode::invalid_argument,
              "empty experiment grid");
  struct Task
  {
    int m;
    int k;
    PreconditionerKind pc;
  };
  std::vector<Task> tasks;
  for (int m : config.ms)
  {
    for (int k : config.ks)
    {
      for (PreconditionerKind pc : experiment_preconditioners(config))
      {
        tasks.push_back({m, k, pc});
      }
    }
  }
  std::vector<CellResult> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
    {
      try
      {
        rows[i] = run_cell(config, tasks[i].m, tasks[i].k, tasks[i].pc);
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = worker_count(config, tasks.size());
  if (workers <= 1)
  {
    work();
  }
  else
  {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
    {
      pool.emplace_back(work);
    }
    for (auto &t : pool)
    {
      t.join();
    }
  }
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
  return rows;
}

std::vector<CellResult> run_experiment(const ExperimentConfig &config, const std::string &out_dir)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const fs::path csv = fs::path(out_dir) / (config.name + ".csv");
  const fs::path txt = fs::path(out_dir) / (config.name + ".txt");
  {
    // Fail before the (possibly long) run if the destination is unusable.
    std::ofstream probe(csv);
    OSM_REQUIRE(probe.good(), ErrorCode::invalid_argument, "cannot write to " + csv.string());
  }
  const auto rows = run_experiment(config);
  std::ofstream out(csv);
  write_csv(out, rows);
  OSM_REQUIRE(out.good(), ErrorCode::invalid_argument, "failed writing " + csv.string());
  std::ofstream table(txt);
  table << render_table(rows);
  return rows;
}

void write_csv(std::ostream &os, const std::vector<CellResult> &rows)
{
  for (std::size_t i = 0; i < kColumns.size(); ++i)
  {
    os << (i ? "," : "") << kColumns[i];
  }
  for (const auto &c : kMetadataColumns)
  {
    os << ',' << c;
  }
  os << '\n';
  for (const CellResult &r : rows)
  {
    std::string counts;
    for (std::size_t i = 0; i < r.krylov_counts.size(); ++i)
    {
      counts += (i ? ";" : "") + std::to_string(r.krylov_counts[i]);
    }
    os << r.experiment << ',' << r.m << ',' << r.k << ',' << r.pc << ','
       << format_double(r.mean_krylov, "%.2f") << ',' << r.outer_iters << ','
       << format_double(r.err_j) << ',' << format_double(r.err_mu) << ','
       << format_double(r.mass_avg_resid) << ',' << format_double(r.eos_resid) << ','
       << (r.wall_s >= 0.0 ? format_double(r.wall_s, "%.3f") : "") << ','
       << (r.converged ? "true" : "false") << ',' << counts;
    for (const auto &c : kMetadataColumns)
    {
      auto it = r.metadata.find(c);
      std::string v = it == r.metadata.end() ? "" : it->second;
      std::replace(v.begin(), v.end(), ',', ';');
      std::replace(v.begin(), v.end(), '\n', ' ');
      os << ',' << v;
    }
    os << '\n';
  }
}

std::vector<CellResult> read_csv(std::istream &is)
{
  std::string line;
  OSM_REQUIRE(static_cast<bool>(std::getline(is, line)), ErrorCode::invalid_argument, "empty CSV");
  const auto header = split(line, ',');
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i)
  {
    col[header[i]] = i;
  }
  for (const char *required : {"experiment", "m", "k", "pc", "mean_krylov", "outer_iters"})
  {
    OSM_REQUIRE(col.count(required), ErrorCode::invalid_argument,
                std::string("CSV lacks column '") + required + "'");
  }
  std::vector<CellResult> rows;
  while (std::getline(is, line))
  {
    if (line.empty())
    {
      continue;
    }
    auto f = split(line, ',');
    f.resize(header.size());
    auto get = [&](const std::string &name) -> std::string {
      auto it = col.find(name);
      return it == col.end() ? std::string() : f[it->second];
    };
    CellResult r;
    try
    {
      r.experiment = get("experiment");
      r.m = std::stoi(get("m"));
      r.k = std::stoi(get("k"));
      r.pc = get("pc");
      r.mean_krylov = parse_double(get("mean_krylov"));
      r.outer_iters = std::stoi(get("outer_iters"));
      r.err_j = parse_double(get("err_J_l2"));
      r.err_mu = parse_double(get("err_mu_l2"));
      r.mass_avg_resid = parse_double(get("mass_avg_resid"));
      r.eos_resid = parse_double(get("eos_resid"));
      const std::string w = get("wall_s");
      r.wall_s = w.empty() ? -1.0 : std::stod(w);
      r.converged = get("converged") == "true";
      for (const auto &c : split(get("krylov_counts"), ';'))
      {
        if (!c.empty())
        {
          r.krylov_counts.push_back(std::stoi(c));
        }
      }
    }
    catch (const std::logic_error &)
    {
      throw Error(ErrorCode::invalid_argument, "malformed CSV row: " + line);
    }
    for (const auto &c : kMetadataColumns)
    {
      if (col.count(c))
      {
        r.metadata[c] = get(c);
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_table(const std::vector<CellResult> &rows)
{
  std::ostringstream os;
  std::vector<std::string> experiments;
  for (const auto &r : rows)
  {
    if (std::find(experiments.begin(), experiments.end(), r.experiment) == experiments.end())
    {
      experiments.push_back(r.experiment);
    }
  }
  for (const auto &name : experiments)
  {
    std::set<int> ms;
    std::set<int> ks;
    std::vector<std::string> pcs;
    for (const auto &r : rows)
    {
      if (r.experiment != name)
      {
        continue;
      }
      ms.insert(r.m);
      ks.insert(r.k);
      if (std::find(pcs.begin(), pcs.end(), r.pc) == pcs.end())
      {
        pcs.push_back(r.pc);
      }
    }
    std::string pcs_label;
    for (std::size_t i = 0; i < pcs.size(); ++i)
    {
      pcs_label += (i ? "/" : "") + pcs[i];
    }
    os << name << ": mean Krylov iterations per outer step (" << pcs_label
       << "), outer iterations in brackets\n";
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> head{"m \\ k"};
    for (int k : ks)
    {
      head.push_back(std::to_string(k));
    }
    cells.push_back(head);
    for (int m : ms)
    {
      std::vector<std::string> line{std::to_string(m)};
      for (int k : ks)
      {
        std::string cell;
        std::vector<int> outer;
        for (const auto &pc : pcs)
        {
          auto it = std::find_if(rows.begin(), rows.end(), [&](const CellResult &r) {
            return r.experiment == name && r.m == m && r.k == k && r.pc == pc;
          });
          cell += cell.empty() && &pc == &pcs.front() ? "" : "/";
          if (it == rows.end())
          {
            cell += "---";
            continue;
          }
          cell += format_double(it->mean_krylov, "%.2f");
          if (!it->converged)
          {
            cell += "*";
          }
          if (std::find(outer.begin(), outer.end(), it->outer_iters) == outer.end())
          {
            outer.push_back(it->outer_iters);
          }
        }
        std::string bracket;
        for (std::size_t i = 0; i < outer.size(); ++i)
        {
          bracket += (i ? "," : "") + std::to_string(outer[i]);
        }
        line.push_back(cell + " (" + bracket + ")");
      }
      cells.push_back(line);
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto &line : cells)
    {
      for (std::size_t j = 0; j < line.size(); ++j)
      {
        width[j] = std::max(width[j], line[j].size());
      }
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
      for (std::size_t j = 0; j < cells[i].size(); ++j)
      {
        os << (j ? " | " : "") << std::setw(static_cast<int>(width[j])) << cells[i][j];
      }
      os << '\n';
      if (i == 0)
      {
        std::size_t total = 0;
        for (auto w : width)
        {
          total += w;
        }
        os << std::string(total + 3 * (width.size() - 1), '-') << '\n';
      }
    }
    os << "(* = outer iteration did not converge)\n\n";
  }
  return os.str();
}

}  // namespace osm
