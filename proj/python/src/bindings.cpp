#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "osm/driver/experiment.hpp"
#include "osm/error.hpp"

namespace py = pybind11;

namespace
{

std::vector<osm::CellResult> run(const std::string &name, const std::vector<int> &ks,
                                 const std::vector<int> &ms, const std::vector<std::string> &pcs,
                                 std::optional<double> alpha, double gamma,
                                 std::optional<int> max_outer, bool record_wall)
{
  osm::ExperimentConfig config;
  config.name = name;
  config.ks = ks;
  config.ms = ms;
  for (const auto &pc : pcs)
  {
    config.pcs.push_back(osm::parse_preconditioner(pc));
  }
  config.alpha = alpha;
  config.gamma = gamma;
  config.max_outer = max_outer;
  config.record_wall = record_wall;
  py::gil_scoped_release release;
  return osm::run_experiment(config);
}

void write_csv(const std::string &path, const std::vector<osm::CellResult> &rows)
{
  std::ofstream os(path);
  if (!os)
  {
    throw osm::Error(osm::ErrorCode::invalid_argument, "cannot open '" + path + "' for writing");
  }
  osm::write_csv(os, rows);
}

std::vector<osm::CellResult> read_csv(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw osm::Error(osm::ErrorCode::invalid_argument, "cannot open '" + path + "'");
  }
  return osm::read_csv(is);
}

}  // namespace

PYBIND11_MODULE(_osm, m)
{
  m.doc() = "Mixed finite element solver and preconditioner lab for multicomponent diffusion";

  py::register_exception<osm::Error>(m, "Error", PyExc_RuntimeError);

  py::class_<osm::CellResult>(m, "CellResult")
      .def_readonly("experiment", &osm::CellResult::experiment)
      .def_readonly("m", &osm::CellResult::m)
      .def_readonly("k", &osm::CellResult::k)
      .def_readonly("pc", &osm::CellResult::pc)
      .def_readonly("mean_krylov", &osm::CellResult::mean_krylov)
      .def_readonly("outer_iters", &osm::CellResult::outer_iters)
      .def_readonly("err_j", &osm::CellResult::err_j)
      .def_readonly("err_mu", &osm::CellResult::err_mu)
      .def_readonly("mass_avg_resid", &osm::CellResult::mass_avg_resid)
      .def_readonly("eos_resid", &osm::CellResult::eos_resid)
      .def_readonly("wall_s", &osm::CellResult::wall_s)
      .def_readonly("converged", &osm::CellResult::converged)
      .def_readonly("krylov_counts", &osm::CellResult::krylov_counts)
      .def_readonly("metadata", &osm::CellResult::metadata)
      .def("__repr__", [](const osm::CellResult &r) {
        return "<CellResult " + r.experiment + " m=" + std::to_string(r.m) +
               " k=" + std::to_string(r.k) + " pc=" + r.pc +
               " mean_krylov=" + std::to_string(r.mean_krylov) +
               " outer=" + std::to_string(r.outer_iters) + ">";
      });

  m.def("experiment_names", &osm::experiment_names);
  m.def("run", &run, py::arg("name"), py::arg("ks") = std::vector<int>{1},
        py::arg("ms") = std::vector<int>{1}, py::arg("pcs") = std::vector<std::string>{},
        py::arg("alpha") = std::nullopt, py::arg("gamma") = 0.0,
        py::arg("max_outer") = std::nullopt, py::arg("record_wall") = true,
        "Runs an experiment grid in (m, k, pc) order.");
  m.def("render_table", &osm::render_table, py::arg("rows"));
  m.def("write_csv", &write_csv, py::arg("path"), py::arg("rows"));
  m.def("read_csv", &read_csv, py::arg("path"));
}
