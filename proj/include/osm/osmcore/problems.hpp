#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "osm/meshkit/mesh.hpp"
#include "osm/osmcore/mixture.hpp"

namespace osm
{

/// Exact solution used for the convergence and preconditioner studies on the unit square.
///
/// c1 = K1 + k1, c2 = K1 - k1, c3 = K2 + k2, c4 = K2 - k2 with
/// k1 = exp(8xy(1-x)(1-y))/2 and k2 = sin(pi x) sin(pi y)/2, so c_T = 2(K1 + K2).
class ManufacturedCase
{
public:
  ManufacturedCase();

  const MixtureSpec &spec() const { return spec_; }
  double big_k1() const { return 1.0; }
  double big_k2() const { return 1.0; }
  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  /// Bulk momentum rho v_bulk (constant).
  Point bulk_momentum() const { return Point(0.0, 1.0); }
  double pressure() const { return 2.0 * (big_k1() + big_k2()) * spec_.rt; }

  double k1(const Point &x) const;
  double k2(const Point &x) const;

  Eigen::VectorXd concentrations(const Point &x) const;
  /// Gradients of the concentrations, one row per species.
  Eigen::Matrix<double, Eigen::Dynamic, 2> concentration_gradients(const Point &x) const;
  Eigen::VectorXd concentration_laplacians(const Point &x) const;

  Eigen::VectorXd potentials(const Point &x) const;
  /// Species velocities v_i, one row per species.
  Eigen::Matrix<double, Eigen::Dynamic, 2> velocities(const Point &x) const;
  /// Mass fluxes J_i = M_i c_i v_i.
  Point flux(int i, const Point &x) const;
  double potential(int i, const Point &x) const;
  /// r_i = div(c_i v_i), differentiated by hand.
  double source(int i, const Point &x) const;

private:
  MixtureSpec spec_;
  double beta1_;
  double beta2_;
};

/// Everything a solver needs to pose one stationary problem on a rectangle.
struct ProblemData
{
  std::string name;
  MixtureSpec spec;
  int nx = 2;
  int ny = 2;
  double width = 1.0;
  double height = 1.0;
  double length_ref = 1.0;
  /// Constant pressure p enforced through c_T RT = p.
  double pressure = 1.0;
  /// Flux normal conditions are essential on these boundaries (per species).
  std::vector<std::vector<BoundaryTag>> neumann_tags;
  /// Prescribed normal mass flux on essential boundaries (zero when empty).
  std::vector<std::function<Point(const Point &)>> boundary_flux;
  /// Potential values on the remaining boundaries.
  std::vector<std::function<double(const Point &)>> boundary_potential;
  std::vector<std::function<double(const Point &)>> sources;
  std::function<Point(const Point &)> bulk_momentum;
  /// Initial concentrations for Picard (satisfying the equation of state).
  std::function<Eigen::VectorXd(const Point &)> picard_initial;
  /// Initial mole fractions for Newton (rescaled to the problem pressure pointwise).
  std::function<Eigen::VectorXd(const Point &)> newton_initial_fractions;
  /// Present for manufactured problems.
  std::optional<ManufacturedCase> exact;
  /// Free-form provenance recorded with experiment output.
  std::map<std::string, std::string> metadata;

  Mesh coarse_mesh() const { return build_rectangle_mesh(nx, ny, width, height); }
};

/// Manufactured problem: full Dirichlet potential data from the exact solution.
ProblemData manufactured_problem();

/// Tabulated composition and species data of the airway proxy (SI units).
struct AirwayData
{
  static constexpr double gas_constant = 8.314462618;
  static constexpr double temperature = 298.0;
  static constexpr double pressure = 101325.0;
  Eigen::Vector4d trachea{0.7409, 0.1967, 0.0004, 0.0620};
  Eigen::Vector4d bronchi{0.7490, 0.1360, 0.0530, 0.0620};
  Eigen::Vector4d molar_masses{0.028, 0.032, 0.044, 0.018};
  Eigen::Matrix4d diffusivities;
  std::vector<std::string> species{"N2", "O2", "CO2", "H2O"};

  AirwayData();
  double rt() const { return gas_constant * temperature; }
  /// c_i = chi_i p / (RT) in mol/m^3.
  Eigen::Vector4d concentrations(const Eigen::Vector4d &chi) const { return chi * pressure / rt(); }
};

/// Airway proxy on the unit square: composition given on the left (trachea) and right
/// (bronchi) edges, impermeable top and bottom, no bulk flow, no reactions. Nondimensional:
/// RT = p = 1, diffusivities scaled by their maximum, molar masses by theirs.
ProblemData airway_problem();

/// Registry: "mms2d", "airway2d"; anything else is invalid-argument.
ProblemData make_problem(const std::string &name);
std::vector<std::string> problem_names();

}  // namespace osm
