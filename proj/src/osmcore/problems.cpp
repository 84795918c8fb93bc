#include "osm/osmcore/problems.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "osm/elements/quadrature.hpp"
#include "osm/error.hpp"

namespace osm
{

namespace
{

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd mms_diffusivities()
{
  Eigen::MatrixXd d(4, 4);
  d << 0, 2, 1, 1,
       2, 0, 1, 1,
       1, 1, 0, 3,
       1, 1, 3, 0;
  return d;
}

}  // namespace

ManufacturedCase::ManufacturedCase()
  : spec_(make_mixture(Eigen::VectorXd::Ones(4), mms_diffusivities(), 1.0, 1.0, 1.0))
{
  const Eigen::MatrixXd &d = spec_.diffusivities;
  // The construction needs one cross-pair diffusivity shared by all four cross pairs.
  OSM_REQUIRE(d(0, 2) == d(1, 2) && d(0, 2) == d(0, 3) && d(0, 2) == d(1, 3),
              ErrorCode::invalid_argument, "cross-pair diffusivities must coincide");
  beta1_ = 2.0 * big_k1() * (1.0 / d(0, 1) + 1.0 / d(0, 3));
  beta2_ = 2.0 * big_k2() * (1.0 / d(2, 3) + 1.0 / d(0, 3));
}

double ManufacturedCase::k1(const Point &x) const
{
  const double g = x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y());
  return 0.5 * std::exp(8.0 * g);
}

double ManufacturedCase::k2(const Point &x) const
{
  return 0.5 * std::sin(kPi * x.x()) * std::sin(kPi * x.y());
}

Eigen::VectorXd ManufacturedCase::concentrations(const Point &x) const
{
  const double a = k1(x);
  const double b = k2(x);
  Eigen::VectorXd c(4);
  c << big_k1() + a, big_k1() - a, big_k2() + b, big_k2() - b;
  return c;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> ManufacturedCase::concentration_gradients(const Point &x) const
{
  const double xx = x.x(), yy = x.y();
  const double gx = (1.0 - 2.0 * xx) * yy * (1.0 - yy);
  const double gy = xx * (1.0 - xx) * (1.0 - 2.0 * yy);
  const double a = k1(x);
  const Point g1 = 8.0 * a * Point(gx, gy);
  const Point g2 = 0.5 * kPi *
                   Point(std::cos(kPi * xx) * std::sin(kPi * yy), std::sin(kPi * xx) * std::cos(kPi * yy));
  Eigen::Matrix<double, Eigen::Dynamic, 2> out(4, 2);
  out.row(0) = g1.transpose();
  out.row(1) = -g1.transpose();
  out.row(2) = g2.transpose();
  out.row(3) = -g2.transpose();
  return out;
}

Eigen::VectorXd ManufacturedCase::concentration_laplacians(const Point &x) const
{
  const double xx = x.x(), yy = x.y();
  const double bx = xx * (1.0 - xx);
  const double by = yy * (1.0 - yy);
  const double gx = (1.0 - 2.0 * xx) * by;
  const double gy = bx * (1.0 - 2.0 * yy);
  const double lap_g = -2.0 * (bx + by);
  const double l1 = 8.0 * k1(x) * (lap_g + 8.0 * (gx * gx + gy * gy));
  const double l2 = -2.0 * kPi * kPi * k2(x);
  Eigen::VectorXd out(4);
  out << l1, -l1, l2, -l2;
  return out;
}

Eigen::VectorXd ManufacturedCase::potentials(const Point &x) const
{
  return potentials_from_concentrations(concentrations(x), spec_);
}

Eigen::Matrix<double, Eigen::Dynamic, 2> ManufacturedCase::velocities(const Point &x) const
{
  const Eigen::VectorXd c = concentrations(x);
  const auto grad = concentration_gradients(x);
  const double ct = c.sum();
  const Point mb = bulk_momentum();
  Eigen::Matrix<double, Eigen::Dynamic, 2> v(4, 2);
  for (int i = 0; i < 4; ++i)
  {
    const double beta = i < 2 ? beta1_ : beta2_;
    v.row(i) = -(ct / beta) * grad.row(i) / c[i] + mb.transpose() / ct;
  }
  return v;
}

Point ManufacturedCase::flux(int i, const Point &x) const
{
  const Eigen::VectorXd c = concentrations(x);
  const auto grad = concentration_gradients(x);
  const double ct = c.sum();
  const double beta = i < 2 ? beta1_ : beta2_;
  const Point g = grad.row(i).transpose();
  return spec_.molar_masses[i] * (-(ct / beta) * g + c[i] * bulk_momentum() / ct);
}

double ManufacturedCase::potential(int i, const Point &x) const
{
  return potentials(x)[i];
}

double ManufacturedCase::source(int i, const Point &x) const
{
  const Eigen::VectorXd c = concentrations(x);
  const double ct = c.sum();
  const double beta = i < 2 ? beta1_ : beta2_;
  const Point g = concentration_gradients(x).row(i).transpose();
  // c_T is constant, so div(c_i v_i) = -(c_T/beta) lap c_i + (rho v_bulk) . grad c_i / c_T.
  return -(ct / beta) * concentration_laplacians(x)[i] + bulk_momentum().dot(g) / ct;
}

ProblemData manufactured_problem()
{
  ProblemData p;
  ManufacturedCase mms;
  p.name = "mms2d";
  p.spec = mms.spec();
  p.pressure = mms.pressure();
  p.neumann_tags.assign(4, {});
  p.boundary_flux.assign(4, nullptr);
  for (int i = 0; i < 4; ++i)
  {
    p.boundary_potential.push_back([mms, i](const Point &x) { return mms.potential(i, x); });
    p.sources.push_back([mms, i](const Point &x) { return mms.source(i, x); });
  }
  const Point mb = mms.bulk_momentum();
  p.bulk_momentum = [mb](const Point &) { return mb; };

  // Spatial means of the exact concentrations; their sum is c_T, so the guess is consistent
  // with the equation of state.
  const LineRule line = gauss_legendre(24);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  for (std::size_t i = 0; i < line.points.size(); ++i)
  {
    for (std::size_t j = 0; j < line.points.size(); ++j)
    {
      mean += line.weights[i] * line.weights[j] *
              mms.concentrations(Point(line.points[i], line.points[j]));
    }
  }
  mean = normalize_concentrations(mean, p.pressure, p.spec);
  p.picard_initial = [mean](const Point &) { return mean; };
  p.newton_initial_fractions = [](const Point &) { return Eigen::VectorXd::Constant(4, 0.25).eval(); };
  p.exact = mms;
  p.metadata["picard_initial"] = "spatial mean of exact concentrations";
  p.metadata["newton_initial"] = "equimolar";
  return p;
}

AirwayData::AirwayData()
{
  diffusivities << 0, 21.87, 16.63, 23.15,
                   21.87, 0, 16.40, 22.85,
                   16.63, 16.40, 0, 16.02,
                   23.15, 22.85, 16.02, 0;
  diffusivities *= 1e-6;
}

ProblemData airway_problem()
{
  const AirwayData data;
  ProblemData p;
  p.name = "airway2d";
  const double dmax = data.diffusivities.maxCoeff();
  const double mmax = data.molar_masses.maxCoeff();
  p.spec = make_mixture(data.molar_masses / mmax, data.diffusivities / dmax, 1.0, 1.0, 1.0);
  p.pressure = 1.0;
  // Essential no-flux walls on top and bottom for every species.
  p.neumann_tags.assign(4, {BoundaryTag::bottom, BoundaryTag::top});
  p.boundary_flux.assign(4, nullptr);
  const Eigen::Vector4d left = data.trachea.array().log();
  const Eigen::Vector4d right = data.bronchi.array().log();
  for (int i = 0; i < 4; ++i)
  {
    const double a = left[i];
    const double b = right[i];
    p.boundary_potential.push_back([a, b](const Point &x) { return x.x() < 0.5 ? a : b; });
    p.sources.push_back([](const Point &) { return 0.0; });
  }
  p.bulk_momentum = [](const Point &) { return Point(0.0, 0.0); };
  // Boundary compositions blended linearly across the channel; c_T RT = p holds pointwise.
  const Eigen::VectorXd trachea = data.trachea / data.trachea.sum();
  const Eigen::VectorXd bronchi = data.bronchi / data.bronchi.sum();
  p.newton_initial_fractions = [trachea, bronchi](const Point &x) {
    return ((1.0 - x.x()) * trachea + x.x() * bronchi).eval();
  };
  p.picard_initial = p.newton_initial_fractions;

  std::ostringstream scale;
  scale.precision(17);
  scale << "length=1 concentration=p/RT=" << data.pressure / data.rt() << " mol/m^3"
        << " diffusivity=" << dmax << " m^2/s molar_mass=" << mmax << " kg/mol";
  p.metadata["nondimensionalisation"] = scale.str();
  p.metadata["newton_initial"] = "boundary mole fractions blended linearly in x";
  p.metadata["picard_initial"] = p.metadata["newton_initial"];
  p.metadata["geometry"] = "unit square: trachea=left bronchi=right walls=top,bottom";
  return p;
}

ProblemData make_problem(const std::string &name)
{
  if (name == "mms2d")
  {
    return manufactured_problem();
  }
  if (name == "airway2d")
  {
    return airway_problem();
  }
  throw Error(ErrorCode::invalid_argument, "unknown problem '" + name + "'");
}

std::vector<std::string> problem_names()
{
  return {"mms2d", "airway2d"};
}

}  // namespace osm
