#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "osm/error.hpp"
#include "osm/osmcore/mixture.hpp"
#include "osm/osmcore/problems.hpp"

namespace
{

using namespace osm;

MixtureSpec binary()
{
  Eigen::MatrixXd d(2, 2);
  d << 0.0, 2.0, 2.0, 0.0;
  return make_mixture(Eigen::Vector2d(1.0, 1.0), d, 1.0, 1.0, 1.0);
}

Eigen::VectorXd random_state(std::mt19937_64 &rng, int n)
{
  std::uniform_real_distribution<double> u(0.05, 3.0);
  Eigen::VectorXd c(n);
  for (auto &x : c)
  {
    x = u(rng);
  }
  return c;
}

TEST(Mixture, OnsagerBinaryExample)
{
  const Eigen::MatrixXd m = onsager_matrix(Eigen::Vector2d(1.0, 1.0), binary());
  Eigen::Matrix2d expected;
  expected << 0.25, -0.25, -0.25, 0.25;
  EXPECT_LT((m - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Mixture, AugmentBinaryExample)
{
  const MixtureSpec spec = binary();
  const Eigen::Vector2d c(1.0, 1.0);
  const Eigen::MatrixXd mg = augment(onsager_matrix(c, spec), c, spec, 1.0);
  EXPECT_LT((mg - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((augment(onsager_matrix(c, spec), c, spec, 0.0) - onsager_matrix(c, spec)).norm(), 1e-15);
  EXPECT_THROW(augment(onsager_matrix(c, spec), c, spec, -1.0), Error);
  EXPECT_LT((flux_transport(mg, c, spec) - mg).norm(), 1e-15);
}

TEST(Mixture, OnsagerNullspaceAndDefiniteness)
{
  const ManufacturedCase mms;
  const MixtureSpec &spec = mms.spec();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial)
  {
    const Eigen::VectorXd c = random_state(rng, spec.n);
    const Eigen::MatrixXd m = onsager_matrix(c, spec);
    EXPECT_LT((m * Eigen::VectorXd::Ones(spec.n)).cwiseAbs().maxCoeff(), 1e-13);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
    EXPECT_GT(ev.minCoeff(), -1e-13);
    const Eigen::MatrixXd mg = augment(m, c, spec, 1.0);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mg).eigenvalues().minCoeff(), 0.0);
    // Congruence keeps the inertia.
    const Eigen::MatrixXd mt = flux_transport(mg, c, spec);
    EXPECT_LT((mt - mt.transpose()).cwiseAbs().maxCoeff(), 1e-14 * mt.cwiseAbs().maxCoeff());
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mt).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Mixture, TransportJetMatchesDirectFormAndDifferences)
{
  const ManufacturedCase mms;
  const MixtureSpec &spec = mms.spec();
  std::mt19937_64 rng(5);
  const Eigen::VectorXd c = random_state(rng, spec.n);
  const TransportJet jet = flux_transport_jet(c, spec, spec.gamma, true);
  const Eigen::MatrixXd direct = flux_transport(augment(onsager_matrix(c, spec), c, spec, spec.gamma), c, spec);
  EXPECT_LT((jet.value - direct).cwiseAbs().maxCoeff(), 1e-12 * direct.cwiseAbs().maxCoeff());
  const double h = 1e-6;
  for (int j = 0; j < spec.n; ++j)
  {
    Eigen::VectorXd cp = c;
    Eigen::VectorXd cm = c;
    cp[j] += h;
    cm[j] -= h;
    const Eigen::MatrixXd fd = (flux_transport_jet(cp, spec, spec.gamma, false).value -
                                flux_transport_jet(cm, spec, spec.gamma, false).value) /
                               (2.0 * h);
    EXPECT_LT((fd - jet.d_dc[j]).cwiseAbs().maxCoeff(), 1e-6 * (1.0 + fd.cwiseAbs().maxCoeff()));
  }
}

TEST(Mixture, PotentialConcentrationLaw)
{
  MixtureSpec spec = binary();
  EXPECT_NEAR(concentrations_from_potentials(Eigen::Vector2d::Zero(), spec)[0], 1.0, 1e-15);
  const Eigen::VectorXd c =
      concentrations_from_potentials(Eigen::Vector2d::Constant(std::log(2.0)), spec);
  EXPECT_NEAR(c[1], 2.0, 1e-14);
  const Eigen::Vector2d mu(0.3, -1.7);
  EXPECT_LT((potentials_from_concentrations(concentrations_from_potentials(mu, spec), spec) - mu)
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
  EXPECT_THROW(concentrations_from_potentials(Eigen::Vector2d(800.0, 0.0), spec), Error);
  EXPECT_THROW(potentials_from_concentrations(Eigen::Vector2d(1.0, 0.0), spec), Error);
}

TEST(Mixture, Normalisation)
{
  const ManufacturedCase mms;
  MixtureSpec spec = mms.spec();
  spec.rt = 1.0;
  EXPECT_LT((normalize_concentrations(Eigen::Vector4d::Ones(), 4.0, spec) - Eigen::Vector4d::Ones()).norm(), 1e-15);
  const Eigen::VectorXd two = normalize_concentrations(Eigen::Vector2d(1.0, 1.0), 4.0, binary());
  EXPECT_NEAR(two[0], 2.0, 1e-15);
  const Eigen::Vector4d c(0.1, 0.7, 2.0, 0.3);
  const Eigen::VectorXd scaled = normalize_concentrations(c, 10.0, spec);
  EXPECT_LT((scaled / scaled.sum() - c / c.sum()).norm(), 1e-15);
}

TEST(Mixture, ValidationRejectsBadSpecs)
{
  Eigen::MatrixXd d(2, 2);
  d << 0.0, 1.0, 2.0, 0.0;
  EXPECT_THROW(make_mixture(Eigen::Vector2d(1.0, 1.0), d, 1.0, 1.0, 1.0), Error);
  d << 0.0, -1.0, -1.0, 0.0;
  EXPECT_THROW(make_mixture(Eigen::Vector2d(1.0, 1.0), d, 1.0, 1.0, 1.0), Error);
  d << 0.0, 1.0, 1.0, 0.0;
  EXPECT_THROW(make_mixture(Eigen::Vector2d(1.0, -1.0), d, 1.0, 1.0, 1.0), Error);
  EXPECT_THROW(require_positive(Eigen::Vector2d(1.0, std::nan(""))), Error);
}

TEST(Manufactured, Constants)
{
  const ManufacturedCase mms;
  EXPECT_NEAR(mms.beta1(), 3.0, 1e-15);
  EXPECT_NEAR(mms.beta2(), 8.0 / 3.0, 1e-15);
  const Eigen::VectorXd c = mms.concentrations(Point(0.5, 0.5));
  EXPECT_NEAR(c[2], 1.5, 1e-15);
  EXPECT_NEAR(c[3], 0.5, 1e-15);
  for (const Point x : {Point(0.1, 0.9), Point(0.33, 0.25), Point(1.0, 0.0)})
  {
    EXPECT_NEAR(mms.concentrations(x).sum(), 4.0, 1e-14);
  }
}

TEST(Manufactured, SourceMatchesDifferencedDivergence)
{
  const ManufacturedCase mms;
  const double h = 1e-5;
  const Point x(0.37, 0.61);
  for (int i = 0; i < 4; ++i)
  {
    auto cv = [&](const Point &p) {
      const Eigen::VectorXd c = mms.concentrations(p);
      return Point(c[i] * mms.velocities(p).row(i).transpose());
    };
    const double div = (cv(x + Point(h, 0)).x() - cv(x - Point(h, 0)).x() +
                        cv(x + Point(0, h)).y() - cv(x - Point(0, h)).y()) /
                       (2.0 * h);
    EXPECT_NEAR(mms.source(i, x), div, 1e-6) << "species " << i;
  }
}

TEST(Manufactured, MassAverageOfVelocities)
{
  const ManufacturedCase mms;
  const Point x(0.2, 0.7);
  Point total = Point::Zero();
  for (int i = 0; i < 4; ++i)
  {
    total += mms.flux(i, x);
  }
  EXPECT_LT((total - mms.bulk_momentum()).norm(), 1e-13);
}

TEST(Airway, TabulatedData)
{
  const AirwayData air;
  EXPECT_NEAR(air.concentrations(air.trachea)[1], 0.1967 * 101325.0 / (8.314462618 * 298.0), 1e-12);
  EXPECT_NEAR(air.trachea.sum(), 1.0, 1e-12);
  EXPECT_NEAR(air.bronchi.sum(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(air.molar_masses[2], 0.044);
}

TEST(Problems, Registry)
{
  EXPECT_EQ(make_problem("mms2d").name, "mms2d");
  EXPECT_TRUE(make_problem("mms2d").exact.has_value());
  EXPECT_FALSE(make_problem("airway2d").exact.has_value());
  EXPECT_THROW(make_problem("lung3d"), Error);
}

}  // namespace
