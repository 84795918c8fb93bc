#include "osm/osmcore/mixture.hpp"

#include <cmath>
#include <sstream>

#include "osm/error.hpp"

namespace osm
{

void MixtureSpec::validate() const
{
  OSM_REQUIRE(n >= 2, ErrorCode::invalid_argument, "a mixture needs at least two species");
  OSM_REQUIRE(molar_masses.size() == n && diffusivities.rows() == n && diffusivities.cols() == n &&
                  mu_ref.size() == n,
              ErrorCode::invalid_argument, "species data sizes disagree");
  OSM_REQUIRE((molar_masses.array() > 0.0).all(), ErrorCode::invalid_argument,
              "molar masses must be positive");
  OSM_REQUIRE(rt > 0.0 && p_ref > 0.0, ErrorCode::invalid_argument, "RT and p_ref must be positive");
  OSM_REQUIRE(gamma > 0.0, ErrorCode::invalid_argument, "gamma must be positive");
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      if (i == j)
      {
        continue;
      }
      OSM_REQUIRE(diffusivities(i, j) > 0.0, ErrorCode::invalid_argument,
                  "diffusivities must be positive");
      OSM_REQUIRE(diffusivities(i, j) == diffusivities(j, i), ErrorCode::invalid_argument,
                  "diffusivities must be symmetric");
    }
  }
}

MixtureSpec make_mixture(Eigen::VectorXd molar_masses, Eigen::MatrixXd diffusivities, double rt,
                         double p_ref, double gamma, Eigen::VectorXd mu_ref)
{
  MixtureSpec s;
  s.n = static_cast<int>(molar_masses.size());
  s.molar_masses = std::move(molar_masses);
  s.diffusivities = std::move(diffusivities);
  s.rt = rt;
  s.p_ref = p_ref;
  s.gamma = gamma;
  s.mu_ref = mu_ref.size() == 0 ? Eigen::VectorXd::Zero(s.n) : std::move(mu_ref);
  s.validate();
  return s;
}

Eigen::VectorXd PointState::mass_fractions(const MixtureSpec &spec) const
{
  const Eigen::VectorXd m = spec.molar_masses.cwiseProduct(c);
  return m / m.sum();
}

void require_positive(const Eigen::VectorXd &c)
{
  for (Eigen::Index i = 0; i < c.size(); ++i)
  {
    if (!(c[i] > 0.0) || !std::isfinite(c[i]))
    {
      std::ostringstream msg;
      msg << "concentration " << i << " is " << c[i];
      throw Error(ErrorCode::invalid_state, msg.str());
    }
  }
}

Eigen::MatrixXd onsager_matrix(const Eigen::VectorXd &c, const MixtureSpec &spec)
{
  require_positive(c);
  const int n = spec.n;
  const double ct = c.sum();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      if (i != j)
      {
        m(i, j) = -spec.rt * c[i] * c[j] / (spec.diffusivities(i, j) * ct);
        m(i, i) -= m(i, j);
      }
    }
  }
  return m;
}

Eigen::MatrixXd augment(const Eigen::MatrixXd &m, const Eigen::VectorXd &c, const MixtureSpec &spec,
                        double gamma)
{
  OSM_REQUIRE(gamma >= 0.0, ErrorCode::invalid_argument, "gamma must be nonnegative");
  const Eigen::VectorXd w = PointState{c}.mass_fractions(spec);
  return m + gamma * w * w.transpose();
}

Eigen::MatrixXd flux_transport(const Eigen::MatrixXd &m_gamma, const Eigen::VectorXd &c,
                               const MixtureSpec &spec)
{
  const Eigen::VectorXd z = spec.molar_masses.cwiseProduct(c).cwiseInverse();
  return z.asDiagonal() * m_gamma * z.asDiagonal();
}

TransportJet flux_transport_jet(const Eigen::VectorXd &c, const MixtureSpec &spec, double gamma,
                                bool with_derivatives)
{
  require_positive(c);
  const int n = spec.n;
  const Eigen::VectorXd &mm = spec.molar_masses;
  const Eigen::MatrixXd &d = spec.diffusivities;
  const double ct = c.sum();
  const double rho = mm.dot(c);
  const double aug = gamma / (rho * rho);

  TransportJet jet;
  jet.value.resize(n, n);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      if (i != j)
      {
        s[i] += c[j] / d(i, j);
        jet.value(i, j) = -spec.rt / (mm[i] * mm[j] * d(i, j) * ct) + aug;
      }
    }
    jet.value(i, i) = spec.rt * s[i] / (mm[i] * mm[i] * c[i] * ct) + aug;
  }
  if (!with_derivatives)
  {
    return jet;
  }

  jet.d_dc.assign(n, Eigen::MatrixXd(n, n));
  for (int m = 0; m < n; ++m)
  {
    Eigen::MatrixXd &g = jet.d_dc[m];
    const double daug = -2.0 * gamma * mm[m] / (rho * rho * rho);
    for (int i = 0; i < n; ++i)
    {
      for (int j = 0; j < n; ++j)
      {
        if (i != j)
        {
          g(i, j) = spec.rt / (mm[i] * mm[j] * d(i, j) * ct * ct) + daug;
        }
      }
      const double ds = m == i ? 0.0 : 1.0 / d(i, m);
      const double denom = c[i] * ct;
      const double ddenom = (m == i ? ct : 0.0) + c[i];
      g(i, i) = spec.rt / (mm[i] * mm[i]) * (ds / denom - s[i] * ddenom / (denom * denom)) + daug;
    }
  }
  return jet;
}

Eigen::VectorXd concentrations_from_potentials(const Eigen::VectorXd &mu, const MixtureSpec &spec)
{
  Eigen::VectorXd c(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i)
  {
    const double arg = (mu[i] - spec.mu_ref[i]) / spec.rt;
    if (!(std::abs(arg) <= 700.0))
    {
      std::ostringstream msg;
      msg << "potential " << i << " gives exponent " << arg;
      throw Error(ErrorCode::state_out_of_range, msg.str());
    }
    c[i] = spec.p_ref / spec.rt * std::exp(arg);
  }
  return c;
}

Eigen::VectorXd potentials_from_concentrations(const Eigen::VectorXd &c, const MixtureSpec &spec)
{
  require_positive(c);
  Eigen::VectorXd mu(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i)
  {
    mu[i] = spec.mu_ref[i] + spec.rt * std::log(c[i] * spec.rt / spec.p_ref);
  }
  return mu;
}

Eigen::VectorXd normalize_concentrations(const Eigen::VectorXd &c, double p, const MixtureSpec &spec)
{
  const double ct = c.sum();
  OSM_REQUIRE(ct > 0.0, ErrorCode::invalid_state, "total concentration must be positive");
  return c * (p / (spec.rt * ct));
}

}  // namespace osm
