#pragma once

#include <vector>

#include <Eigen/Dense>

namespace osm
{

/// Physical description of an ideal-gas mixture.
struct MixtureSpec
{
  int n = 0;
  Eigen::VectorXd molar_masses;
  /// Symmetric Stefan-Maxwell diffusivities; the diagonal is unused.
  Eigen::MatrixXd diffusivities;
  double rt = 1.0;
  double p_ref = 1.0;
  Eigen::VectorXd mu_ref;
  double gamma = 1.0;

  /// Throws invalid-argument when an invariant is violated.
  void validate() const;
};

/// Builds and validates a spec; `mu_ref` defaults to zeros.
MixtureSpec make_mixture(Eigen::VectorXd molar_masses, Eigen::MatrixXd diffusivities, double rt,
                         double p_ref, double gamma, Eigen::VectorXd mu_ref = {});

/// Concentrations at one point with derived totals.
struct PointState
{
  Eigen::VectorXd c;

  double total() const { return c.sum(); }
  double density(const MixtureSpec &spec) const { return spec.molar_masses.dot(c); }
  Eigen::VectorXd mass_fractions(const MixtureSpec &spec) const;
  Eigen::VectorXd mole_fractions() const { return c / total(); }
};

/// M_ij = -RT c_i c_j / (D_ij c_T) off the diagonal, negative row sums on it.
Eigen::MatrixXd onsager_matrix(const Eigen::VectorXd &c, const MixtureSpec &spec);

/// M + gamma w w^T with mass fractions w; gamma < 0 is invalid-argument.
Eigen::MatrixXd augment(const Eigen::MatrixXd &m, const Eigen::VectorXd &c, const MixtureSpec &spec,
                        double gamma);

/// Entrywise scaling M_ij / (M_i M_j c_i c_j).
Eigen::MatrixXd flux_transport(const Eigen::MatrixXd &m_gamma, const Eigen::VectorXd &c,
                               const MixtureSpec &spec);

/// Flux-form transport matrix from closed-form entries, with its derivatives
/// with respect to each concentration.
struct TransportJet
{
  Eigen::MatrixXd value;
  std::vector<Eigen::MatrixXd> d_dc;
};

TransportJet flux_transport_jet(const Eigen::VectorXd &c, const MixtureSpec &spec, double gamma,
                                bool with_derivatives);

/// c_i = (p_ref / RT) exp((mu_i - mu_ref_i) / RT); exponents above 700 are state-out-of-range.
Eigen::VectorXd concentrations_from_potentials(const Eigen::VectorXd &mu, const MixtureSpec &spec);

/// Inverse of concentrations_from_potentials; nonpositive c is invalid-state.
Eigen::VectorXd potentials_from_concentrations(const Eigen::VectorXd &c, const MixtureSpec &spec);

/// Scales c so that c_T RT = p.
Eigen::VectorXd normalize_concentrations(const Eigen::VectorXd &c, double p, const MixtureSpec &spec);

/// Throws invalid-state unless every entry is positive and finite.
void require_positive(const Eigen::VectorXd &c);

}  // namespace osm
