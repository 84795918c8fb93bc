#include "osm/krylov/gmres.hpp"

#include <chrono>
#include <cmath>

#include "osm/error.hpp"

namespace osm
{

namespace
{

thread_local double g_orthogonality_error = 0.0;

// Givens rotation zeroing b in (a, b).
void givens(double a, double b, double &c, double &s)
{
  if (b == 0.0)
  {
    c = 1.0;
    s = 0.0;
    return;
  }
  const double r = std::hypot(a, b);
  c = a / r;
  s = b / r;
}

}  // namespace

void KrylovConfig::validate() const
{
  OSM_REQUIRE(rtol > 0.0 && atol > 0.0, ErrorCode::invalid_argument, "tolerances must be positive");
  OSM_REQUIRE(max_iterations >= 1 && restart >= 1, ErrorCode::invalid_argument,
              "iteration limits must be positive");
}

double last_basis_orthogonality_error()
{
  return g_orthogonality_error;
}

SolveReport gmres(const LinearOperator &a, const Vector &b, Vector &x, const LinearOperator *pc,
                  const KrylovConfig &config)
{
  config.validate();
  const int n = a.size();
  OSM_REQUIRE(b.size() == n && x.size() == n && (pc == nullptr || pc->size() == n),
              ErrorCode::invalid_argument, "operator and vector sizes disagree");
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;

  Vector r(n);
  a.apply(x, r);
  r = b - r;
  double beta = r.norm();
  report.residuals.push_back(beta);
  const double target = std::max(config.rtol * beta, config.atol);
  const int m = std::min(config.restart, config.max_iterations);

  std::vector<Vector> v;
  std::vector<Vector> z;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);
  Vector w(n), tmp(n);

  while (beta > target && report.iterations < config.max_iterations)
  {
    v.assign(1, r / beta);
    z.clear();
    h.setZero();
    g.setZero();
    g[0] = beta;
    int j = 0;
    bool breakdown = false;
    for (; j < m && report.iterations < config.max_iterations; ++j)
    {
      if (pc != nullptr)
      {
        pc->apply(v[j], tmp);
      }
      else
      {
        tmp = v[j];
      }
      a.apply(tmp, w);
      if (config.flexible)
      {
        z.push_back(tmp);
      }
      const double before = w.norm();
      for (int i = 0; i <= j; ++i)
      {
        h(i, j) = v[i].dot(w);
        w -= h(i, j) * v[i];
      }
      // Second pass when cancellation lost more than a factor sqrt(2).
      if (w.norm() < 0.7071067811865476 * before)
      {
        for (int i = 0; i <= j; ++i)
        {
          const double corr = v[i].dot(w);
          h(i, j) += corr;
          w -= corr * v[i];
        }
      }
      h(j + 1, j) = w.norm();
      ++report.iterations;
      breakdown = h(j + 1, j) <= 1e-14 * before;
      if (!breakdown)
      {
        v.push_back(w / h(j + 1, j));
      }

      for (int i = 0; i < j; ++i)
      {
        const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t;
      }
      givens(h(j, j), h(j + 1, j), cs[j], sn[j]);
      h(j, j) = cs[j] * h(j, j) + sn[j] * h(j + 1, j);
      h(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      report.residuals.push_back(std::abs(g[j + 1]));
      if (std::abs(g[j + 1]) <= target || breakdown)
      {
        ++j;
        break;
      }
    }

    // Solve the triangular least-squares system and update the iterate.
    const Eigen::VectorXd y =
        h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    if (config.flexible)
    {
      for (int i = 0; i < j; ++i)
      {
        x += y[i] * z[i];
      }
    }
    else
    {
      Vector u = Vector::Zero(n);
      for (int i = 0; i < j; ++i)
      {
        u += y[i] * v[i];
      }
      if (pc != nullptr)
      {
        pc->apply(u, tmp);
        x += tmp;
      }
      else
      {
        x += u;
      }
    }

    if (config.check_orthogonality)
    {
      double err = 0.0;
      const int nb = static_cast<int>(v.size());
      for (int p = 0; p < nb; ++p)
      {
        for (int q = 0; q <= p; ++q)
        {
          err = std::max(err, std::abs(v[p].dot(v[q]) - (p == q ? 1.0 : 0.0)));
        }
      }
      g_orthogonality_error = err;
    }

    if (breakdown)
    {
      a.apply(x, r);
      r = b - r;
      beta = r.norm();
      report.converged = true;
      break;
    }
    if (std::abs(g[j]) <= target)
    {
      report.converged = true;
      break;
    }
    // Restart from the true residual.
    a.apply(x, r);
    r = b - r;
    beta = r.norm();
  }
  if (beta <= target)
  {
    report.converged = true;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace osm
