#include "osm/elements/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "osm/error.hpp"

namespace osm
{

double legendre(int n, double x)
{
  if (n == 0)
  {
    return 1.0;
  }
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k)
  {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

LineRule gauss_legendre(int n)
{
  OSM_REQUIRE(n >= 1, ErrorCode::invalid_argument, "need at least one quadrature point");
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i)
  {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it)
    {
      const double p = legendre(n, x);
      const double pm = legendre(n - 1, x);
      dp = n * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    const double p = legendre(n, x);
    const double pm = legendre(n - 1, x);
    dp = n * (x * p - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1,1] -> [0,1], ascending order
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

TriangleRule triangle_rule(int degree)
{
  OSM_REQUIRE(degree >= 0, ErrorCode::invalid_argument, "negative quadrature degree");
  // x = s, y = t(1 - s), dx dy = (1 - s) ds dt. A degree-p integrand becomes degree p+1
  // in s and degree p in t.
  const int n = (degree + 3) / 2;
  const LineRule line = gauss_legendre(n);
  TriangleRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const double s = line.points[i];
      const double t = line.points[j];
      rule.points.emplace_back(s, t * (1.0 - s));
      rule.weights.push_back(line.weights[i] * line.weights[j] * (1.0 - s));
    }
  }
  return rule;
}

}  // namespace osm
