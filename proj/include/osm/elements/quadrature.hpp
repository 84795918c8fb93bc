#pragma once

#include <vector>

#include "osm/meshkit/mesh.hpp"

namespace osm
{

/// Gauss-Legendre rule on [0,1].
struct LineRule
{
  std::vector<double> points;
  std::vector<double> weights;
};

LineRule gauss_legendre(int npoints);

/// Rule on the reference triangle (0,0),(1,0),(0,1); weights sum to 1/2.
struct TriangleRule
{
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// Collapsed (Duffy) Gauss-Legendre product rule, exact for polynomials of total degree
/// <= `degree`.
TriangleRule triangle_rule(int degree);

/// Legendre polynomial P_n on [-1, 1].
double legendre(int n, double x);

}  // namespace osm
