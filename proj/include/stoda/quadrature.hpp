#pragma once

#include <vector>

namespace stoda {

// Gauss-Legendre rule on [-1, 1], nodes ascending.  Exact for polynomials of
// degree 2n-1; nodes found by Newton iteration to machine precision.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

Rule1D gauss_legendre(int n);

// Quadrature on the unit sphere S^{dim-1} in R^dim, weights summing to its
// surface measure.  dim = 2 uses uniform azimuth nodes (trapezoid rule,
// spectral for periodic integrands); dim >= 3 uses a product of a
// Gauss-Legendre polar rule (sin^{dim-2} folded into the weights) with a
// recursively built rule on the equatorial sphere.
struct SphereRule {
  int dim = 2;
  std::vector<std::vector<double>> nodes;  // unit vectors, size dim each
  std::vector<double> w;
  std::size_t size() const { return w.size(); }
};

SphereRule sphere_rule(int dim, int azimuth, int polar);

}  // namespace stoda
