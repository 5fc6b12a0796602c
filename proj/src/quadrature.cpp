#include "stoda/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "stoda/constants.hpp"

namespace stoda {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Rule1D rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return rule;
}

SphereRule sphere_rule(int dim, int azimuth, int polar) {
  if (dim < 2) throw std::invalid_argument("sphere_rule: dim must be >= 2");
  if (azimuth < 4) azimuth = 4;
  SphereRule r;
  r.dim = dim;
  if (dim == 2) {
    r.nodes.reserve(azimuth);
    r.w.assign(azimuth, 2.0 * kPi / azimuth);
    for (int k = 0; k < azimuth; ++k) {
      const double a = 2.0 * kPi * (k + 0.5) / azimuth;
      r.nodes.push_back({std::cos(a), std::sin(a)});
    }
    return r;
  }
  if (polar < 2) polar = 2;
  const SphereRule sub = sphere_rule(dim - 1, azimuth, polar);
  // polar rule in t = cos(theta) against the weight (1 - t^2)^{(dim-3)/2}:
  // exact Gauss rules for dim 3 (Legendre) and dim 4 (Chebyshev second kind),
  // Gauss-Legendre in theta with the sin^{dim-2} factor folded in otherwise.
  std::vector<double> ct(polar), st(polar), wt(polar);
  if (dim == 3) {
    const Rule1D gl = gauss_legendre(polar);
    for (int i = 0; i < polar; ++i) {
      ct[i] = gl.x[i];
      st[i] = std::sqrt(1.0 - gl.x[i] * gl.x[i]);
      wt[i] = gl.w[i];
    }
  } else if (dim == 4) {
    for (int i = 0; i < polar; ++i) {
      const double a = kPi * (i + 1.0) / (polar + 1.0);
      ct[i] = std::cos(a);
      st[i] = std::sin(a);
      wt[i] = kPi / (polar + 1.0) * st[i] * st[i];
    }
  } else {
    const Rule1D gl = gauss_legendre(polar);
    for (int i = 0; i < polar; ++i) {
      const double theta = 0.5 * kPi * (gl.x[i] + 1.0);
      ct[i] = std::cos(theta);
      st[i] = std::sin(theta);
      wt[i] = 0.5 * kPi * gl.w[i] * std::pow(st[i], dim - 2);
    }
  }
  r.nodes.reserve(static_cast<std::size_t>(polar) * sub.size());
  r.w.reserve(static_cast<std::size_t>(polar) * sub.size());
  for (int i = 0; i < polar; ++i) {
    for (std::size_t j = 0; j < sub.size(); ++j) {
      std::vector<double> v(dim);
      v[0] = ct[i];
      for (int k = 0; k < dim - 1; ++k) v[k + 1] = st[i] * sub.nodes[j][k];
      r.nodes.push_back(std::move(v));
      r.w.push_back(wt[i] * sub.w[j]);
    }
  }
  return r;
}

}  // namespace stoda
