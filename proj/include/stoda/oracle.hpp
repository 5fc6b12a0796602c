#pragma once

#include <vector>

#include "stoda/operator.hpp"

namespace stoda {

// Closed-form validation solution of -Delta u = e^{2u} in R^2, mass 4 pi.
double bubble_2d_radius(double r);
double bubble_2d(const std::vector<double>& x);

// Angular mean of log(1/|x-y|) over the sphere |y| = s, for |x| = r.
// n = 2: -log(max(r,s)) (the mean-value identity is exact).
// n = 3: 1/2 - [(r+s)^2 log(r+s) - (r-s)^2 log|r-s|] / (4 r s), evaluated by
// the series -log(max) - m^2/6 - m^4/60 (m = min/max) when the ratio is
// small enough that the closed form would cancel catastrophically.
double log_kernel_angular_mean(int n, double r, double s);

struct RadialConfig {
  int cells = 240;     // log-spaced radial cells on [r_min, r_max]
  double r_min = 1e-6;
  double r_max = 1e4;
  int gauss = 3;
  IterationConfig iteration;
};

// Single-source radial profile: the normal solution of
//   (-Delta)^{n/2} u = |x|^{n alpha} e^{n u},  mass 2 gamma_n (1 + alpha),
// computed by the same damped homotopy iteration but on the 1-D radial
// reduction of the integral operator (angular integration done analytically
// through log_kernel_angular_mean).  Independent of the 2-D/3-D grid path.
struct RadialSolution {
  double alpha = 0.0;
  int n = 2;
  SolveStatus status = SolveStatus::MaxIter;
  double beta = 0.0;  // far-field exponent 2(1+alpha)
  double c = 0.0;
  double mass = 0.0;
  int iterations = 0;
  std::vector<double> r;  // ascending radial nodes
  std::vector<double> u;  // profile u(r)

  double max_value() const;
  double eval(double radius) const;  // linear interpolation in log r
};

RadialSolution radial_solve(double alpha, int n, const RadialConfig& cfg = {});

}  // namespace stoda
