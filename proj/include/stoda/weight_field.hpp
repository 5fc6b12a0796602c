#pragma once

#include <vector>

#include "stoda/grid.hpp"
#include "stoda/problem.hpp"

namespace stoda {

// Nodewise values of Kbar_i = K_i e^{n beta_i u0} kept in log space, together
// with the measure weights corrected for this component's singular exponents.
// log Kbar = sum_l (-n beta_{i,l}) log|x-P_l| + n alpha log|x| + n beta_i u0.
struct WeightField {
  int component = 0;
  double farfield_exponent = 0.0;
  std::vector<double> log_kbar;
  std::vector<double> weights;

  // Quadrature of Kbar * g for nodewise factors g (pass empty for g == 1).
  double integrate(const std::vector<double>& g = {}) const;
};

// Evaluates Kbar_i on the grid.  Nodes where log Kbar exceeds `log_cap`
// signal an under-resolved configuration and raise NumericalError rather
// than producing infinities downstream.
WeightField eval_weight_field(const QuadratureGrid& grid, const ProblemSpec& prob, int component,
                              double log_cap = 300.0);

// log Kbar_i at an arbitrary point (used by diagnostics and tests).
double log_kbar_at(const std::vector<double>& x, const ProblemSpec& prob, int component);

}  // namespace stoda
