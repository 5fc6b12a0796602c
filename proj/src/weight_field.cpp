#include "stoda/weight_field.hpp"

#include <cmath>

#include "stoda/base_profile.hpp"
#include "stoda/errors.hpp"

namespace stoda {

double log_kbar_at(const std::vector<double>& x, const ProblemSpec& prob, int component) {
  const int n = prob.dim();
  const auto& pts = prob.sources.points;
  const auto& beta = prob.sources.weights[component];
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  double acc = 0.0;
  for (std::size_t l = 0; l < pts.size(); ++l) {
    double d2 = 0.0;
    for (int c = 0; c < n; ++c) {
      const double d = x[c] - pts[l][c];
      d2 += d * d;
    }
    acc += -0.5 * n * beta[l] * std::log(d2);
  }
  if (prob.origin_alpha != 0.0) acc += 0.5 * n * prob.origin_alpha * std::log(r2);
  acc += n * prob.farfield()[component] * BaseProfile::eval_radius(std::sqrt(r2));
  return acc;
}

WeightField eval_weight_field(const QuadratureGrid& grid, const ProblemSpec& prob, int component,
                              double log_cap) {
  prob.validate();
  WeightField f;
  f.component = component;
  f.farfield_exponent = prob.farfield()[component];
  f.weights = grid.corrected_weights(prob.patch_exponents(component));
  f.log_kbar.resize(grid.size());

  const int n = grid.dim;
  const auto& pts = prob.sources.points;
  const auto& beta = prob.sources.weights[component];
  const double beta_ff = f.farfield_exponent;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double acc = 0.0;
    for (std::size_t l = 0; l < pts.size(); ++l) {
      double d2 = 0.0;
      for (int c = 0; c < n; ++c) {
        const double d = grid.coords[c][i] - pts[l][c];
        d2 += d * d;
      }
      acc += -0.5 * n * beta[l] * std::log(d2);
    }
    if (prob.origin_alpha != 0.0) acc += 0.5 * n * prob.origin_alpha * std::log(grid.r2[i]);
    acc += n * beta_ff * BaseProfile::eval_radius(grid.radius(i));
    if (!(acc <= log_cap))
      throw NumericalError("weight field overflow (log Kbar > cap); refine the grid near sources");
    f.log_kbar[i] = acc;
  }
  return f;
}

double WeightField::integrate(const std::vector<double>& g) const {
  double s = 0.0;
  if (g.empty()) {
    for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * std::exp(log_kbar[i]);
  } else {
    for (std::size_t i = 0; i < weights.size(); ++i)
      s += weights[i] * std::exp(log_kbar[i]) * g[i];
  }
  return s;
}

}  // namespace stoda
