#pragma once

#include "stoda/constants.hpp"
#include "stoda/errors.hpp"
#include "stoda/operator.hpp"

namespace stoda {

// Scalar n-dimensional entry points.  The scalar problem shares the log-kernel
// machinery with the Toda system (kernel weight 1/gamma_n, exponent n,
// identity coupling); these wrappers pin the names and preconditions.

inline double normalization_constant_n(const LogKernelOperator& op,
                                       const std::vector<double>& v, double* raw = nullptr) {
  return op.normalization_constant(v, 0, raw);
}

inline std::vector<double> apply_T_n(const LogKernelOperator& op, const std::vector<double>& v) {
  FieldPair f;
  f.comp = {v};
  return op.apply(f).comp[0];
}

inline SolveResult solve_n(const QuadratureGrid& grid, const ProblemSpec& prob,
                           const IterationConfig& cfg) {
  if (prob.components() != 1)
    throw ConfigError("solve_n: scalar mode requires a single component");
  const LogKernelOperator op(grid, prob);
  return solve(op, cfg);
}

}  // namespace stoda
