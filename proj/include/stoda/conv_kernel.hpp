#pragma once

#include <cstddef>

namespace stoda {

// Dense log-kernel reduction: for each target t,
//   out[t] = sum_s rho[s] * (log|x_t - x_s|^2 - sub[t])  +  rho[self] * self_term[t],
// where the s == self_index[t] summand is replaced by the given value
// (self_index[t] < 0 means no replacement).  Source order is fixed, so the
// result does not depend on the thread count.  Compiled in its own
// translation unit with vectorized math; inputs must be finite.
void log_kernel_sum(int dim, const double* const* src_coords, const double* rho, std::size_t ns,
                    const double* const* tgt_coords, std::size_t nt, const double* sub,
                    const std::ptrdiff_t* self_index, const double* self_term, double* out);

// Nodewise rho[i] = weight[i] * exp(log_kbar[i] + n * v[i]); returns sum(rho).
double weighted_exp(const double* weight, const double* log_kbar, const double* v, double n,
                    std::size_t count, double* rho);

}  // namespace stoda
