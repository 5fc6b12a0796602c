// Dense O(N^2) log-kernel loops.  This file is compiled with -ffast-math so
// gcc can use the libmvec vectorized log; everything else in the project
// stays under strict IEEE semantics.

#include "stoda/conv_kernel.hpp"

#include <cmath>

#include "stoda/util.hpp"

namespace stoda {

namespace {

void row_2d(const double* sx, const double* sy, const double* rho, std::size_t ns, double tx,
            double ty, double sub, std::ptrdiff_t self, double self_term, double* out) {
  double acc = 0.0;
  for (std::size_t s = 0; s < ns; ++s) {
    const double dx = tx - sx[s];
    const double dy = ty - sy[s];
    // the self summand sees r2 == 1 (log == 0) and is fixed up afterwards
    const double r2 = dx * dx + dy * dy + (static_cast<std::ptrdiff_t>(s) == self ? 1.0 : 0.0);
    acc += rho[s] * (std::log(r2) - sub);
  }
  if (self >= 0) acc += rho[self] * (self_term + sub);
  *out = acc;
}

void row_3d(const double* sx, const double* sy, const double* sz, const double* rho,
            std::size_t ns, double tx, double ty, double tz, double sub, std::ptrdiff_t self,
            double self_term, double* out) {
  double acc = 0.0;
  for (std::size_t s = 0; s < ns; ++s) {
    const double dx = tx - sx[s];
    const double dy = ty - sy[s];
    const double dz = tz - sz[s];
    const double r2 =
        dx * dx + dy * dy + dz * dz + (static_cast<std::ptrdiff_t>(s) == self ? 1.0 : 0.0);
    acc += rho[s] * (std::log(r2) - sub);
  }
  if (self >= 0) acc += rho[self] * (self_term + sub);
  *out = acc;
}

void row_nd(int dim, const double* const* sc, const double* rho, std::size_t ns,
            const double* const* tc, std::size_t t, double sub, std::ptrdiff_t self,
            double self_term, double* out) {
  double acc = 0.0;
  for (std::size_t s = 0; s < ns; ++s) {
    double r2 = static_cast<std::ptrdiff_t>(s) == self ? 1.0 : 0.0;
    for (int c = 0; c < dim; ++c) {
      const double d = tc[c][t] - sc[c][s];
      r2 += d * d;
    }
    acc += rho[s] * (std::log(r2) - sub);
  }
  if (self >= 0) acc += rho[self] * (self_term + sub);
  *out = acc;
}

}  // namespace

void log_kernel_sum(int dim, const double* const* sc, const double* rho, std::size_t ns,
                    const double* const* tc, std::size_t nt, const double* sub,
                    const std::ptrdiff_t* self_index, const double* self_term, double* out) {
  parallel_for(nt, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const std::ptrdiff_t self = self_index ? self_index[t] : -1;
      const double st = self_term ? self_term[t] : 0.0;
      const double su = sub ? sub[t] : 0.0;
      if (dim == 2)
        row_2d(sc[0], sc[1], rho, ns, tc[0][t], tc[1][t], su, self, st, &out[t]);
      else if (dim == 3)
        row_3d(sc[0], sc[1], sc[2], rho, ns, tc[0][t], tc[1][t], tc[2][t], su, self, st, &out[t]);
      else
        row_nd(dim, sc, rho, ns, tc, t, su, self, st, &out[t]);
    }
  });
}

double weighted_exp(const double* weight, const double* log_kbar, const double* v, double n,
                    std::size_t count, double* rho) {
  for (std::size_t i = 0; i < count; ++i) rho[i] = weight[i] * std::exp(log_kbar[i] + n * v[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += rho[i];
  return sum;
}

}  // namespace stoda
