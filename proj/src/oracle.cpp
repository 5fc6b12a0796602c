#include "stoda/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "stoda/base_profile.hpp"
#include "stoda/constants.hpp"
#include "stoda/errors.hpp"
#include "stoda/quadrature.hpp"

namespace stoda {

double bubble_2d_radius(double r) { return std::log(2.0) - std::log1p(r * r); }

double bubble_2d(const std::vector<double>& x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::log(2.0) - std::log1p(r2);
}

double log_kernel_angular_mean(int n, double r, double s) {
  const double hi = std::max(r, s);
  const double lo = std::min(r, s);
  if (n == 2) return -std::log(hi);
  if (n != 3) throw std::invalid_argument("log_kernel_angular_mean: n must be 2 or 3");
  if (!(hi > 0.0)) return 0.0;
  const double m = lo / hi;
  if (m < 1e-2) {
    const double m2 = m * m;
    return -std::log(hi) - m2 / 6.0 - m2 * m2 / 60.0;
  }
  const double a = r + s;
  const double b = hi - lo;
  const double blb = b > 0.0 ? b * b * std::log(b) : 0.0;
  return 0.5 - (a * a * std::log(a) - blb) / (4.0 * r * s);
}

double RadialSolution::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : u) m = std::max(m, x);
  return m;
}

double RadialSolution::eval(double radius) const {
  if (radius <= r.front()) return u.front();
  if (radius >= r.back()) return u.back();
  const auto it = std::upper_bound(r.begin(), r.end(), radius);
  const std::size_t k = static_cast<std::size_t>(it - r.begin());
  const double t = (std::log(radius) - std::log(r[k - 1])) / (std::log(r[k]) - std::log(r[k - 1]));
  return (1.0 - t) * u[k - 1] + t * u[k];
}

RadialSolution radial_solve(double alpha, int n, const RadialConfig& cfg) {
  if (!(alpha > -1.0)) throw ConfigError("radial_solve: alpha must exceed -1");
  if (n != 2 && n != 3) throw ConfigError("radial_solve: n must be 2 or 3");
  cfg.iteration.validate();

  const double gam = gamma_n(n);
  const double target = 2.0 * gam * (1.0 + alpha);
  const double beta = 2.0 * (1.0 + alpha);
  const double omega = sphere_measure(n - 1);

  // log-spaced radial cells with Gauss nodes; measure |S^{n-1}| s^{n-1} ds
  const Rule1D gl = gauss_legendre(cfg.gauss);
  const int nodes_n = cfg.cells * cfg.gauss;
  std::vector<double> rr(nodes_n), w(nodes_n), log_kbar(nodes_n);
  const double la = std::log(cfg.r_min), lb = std::log(cfg.r_max);
  for (int k = 0; k < cfg.cells; ++k) {
    const double a = std::exp(la + (lb - la) * k / cfg.cells);
    const double b = std::exp(la + (lb - la) * (k + 1) / cfg.cells);
    for (int q = 0; q < cfg.gauss; ++q) {
      const int i = k * cfg.gauss + q;
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
      rr[i] = s;
      w[i] = 0.5 * (b - a) * gl.w[q] * omega * std::pow(s, n - 1);
      log_kbar[i] = n * alpha * std::log(s) + n * beta * BaseProfile::eval_radius(s);
    }
  }

  std::vector<double> v(nodes_n, 0.0), rho(nodes_n), image(nodes_n);
  RadialSolution sol;
  sol.alpha = alpha;
  sol.n = n;
  sol.beta = beta;
  sol.r = rr;

  double c = 0.0;
  int total_iter = 0;
  auto apply = [&](double& c_out) {
    double raw = 0.0;
    for (int i = 0; i < nodes_n; ++i) {
      rho[i] = w[i] * std::exp(log_kbar[i] + n * v[i]);
      raw += rho[i];
    }
    if (!(raw > 0.0) || !std::isfinite(raw))
      throw NumericalError("radial oracle: degenerate field");
    c_out = std::log(target / raw) / n;
    const double scale = target / raw;
    for (int i = 0; i < nodes_n; ++i) rho[i] *= scale;
    for (int t = 0; t < nodes_n; ++t) {
      double acc = 0.0;
      const double rt = rr[t];
      if (rt > 1.0) {
        const double lrt = std::log(rt);
        for (int s = 0; s < nodes_n; ++s)
          acc += rho[s] * (log_kernel_angular_mean(n, rt, rr[s]) + lrt);
      } else {
        for (int s = 0; s < nodes_n; ++s) acc += rho[s] * log_kernel_angular_mean(n, rt, rr[s]);
      }
      image[t] = acc / gam - (rt <= 1.0 ? beta * BaseProfile::eval_radius(rt) : 0.0);
    }
  };

  for (double t : cfg.iteration.homotopy) {
    double theta = cfg.iteration.damping;
    double prev = std::numeric_limits<double>::infinity();
    bool done = false;
    for (int iter = 1; iter <= cfg.iteration.max_iterations; ++iter) {
      ++total_iter;
      apply(c);
      double res = 0.0, psi_max = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < nodes_n; ++i) {
        res = std::max(res, std::abs(t * image[i] - v[i]));
        psi_max = std::max(psi_max, v[i] + c + std::log(t) / n);
      }
      if (psi_max > cfg.iteration.blowup_threshold) {
        sol.status = SolveStatus::BlowUp;
        sol.iterations = total_iter;
        return sol;
      }
      if (res <= cfg.iteration.tolerance) {
        done = true;
        break;
      }
      if (res > prev * (1.0 + 1e-12) && theta > cfg.iteration.damping_min)
        theta = std::max(cfg.iteration.damping_min, 0.5 * theta);
      prev = res;
      for (int i = 0; i < nodes_n; ++i) v[i] = (1.0 - theta) * v[i] + theta * t * image[i];
    }
    if (!done) {
      sol.status = SolveStatus::MaxIter;
      sol.iterations = total_iter;
      return sol;
    }
  }

  sol.status = SolveStatus::Converged;
  sol.iterations = total_iter;
  sol.c = c;
  sol.u.resize(nodes_n);
  double mass = 0.0;
  for (int i = 0; i < nodes_n; ++i) {
    sol.u[i] = v[i] + beta * BaseProfile::eval_radius(rr[i]) + c;
    mass += w[i] * std::exp(n * alpha * std::log(rr[i]) + n * sol.u[i]);
  }
  sol.mass = mass;
  return sol;
}

}  // namespace stoda
