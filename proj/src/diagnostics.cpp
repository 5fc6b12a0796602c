#include "stoda/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stoda/base_profile.hpp"
#include "stoda/constants.hpp"
#include "stoda/errors.hpp"

namespace stoda {

SlopeFit slope_fit(const QuadratureGrid& grid, const std::vector<double>& u, double r_lo,
                   double r_hi, int annuli) {
  if (!(r_hi > r_lo && r_lo > 0.0) || annuli < 2)
    throw std::invalid_argument("slope_fit: bad annulus window");
  const double ll = std::log(r_lo), lh = std::log(r_hi);
  std::vector<double> sum_w(annuli, 0.0), sum_u(annuli, 0.0), sum_lr(annuli, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.radius(i);
    if (r < r_lo || r >= r_hi) continue;
    int k = static_cast<int>((std::log(r) - ll) / (lh - ll) * annuli);
    k = std::clamp(k, 0, annuli - 1);
    sum_w[k] += grid.w[i];
    sum_u[k] += grid.w[i] * u[i];
    sum_lr[k] += grid.w[i] * std::log(r);
  }
  // least squares of the annulus means against x = -<log r>; using the
  // weighted mean abscissa makes the fit exact for exact log fields
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  std::vector<double> xs, ys;
  for (int k = 0; k < annuli; ++k) {
    if (sum_w[k] <= 0.0) continue;
    const double x = -sum_lr[k] / sum_w[k];
    const double y = sum_u[k] / sum_w[k];
    xs.push_back(x);
    ys.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 2) throw std::invalid_argument("slope_fit: annuli outside the grid");
  SlopeFit f;
  f.annuli = used;
  const double det = used * sxx - sx * sx;
  f.slope = (used * sxy - sx * sy) / det;
  f.intercept = (sy * sxx - sx * sxy) / det;
  for (int k = 0; k < used; ++k)
    f.spread = std::max(f.spread, std::abs(ys[k] - (f.slope * xs[k] + f.intercept)));
  return f;
}

SlopeFit slope_fit_default(const QuadratureGrid& grid, const std::vector<double>& u) {
  return slope_fit(grid, u, grid.split_radius, 1.5 * grid.split_radius, 6);
}

double component_mass(const LogKernelOperator& op, const SolveResult& result, int i) {
  const auto& wf = op.weight_field(i);
  const int n = op.exponent();
  double mass = 0.0;
  for (std::size_t k = 0; k < op.grid().size(); ++k)
    mass += wf.weights[k] * std::exp(wf.log_kbar[k] + n * (result.v.comp[i][k] + result.c[i]));
  return mass;
}

double pohozaev_residual(double s1, double s2, double a1, double a2) {
  // grouped so the value is bitwise symmetric under (s1,a1) <-> (s2,a2)
  return (s1 * s1 + s2 * s2 - s1 * s2) - (s1 * (1.0 - a1) + s2 * (1.0 - a2));
}

PohozaevCheck pohozaev_check(double s1, double s2, double a1, double a2) {
  PohozaevCheck c;
  c.residual = pohozaev_residual(s1, s2, a1, a2);
  c.nonzero = s1 != 0.0 || s2 != 0.0;
  c.dichotomy_holds = s1 >= 1.0 - a1 || s2 >= 1.0 - a2;
  return c;
}

std::vector<double> kelvin_point(const std::vector<double>& x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  if (!(r2 > 0.0)) throw std::invalid_argument("kelvin_point: origin excluded");
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] / r2;
  return y;
}

double kelvin_two_point_gap(const std::vector<double>& x, const std::vector<double>& y) {
  const auto kx = kelvin_point(x), ky = kelvin_point(y);
  double nx = 0, ny = 0, dk = 0, d = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    nx += x[k] * x[k];
    ny += y[k] * y[k];
    const double a = kx[k] - ky[k];
    dk += a * a;
    const double b = x[k] - y[k];
    d += b * b;
  }
  return std::abs(std::sqrt(nx) * std::sqrt(ny) * std::sqrt(dk) - std::sqrt(d));
}

FieldEval kelvin_transform(FieldEval u, double beta, double shift) {
  return [u = std::move(u), beta, shift](const std::vector<double>& x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    if (!(r2 > 0.0)) throw std::invalid_argument("kelvin_transform: origin excluded");
    return u(kelvin_point(x)) - 0.5 * beta * std::log(r2) + shift;
  };
}

double kelvin_kbar(const ProblemSpec& prob, int component, const std::vector<double>& x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  if (!(r2 > 0.0)) throw std::invalid_argument("kelvin_kbar: origin excluded");
  const int n = prob.dim();
  return std::exp(-n * std::log(r2) + log_kbar_at(kelvin_point(x), prob, component));
}

SigmaTable sigma_estimate(const QuadratureGrid& grid, const std::vector<double>& weights,
                          const std::vector<double>& density, const std::vector<double>& center,
                          std::vector<double> radii) {
  std::sort(radii.begin(), radii.end());
  if (radii.empty() || !(radii.front() > 0.0))
    throw std::invalid_argument("sigma_estimate: radii must be positive");
  // a ball smaller than the graded core of a patch at this center holds no nodes
  for (const auto& patch : grid.patches) {
    double d2 = 0.0;
    for (int c = 0; c < grid.dim; ++c) {
      const double d = patch.center[c] - center[c];
      d2 += d * d;
    }
    if (d2 < 1e-24 && radii.front() < patch.rings.back().r_out)
      throw std::invalid_argument("sigma_estimate: radius below the patch core resolution");
  }
  SigmaTable tab;
  tab.radius = radii;
  tab.local_mass.assign(radii.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double d2 = 0.0;
    for (int c = 0; c < grid.dim; ++c) {
      const double d = grid.coords[c][i] - center[c];
      d2 += d * d;
    }
    const double d = std::sqrt(d2);
    for (std::size_t k = 0; k < radii.size(); ++k)
      if (d <= radii[k]) tab.local_mass[k] += weights[i] * density[i];
  }
  for (double& m : tab.local_mass) m /= 2.0 * kPi;
  tab.value = tab.local_mass.front();
  tab.settled = tab.local_mass.back() > 0.0 &&
                tab.local_mass.front() >= 0.5 * tab.local_mass.back();
  return tab;
}

std::vector<double> solution_density(const LogKernelOperator& op, const SolveResult& result,
                                     int i) {
  if (result.status != SolveStatus::Converged)
    throw std::logic_error("solution_density requires a converged result");
  const auto& wf = op.weight_field(i);
  const int n = op.exponent();
  std::vector<double> d(op.grid().size());
  for (std::size_t k = 0; k < d.size(); ++k)
    d[k] = std::exp(wf.log_kbar[k] + n * (result.v.comp[i][k] + result.c[i]));
  return d;
}

std::vector<double> psi_density(const LogKernelOperator& op, const SolveResult& result, int i) {
  const auto& wf = op.weight_field(i);
  const int n = op.exponent();
  const double t = result.history.empty() ? 1.0 : result.history.back().t;
  const double shift = result.c.empty() ? 0.0 : result.c[i] + std::log(t) / n;
  std::vector<double> d(op.grid().size());
  for (std::size_t k = 0; k < d.size(); ++k)
    d[k] = std::exp(wf.log_kbar[k] + n * (result.v.comp[i][k] + shift));
  return d;
}

DiagnosticsReport diagnose(const LogKernelOperator& op, const SolveResult& result) {
  DiagnosticsReport rep;
  const int nc = op.components();
  rep.beta_farfield = result.beta_farfield;
  rep.converged = result.status == SolveStatus::Converged;
  const auto& grid = op.grid();
  const auto& sources = op.problem().sources.points;

  // radii for local masses: from just above the patch core scale up to half
  // the minimum source separation (or a unit ball when there is one source)
  auto sigma_radii = [&](int patch) {
    double rho = patch >= 0 && patch < static_cast<int>(grid.patches.size())
                     ? grid.patches[patch].rho
                     : 0.25;
    std::vector<double> radii;
    for (double f : {0.25, 0.5, 1.0, 2.0}) radii.push_back(f * rho);
    return radii;
  };

  for (int i = 0; i < nc; ++i) {
    const std::vector<double> dens =
        rep.converged ? solution_density(op, result, i) : psi_density(op, result, i);
    std::vector<SigmaTable> tabs;
    for (std::size_t l = 0; l < sources.size(); ++l)
      tabs.push_back(sigma_estimate(grid, op.weight_field(i).weights, dens, sources[l],
                                    sigma_radii(static_cast<int>(l))));
    rep.per_source_sigma.push_back(std::move(tabs));
  }

  if (!rep.converged) return rep;

  rep.mass_targets = result.target_mass;
  if (nc == 2)
    for (std::size_t k = 0; k < grid.size(); ++k)
      rep.component_symmetry_gap = std::max(
          rep.component_symmetry_gap, std::abs(result.u.comp[0][k] - result.u.comp[1][k]));
  for (int i = 0; i < nc; ++i) {
    const double m = component_mass(op, result, i);
    rep.masses.push_back(m);
    rep.mass_residuals.push_back(std::abs(m - result.target_mass[i]) / result.target_mass[i]);
    rep.slopes.push_back(slope_fit_default(grid, result.u.comp[i]));
  }

  // Kelvin involution sampled through the evaluable solution
  {
    double err = 0.0;
    std::vector<std::vector<double>> pts, pts_rt;
    for (std::size_t i = 0; i < grid.size(); i += std::max<std::size_t>(1, grid.size() / 24)) {
      const double r = grid.radius(i);
      if (r < 0.2 || r > grid.split_radius) continue;
      pts.push_back(grid.point(i));
      pts_rt.push_back(kelvin_point(kelvin_point(grid.point(i))));
    }
    if (!pts.empty()) {
      const auto a = op.eval_solution_at(result.v, 0, pts);
      const auto b = op.eval_solution_at(result.v, 0, pts_rt);
      for (std::size_t k = 0; k < a.size(); ++k) err = std::max(err, std::abs(a[k] - b[k]));
    }
    rep.kelvin_roundtrip_error = err;
  }
  return rep;
}

}  // namespace stoda
