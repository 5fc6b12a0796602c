#include "stoda/operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stoda/base_profile.hpp"
#include "stoda/constants.hpp"
#include "stoda/conv_kernel.hpp"
#include "stoda/errors.hpp"

namespace stoda {

FieldPair FieldPair::zeros(int components, std::size_t n) {
  FieldPair f;
  f.comp.assign(components, std::vector<double>(n, 0.0));
  return f;
}

double FieldPair::sup_norm() const {
  double s = 0.0;
  for (const auto& c : comp)
    for (double x : c) s = std::max(s, std::abs(x));
  return s;
}

bool FieldPair::finite() const {
  for (const auto& c : comp)
    for (double x : c)
      if (!std::isfinite(x)) return false;
  return true;
}

void IterationConfig::validate() const {
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("iteration: damping must be in (0,1]");
  if (!(tolerance > 0.0)) throw ConfigError("iteration: tolerance must be positive");
  if (max_iterations < 1) throw ConfigError("iteration: max_iterations must be >= 1");
  if (homotopy.empty() || homotopy.back() != 1.0)
    throw ConfigError("iteration: homotopy schedule must end at 1");
  for (std::size_t i = 0; i < homotopy.size(); ++i) {
    if (!(homotopy[i] > 0.0 && homotopy[i] <= 1.0) ||
        (i > 0 && !(homotopy[i] > homotopy[i - 1])))
      throw ConfigError("iteration: homotopy schedule must be strictly increasing in (0,1]");
  }
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::BlowUp: return "BlowUp";
    case SolveStatus::MaxIter: return "MaxIter";
  }
  return "?";
}

LogKernelOperator::LogKernelOperator(const QuadratureGrid& grid, const ProblemSpec& prob,
                                     double log_cap)
    : grid_(&grid), prob_(prob) {
  prob_.validate();
  if (prob_.dim() != grid.dim) throw ConfigError("operator: grid/problem dimension mismatch");
  const int nc = prob_.components();
  for (int i = 0; i < nc; ++i) fields_.push_back(eval_weight_field(grid, prob_, i, log_cap));
  targets_ = prob_.target_masses();
  beta_ff_ = prob_.farfield();
  for (double t : targets_)
    if (!(t > 0.0)) throw ConfigError("operator: target mass must be positive (bar beta > 0)");
  if (nc == 2)
    coupling_ = {2.0, -1.0, -1.0, 2.0};
  else
    coupling_ = {1.0};
  kappa_ = 1.0 / gamma_n(grid.dim);

  const std::size_t n = grid.size();
  sub_.resize(n);
  self_term_.resize(n);
  u0_.resize(n);
  self_index_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sub_[i] = grid.r2[i] > 1.0 ? std::log(grid.r2[i]) : 0.0;
    self_term_[i] = 2.0 * std::log(grid.equal_volume_radius(i)) - 2.0 / grid.dim;
    u0_[i] = BaseProfile::eval_radius(grid.radius(i));
    self_index_[i] = static_cast<std::ptrdiff_t>(i);
  }
}

double normalization_constant_for(double target, double raw_integral, int n) {
  if (!(raw_integral > 0.0) || !std::isfinite(raw_integral))
    throw NumericalError("degenerate field: quadrature of Kbar e^{nv} is not finite positive");
  return std::log(target / raw_integral) / n;
}

double LogKernelOperator::normalization_constant(const std::vector<double>& v_i, int i,
                                                 double* raw_out) const {
  const auto& f = fields_[i];
  std::vector<double> rho(grid_->size());
  const double raw = weighted_exp(f.weights.data(), f.log_kbar.data(), v_i.data(),
                                  static_cast<double>(exponent()), grid_->size(), rho.data());
  if (raw_out) *raw_out = raw;
  return normalization_constant_for(targets_[i], raw, exponent());
}

void LogKernelOperator::densities(const FieldPair& v, std::vector<std::vector<double>>& rho,
                                  std::vector<double>& c, std::vector<double>& raw) const {
  const int nc = components();
  const std::size_t n = grid_->size();
  rho.assign(nc, std::vector<double>(n));
  c.resize(nc);
  raw.resize(nc);
  for (int j = 0; j < nc; ++j) {
    const auto& f = fields_[j];
    raw[j] = weighted_exp(f.weights.data(), f.log_kbar.data(), v.comp[j].data(),
                          static_cast<double>(exponent()), n, rho[j].data());
    c[j] = normalization_constant_for(targets_[j], raw[j], exponent());
    // scaling by target/raw normalizes the mass exactly up to roundoff
    const double scale = targets_[j] / raw[j];
    for (double& x : rho[j]) x *= scale;
  }
}

FieldPair LogKernelOperator::apply(const FieldPair& v, std::vector<double>* c_out,
                                   std::vector<double>* raw_out) const {
  const int nc = components();
  const std::size_t n = grid_->size();
  std::vector<std::vector<double>> rho;
  std::vector<double> c, raw;
  densities(v, rho, c, raw);
  if (c_out) *c_out = c;
  if (raw_out) *raw_out = raw;

  const double* coords[8];
  for (int k = 0; k < grid_->dim; ++k) coords[k] = grid_->coords[k].data();

  std::vector<std::vector<double>> conv(nc, std::vector<double>(n));
  for (int j = 0; j < nc; ++j)
    log_kernel_sum(grid_->dim, coords, rho[j].data(), n, coords, n, sub_.data(),
                   self_index_.data(), self_term_.data(), conv[j].data());

  FieldPair out = FieldPair::zeros(nc, n);
  for (int i = 0; i < nc; ++i) {
    auto& oi = out.comp[i];
    for (int j = 0; j < nc; ++j) {
      const double fac = -0.5 * kappa_ * coupling_[i * nc + j];
      const auto& cj = conv[j];
      for (std::size_t t = 0; t < n; ++t) oi[t] += fac * cj[t];
    }
    const double bi = beta_ff_[i];
    for (std::size_t t = 0; t < n; ++t)
      if (grid_->r2[t] <= 1.0) oi[t] -= bi * u0_[t];
  }
  return out;
}

std::vector<double> LogKernelOperator::eval_image_at(
    const FieldPair& v, int i, const std::vector<std::vector<double>>& points) const {
  const int nc = components();
  const std::size_t n = grid_->size();
  std::vector<std::vector<double>> rho;
  std::vector<double> c, raw;
  densities(v, rho, c, raw);

  const std::size_t np = points.size();
  std::vector<std::vector<double>> tc(grid_->dim, std::vector<double>(np));
  std::vector<double> sub(np);
  std::vector<double> u0p(np);
  for (std::size_t p = 0; p < np; ++p) {
    double r2 = 0.0;
    for (int k = 0; k < grid_->dim; ++k) {
      tc[k][p] = points[p][k];
      r2 += points[p][k] * points[p][k];
    }
    sub[p] = r2 > 1.0 ? std::log(r2) : 0.0;
    u0p[p] = BaseProfile::eval_radius(std::sqrt(r2));
  }
  const double* sc[8];
  const double* tcp[8];
  for (int k = 0; k < grid_->dim; ++k) {
    sc[k] = grid_->coords[k].data();
    tcp[k] = tc[k].data();
  }

  std::vector<double> out(np, 0.0);
  std::vector<double> conv(np);
  for (int j = 0; j < nc; ++j) {
    log_kernel_sum(grid_->dim, sc, rho[j].data(), n, tcp, np, sub.data(), nullptr, nullptr,
                   conv.data());
    const double fac = -0.5 * kappa_ * coupling_[i * nc + j];
    for (std::size_t p = 0; p < np; ++p) out[p] += fac * conv[p];
  }
  for (std::size_t p = 0; p < np; ++p) {
    double r2 = 0.0;
    for (int k = 0; k < grid_->dim; ++k) r2 += points[p][k] * points[p][k];
    if (r2 <= 1.0) out[p] -= beta_ff_[i] * u0p[p];
  }
  return out;
}

std::vector<double> LogKernelOperator::eval_solution_at(
    const FieldPair& v, int i, const std::vector<std::vector<double>>& points) const {
  std::vector<double> vals = eval_image_at(v, i, points);
  const double ci = normalization_constant(v.comp[i], i);
  for (std::size_t p = 0; p < points.size(); ++p) {
    double r2 = 0.0;
    for (int k = 0; k < grid_->dim; ++k) r2 += points[p][k] * points[p][k];
    vals[p] += beta_ff_[i] * BaseProfile::eval_radius(std::sqrt(r2)) + ci;
  }
  return vals;
}

SolveResult solve(const LogKernelOperator& op, const IterationConfig& cfg,
                  const FieldPair* initial) {
  cfg.validate();
  const int nc = op.components();
  const std::size_t n = op.grid().size();
  const double nn = op.exponent();

  SolveResult res;
  res.beta_farfield = op.farfield();
  res.target_mass = op.targets();
  if (initial) {
    if (static_cast<int>(initial->comp.size()) != nc || initial->comp[0].size() != n)
      throw std::invalid_argument("solve: initial field does not match the grid");
    res.v = *initial;
  } else {
    res.v = FieldPair::zeros(nc, n);
  }

  // One-mode Aitken stabilizer for the scale-invariant cases: zero- and
  // single-source problems carry a neutral dilation direction at t = 1 along
  // which plain damped Picard drifts without converging.  When successive
  // update vectors become collinear with Rayleigh quotient mu near 1, jump
  // to the extrapolated fixed point along that direction.
  std::vector<double> d_prev;
  double d_prev_norm2 = 0.0;
  int cooloff = 0;

  for (double t : cfg.homotopy) {
    double theta = cfg.damping;
    double prev_residual = std::numeric_limits<double>::infinity();
    bool stage_done = false;
    d_prev.clear();
    d_prev_norm2 = 0.0;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
      std::vector<double> c, raw;
      FieldPair image = op.apply(res.v, &c, &raw);

      double residual = 0.0;
      for (int i = 0; i < nc; ++i)
        for (std::size_t k = 0; k < n; ++k)
          residual = std::max(residual, std::abs(t * image.comp[i][k] - res.v.comp[i][k]));
      if (!std::isfinite(residual)) throw NumericalError("iteration produced non-finite fields");

      // psi_i = v_i + c_i + (1/n) log t, the homotopy-normalized field the
      // blow-up detector watches
      std::vector<double> sup_psi(nc);
      std::size_t argmax_node = 0;
      int argmax_comp = 0;
      double psi_max = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < nc; ++i) {
        const double shift = c[i] + std::log(t) / nn;
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
          const double p = res.v.comp[i][k] + shift;
          if (p > m) m = p;
          if (p > psi_max) {
            psi_max = p;
            argmax_node = k;
            argmax_comp = i;
          }
        }
        sup_psi[i] = m;
      }

      res.c = c;
      res.history.push_back({t, iter, theta, residual, raw, c, sup_psi});

      if (psi_max > cfg.blowup_threshold) {
        res.status = SolveStatus::BlowUp;
        res.blowup_node = argmax_node;
        res.blowup_component = argmax_comp;
        return res;
      }
      if (residual <= cfg.tolerance) {
        stage_done = true;
        break;
      }
      if (residual > prev_residual * (1.0 + 1e-12))
        theta = std::max(cfg.damping_min, 0.5 * theta);
      else
        theta = std::min(cfg.damping, 1.25 * theta);
      prev_residual = residual;

      std::vector<double> d(nc * n);
      for (int i = 0; i < nc; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          const double step = theta * (t * image.comp[i][k] - res.v.comp[i][k]);
          d[i * n + k] = step;
          res.v.comp[i][k] += step;
        }

      if (cooloff > 0) {
        --cooloff;
        d_prev = std::move(d);
        d_prev_norm2 = 0.0;
        for (double x : d_prev) d_prev_norm2 += x * x;
        continue;
      }
      if (!d_prev.empty() && d_prev_norm2 > 0.0) {
        double dot = 0.0, n2 = 0.0, dsup = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) {
          dot += d[k] * d_prev[k];
          n2 += d[k] * d[k];
          dsup = std::max(dsup, std::abs(d[k]));
        }
        const double mu = dot / d_prev_norm2;
        const double corr2 = n2 > 0.0 ? dot * dot / (n2 * d_prev_norm2) : 0.0;
        if (mu > 0.97 && mu < 1.03 && std::abs(1.0 - mu) > 1e-7 && corr2 > 0.9999) {
          double kappa = std::clamp(mu / (1.0 - mu), -2e4, 2e4);
          if (std::abs(kappa) * dsup > 0.3) kappa = std::copysign(0.3 / dsup, kappa);
          for (int i = 0; i < nc; ++i)
            for (std::size_t k = 0; k < n; ++k) res.v.comp[i][k] += kappa * d[i * n + k];
          cooloff = 6;
          d_prev.clear();
          d_prev_norm2 = 0.0;
          prev_residual = std::numeric_limits<double>::infinity();
          continue;
        }
      }
      d_prev = std::move(d);
      d_prev_norm2 = 0.0;
      for (double x : d_prev) d_prev_norm2 += x * x;
    }
    if (!stage_done) {
      res.status = SolveStatus::MaxIter;
      return res;
    }
  }
  res.status = SolveStatus::Converged;
  assemble_solution(op, res);
  return res;
}

void assemble_solution(const LogKernelOperator& op, SolveResult& result) {
  if (result.status != SolveStatus::Converged)
    throw std::logic_error("assemble_solution requires a converged result");
  const int nc = op.components();
  const std::size_t n = op.grid().size();
  result.u = FieldPair::zeros(nc, n);
  for (int i = 0; i < nc; ++i) {
    const double bi = result.beta_farfield[i];
    const double ci = result.c[i];
    for (std::size_t k = 0; k < n; ++k)
      result.u.comp[i][k] =
          result.v.comp[i][k] + bi * BaseProfile::eval_radius(op.grid().radius(k)) + ci;
  }
}

}  // namespace stoda
