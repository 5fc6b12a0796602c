#include "stoda/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stoda/constants.hpp"
#include "stoda/errors.hpp"
#include "stoda/quadrature.hpp"

namespace stoda {

namespace {

// C^3 ramp: 0 at t<=0, 1 at t>=1, three vanishing derivatives at both ends.
double smoothstep3(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double t2 = t * t;
  return t2 * t2 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

// chi_l of the partition of unity: 1 on the patch core, 0 outside the patch.
double patch_chi(double dist, double rho_core, double rho) {
  return 1.0 - smoothstep3((dist - rho_core) / (rho - rho_core));
}

struct RingBoundaries {
  std::vector<double> b;  // ascending, b.front() = 0, b.back() = R
};

RingBoundaries inner_boundaries(double r_uniform, double R, int n_uniform, double growth) {
  RingBoundaries rb;
  rb.b.push_back(0.0);
  double h = r_uniform / n_uniform;
  for (int i = 1; i <= n_uniform; ++i) rb.b.push_back(r_uniform * i / n_uniform);
  while (rb.b.back() < R * (1.0 - 1e-12)) {
    h *= growth;
    double nxt = rb.b.back() + h;
    if (nxt > R - 0.3 * h) nxt = R;  // absorb the sliver into the last cell
    rb.b.push_back(nxt);
  }
  rb.b.back() = R;
  return rb;
}

double norm_of(const std::vector<double>& p) {
  double s = 0.0;
  for (double c : p) s += c * c;
  return std::sqrt(s);
}

// Graded polar levels around `center`, innermost cell handled as a singular
// core with exact plain moment.  With `taper` the outer half carries the
// partition-of-unity factor chi; without it every ring is correctable.
void append_patch(QuadratureGrid& g, const std::vector<double>& center, double rho,
                  const GridConfig& cfg, bool taper, const Rule1D& gl_patch,
                  const SphereRule& ang_patch) {
  const int dim = g.dim;
  PatchLayout patch;
  patch.center = center;
  patch.rho = rho;
  patch.rho_core = taper ? 0.5 * rho : rho;
  std::vector<double> x(dim);

  auto push_node = [&](double weight, int l) {
    double x2 = 0.0;
    for (int c = 0; c < dim; ++c) {
      g.coords[c].push_back(x[c]);
      x2 += x[c] * x[c];
    }
    g.w.push_back(weight);
    g.r2.push_back(x2);
    g.chart.push_back(Chart::Patch);
    g.patch_of.push_back(l);
  };
  const int l = static_cast<int>(g.patches.size());

  std::vector<double> rb;  // descending level boundaries
  for (int k = 0; k <= cfg.patch_levels; ++k) rb.push_back(rho * std::pow(cfg.patch_grading, k));
  for (int k = 0; k < cfg.patch_levels; ++k) {
    const double b = rb[k], a = rb[k + 1];
    PatchRing ring;
    ring.begin = g.size();
    ring.r_in = a;
    ring.r_out = b;
    ring.corrected = b <= patch.rho_core * (1.0 + 1e-12);
    for (int q = 0; q < cfg.patch_gauss; ++q) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gl_patch.x[q];
      const double wr = 0.5 * (b - a) * gl_patch.w[q] * std::pow(r, dim - 1);
      const double chi =
          (taper && r > patch.rho_core) ? patch_chi(r, patch.rho_core, patch.rho) : 1.0;
      if (chi <= 0.0) continue;
      for (std::size_t j = 0; j < ang_patch.size(); ++j) {
        for (int c = 0; c < dim; ++c) x[c] = center[c] + r * ang_patch.nodes[j][c];
        push_node(wr * ang_patch.w[j] * chi, l);
      }
    }
    ring.count = g.size() - ring.begin;
    patch.rings.push_back(ring);
  }
  // singular core cell [0, r_L]
  {
    const double rl = rb.back();
    PatchRing ring;
    ring.begin = g.size();
    ring.r_in = 0.0;
    ring.r_out = rl;
    ring.corrected = true;
    const double rc = rl * dim / (dim + 1.0);
    const double wr = std::pow(rl, dim) / dim;
    for (std::size_t j = 0; j < ang_patch.size(); ++j) {
      for (int c = 0; c < dim; ++c) x[c] = center[c] + rc * ang_patch.nodes[j][c];
      push_node(wr * ang_patch.w[j], l);
    }
    ring.count = g.size() - ring.begin;
    patch.rings.push_back(ring);
  }
  g.patches.push_back(std::move(patch));
}

}  // namespace

GridConfig GridConfig::refined(int k) const {
  GridConfig c = *this;
  for (int i = 0; i < k; ++i) {
    c.inner_radial *= 2;
    c.angular *= 2;
    if (c.polar > 0) c.polar *= 2;
    c.radial_growth = std::sqrt(c.radial_growth);
    c.patch_levels *= 2;
    c.patch_sectors *= 2;
    c.patch_grading = std::sqrt(c.patch_grading);
    c.outer_levels *= 2;
    c.outer_grading = std::sqrt(c.outer_grading);
  }
  c.refine = 0;
  return c;
}

std::vector<double> QuadratureGrid::point(std::size_t i) const {
  std::vector<double> p(dim);
  for (int k = 0; k < dim; ++k) p[k] = coords[k][i];
  return p;
}

double QuadratureGrid::radius(std::size_t i) const { return std::sqrt(r2[i]); }

double QuadratureGrid::integrate(const std::vector<double>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += w[i] * f[i];
  return s;
}

double QuadratureGrid::equal_volume_radius(std::size_t i) const {
  // vol(B_R) = |S^{n-1}| R^n / n
  const double omega = sphere_measure(dim - 1);
  return std::pow(std::max(w[i], 0.0) * dim / omega, 1.0 / dim);
}

std::vector<double> QuadratureGrid::corrected_weights(
    const std::vector<double>& beta_per_patch) const {
  if (beta_per_patch.size() != patches.size())
    throw std::invalid_argument("corrected_weights: one exponent per patch required");
  std::vector<double> cw = w;
  const double omega = sphere_measure(dim - 1);
  for (std::size_t l = 0; l < patches.size(); ++l) {
    const double beta = beta_per_patch[l];
    if (beta == 0.0) continue;
    const double p = dim * (1.0 - beta);  // radial moment exponent, > 0 for beta < 1
    const auto& patch = patches[l];
    for (const auto& ring : patch.rings) {
      if (!ring.corrected) continue;
      const double exact =
          omega * (std::pow(ring.r_out, p) - std::pow(ring.r_in, p)) / p;
      double quad = 0.0;
      for (std::size_t k = ring.begin; k < ring.begin + ring.count; ++k) {
        double d2 = 0.0;
        for (int c = 0; c < dim; ++c) {
          const double d = coords[c][k] - patch.center[c];
          d2 += d * d;
        }
        quad += w[k] * std::pow(d2, -0.5 * dim * beta);
      }
      if (!(quad > 0.0) || !std::isfinite(quad)) continue;
      const double lambda = exact / quad;
      for (std::size_t k = ring.begin; k < ring.begin + ring.count; ++k) cw[k] *= lambda;
    }
  }
  return cw;
}

QuadratureGrid build_grid(int dim, const std::vector<std::vector<double>>& centers,
                          const GridConfig& cfg_in) {
  if (dim < 2) throw GridError("build_grid: dimension must be >= 2");
  const GridConfig cfg = cfg_in.refine > 0 ? cfg_in.refined(cfg_in.refine) : cfg_in;
  if (cfg.inner_radial < 2 || cfg.angular < 8 || cfg.patch_levels < 2 ||
      cfg.patch_sectors < 8 || cfg.outer_levels < 2)
    throw GridError("build_grid: resolution parameters too small");
  if (!(cfg.patch_grading > 0.0 && cfg.patch_grading < 1.0) ||
      !(cfg.outer_grading > 0.0 && cfg.outer_grading < 1.0) || !(cfg.radial_growth >= 1.0))
    throw GridError("build_grid: grading ratios out of range");

  QuadratureGrid g;
  g.dim = dim;

  double max_center = 0.0;
  for (const auto& c : centers) {
    if (c.size() != static_cast<std::size_t>(dim))
      throw GridError("build_grid: center of wrong dimension");
    max_center = std::max(max_center, norm_of(c));
  }
  const double R = cfg.split_radius > 0.0 ? cfg.split_radius : 4.0 * std::max(1.0, max_center);
  if (R <= max_center) throw GridError("build_grid: split radius must exceed all sources");
  g.split_radius = R;
  g.r_uniform = std::min(2.0, 0.5 * R);

  const RingBoundaries rings = inner_boundaries(g.r_uniform, R, cfg.inner_radial, cfg.radial_growth);
  const int polar = cfg.polar > 0 ? cfg.polar : std::max(4, cfg.angular / 2);
  const SphereRule ang = sphere_rule(dim, cfg.angular, polar);
  const SphereRule ang_patch =
      sphere_rule(dim, cfg.patch_sectors, std::max(4, cfg.patch_sectors / 2));
  const Rule1D gl_bg = gauss_legendre(cfg.radial_gauss);
  const Rule1D gl_patch = gauss_legendre(cfg.patch_gauss);
  const double omega = sphere_measure(dim - 1);

  // Patch radii: half the distance to the nearest other center, capped by the
  // seam, and at least twice the local background cell size so the blend
  // annulus stays resolved on both sides (far-out sources sit in coarse
  // background cells).
  const std::size_t np = centers.size();
  std::vector<double> rho(np);
  auto local_cell_size = [&](double r) {
    double h = rings.b[1];
    for (std::size_t i = 0; i + 1 < rings.b.size(); ++i)
      if (r >= rings.b[i] && r <= rings.b[i + 1]) {
        h = rings.b[i + 1] - rings.b[i];
        break;
      }
    const double arc = (dim == 2) ? 2.0 * kPi * r / cfg.angular : kPi * r / polar;
    return std::max(h, arc);
  };
  for (std::size_t l = 0; l < np; ++l) {
    double mind = std::numeric_limits<double>::infinity();
    std::size_t other = l;
    for (std::size_t m = 0; m < np; ++m) {
      if (m == l) continue;
      double d2 = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double d = centers[l][c] - centers[m][c];
        d2 += d * d;
      }
      if (std::sqrt(d2) < mind) {
        mind = std::sqrt(d2);
        other = m;
      }
    }
    const double rl = norm_of(centers[l]);
    double r = std::max(cfg.patch_radius_cap, 2.0 * local_cell_size(rl));
    r = std::min(r, 0.5 * (R - rl));
    if (np > 1) r = std::min(r, 0.5 * mind);
    if (!(r > 1e-9 * std::max(1.0, R)))
      throw GridError("build_grid: sources " + std::to_string(l) + " and " +
                      std::to_string(other) + " are too close for a quadrature patch");
    rho[l] = r;
  }

  auto push_node = [&](const std::vector<double>& x, double weight, Chart ch, int patch) {
    double x2 = 0.0;
    for (int c = 0; c < dim; ++c) {
      g.coords[c].push_back(x[c]);
      x2 += x[c] * x[c];
    }
    g.w.push_back(weight);
    g.r2.push_back(x2);
    g.chart.push_back(ch);
    g.patch_of.push_back(patch);
  };
  g.coords.resize(dim);

  // chi_0 factor of a background node: zero inside any patch core (node is
  // dropped), tapering factor inside a blend annulus, 1 elsewhere.
  auto background_factor = [&](const std::vector<double>& x) -> double {
    double f = 1.0;
    for (std::size_t l = 0; l < np; ++l) {
      double d2 = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double d = x[c] - centers[l][c];
        d2 += d * d;
      }
      const double d = std::sqrt(d2);
      if (d < 0.5 * rho[l]) return 0.0;
      if (d < rho[l]) f *= 1.0 - patch_chi(d, 0.5 * rho[l], rho[l]);
    }
    return f;
  };

  std::vector<double> x(dim);

  // --- inner chart ---
  for (std::size_t i = 0; i + 1 < rings.b.size(); ++i) {
    const double a = rings.b[i], b = rings.b[i + 1];
    for (int q = 0; q < cfg.radial_gauss; ++q) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gl_bg.x[q];
      const double wr = 0.5 * (b - a) * gl_bg.w[q] * std::pow(r, dim - 1);
      for (std::size_t j = 0; j < ang.size(); ++j) {
        for (int c = 0; c < dim; ++c) x[c] = r * ang.nodes[j][c];
        const double f = background_factor(x);
        if (f <= 0.0) continue;
        push_node(x, wr * ang.w[j] * f, Chart::Inner, -1);
      }
    }
  }

  // --- outer chart (Kelvin image of B_{1/R}) ---
  {
    const double y0 = 1.0 / R;
    std::vector<double> yb;
    yb.push_back(y0);
    for (int k = 1; k <= cfg.outer_levels; ++k) yb.push_back(y0 * std::pow(cfg.outer_grading, k));
    for (int k = 0; k < cfg.outer_levels; ++k) {
      const double a = yb[k + 1], b = yb[k];  // a < b
      for (int q = 0; q < cfg.radial_gauss; ++q) {
        const double y = 0.5 * (a + b) + 0.5 * (b - a) * gl_bg.x[q];
        const double wy = 0.5 * (b - a) * gl_bg.w[q] * std::pow(y, dim - 1);
        const double jac = std::pow(y, -2 * dim);
        for (std::size_t j = 0; j < ang.size(); ++j) {
          for (int c = 0; c < dim; ++c) x[c] = ang.nodes[j][c] / y;  // x = y_vec/|y|^2
          push_node(x, wy * ang.w[j] * jac, Chart::Outer, -1);
        }
      }
    }
    // core cell [0, y_L]: one node per direction at the measure centroid
    const double yl = yb.back();
    const double yc = yl * dim / (dim + 1.0);
    const double wy = std::pow(yl, dim) / dim;
    const double jac = std::pow(yc, -2 * dim);
    for (std::size_t j = 0; j < ang.size(); ++j) {
      for (int c = 0; c < dim; ++c) x[c] = ang.nodes[j][c] / yc;
      push_node(x, wy * ang.w[j] * jac, Chart::Outer, -1);
    }
  }

  // --- source patches ---
  for (std::size_t l = 0; l < np; ++l)
    append_patch(g, centers[l], rho[l], cfg, /*taper=*/true, gl_patch, ang_patch);

  return g;
}

QuadratureGrid build_patch_rule(int dim, const std::vector<double>& center, double rho,
                                const GridConfig& cfg_in) {
  const GridConfig cfg = cfg_in.refine > 0 ? cfg_in.refined(cfg_in.refine) : cfg_in;
  QuadratureGrid g;
  g.dim = dim;
  g.coords.resize(dim);
  const Rule1D gl_patch = gauss_legendre(cfg.patch_gauss);
  const SphereRule ang_patch =
      sphere_rule(dim, cfg.patch_sectors, std::max(4, cfg.patch_sectors / 2));
  append_patch(g, center, rho, cfg, /*taper=*/false, gl_patch, ang_patch);
  return g;
}

}  // namespace stoda
