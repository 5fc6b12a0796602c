#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace stoda {

// Resolution knobs for the two-chart quadrature.  `refined(k)` halves all
// spacings k times (counts double, geometric ratios take square roots), which
// is what the CLI --refine flag applies.
struct GridConfig {
  int inner_radial = 24;        // uniform radial cells on [0, r_uniform]
  int angular = 64;             // azimuth sectors (background and outer chart)
  int polar = 0;                // polar count for dim >= 3; 0 means angular/2
  double radial_growth = 1.12;  // geometric ring growth beyond r_uniform
  int radial_gauss = 3;         // Gauss points per background/outer radial cell
  int patch_gauss = 2;          // Gauss points per patch radial cell
  int patch_levels = 20;        // geometric radial levels per source patch
  int patch_sectors = 24;       // azimuth sectors per patch
  double patch_grading = 0.7;   // geometric ratio q of patch levels
  double patch_radius_cap = 0.5;
  double split_radius = 0.0;    // 0 -> 4 * max(1, max |P_l|)
  int outer_levels = 14;        // Kelvin-chart radial cells
  double outer_grading = 0.75;
  int refine = 0;

  GridConfig refined(int k) const;
};

enum class Chart : std::uint8_t { Inner = 0, Outer = 1, Patch = 2 };

// One radial level of a source patch; node indices are global.  Rings with
// `corrected` set lie inside the chi == 1 core and take exact-moment weight
// corrections per singular exponent (see corrected_weights).
struct PatchRing {
  std::size_t begin = 0;
  std::size_t count = 0;
  double r_in = 0.0;
  double r_out = 0.0;
  bool corrected = false;
};

struct PatchLayout {
  std::vector<double> center;
  double rho = 0.0;       // blend ends here (chi = 0 outside)
  double rho_core = 0.0;  // chi = 1 inside (rho / 2)
  std::vector<PatchRing> rings;
};

// Two-chart quadrature of R^n: a polar/spherical grid on B_{R_split} (inner
// chart), the Kelvin image x = y/|y|^2 of a polar grid on B_{1/R_split}
// (outer chart, measure factor |y|^{-2n} folded into the weights), and
// radially graded polar patches around each singular source.  Patches blend
// into the background through a C^3 partition of unity, so no seam gaps or
// overlaps occur; background nodes inside a patch core are dropped.
struct QuadratureGrid {
  int dim = 2;
  double split_radius = 0.0;
  double r_uniform = 0.0;
  std::vector<std::vector<double>> coords;  // dim arrays, length = size()
  std::vector<double> w;                    // effective measure weights
  std::vector<double> r2;                   // |x|^2 per node
  std::vector<Chart> chart;
  std::vector<int> patch_of;  // -1 for background/outer nodes
  std::vector<PatchLayout> patches;

  std::size_t size() const { return w.size(); }
  std::vector<double> point(std::size_t i) const;
  double radius(std::size_t i) const;

  // Plain quadrature sum w . f of node values.
  double integrate(const std::vector<double>& f) const;

  // Weights corrected so that an integrand carrying |x - P_l|^{-dim * beta_l}
  // near patch l is integrated with the exact radial moment on each core
  // ring (the leading singular part becomes exact cell by cell).
  // `beta_per_patch` has one exponent per patch, entries in (-1, 1).
  std::vector<double> corrected_weights(const std::vector<double>& beta_per_patch) const;

  // Radius of the equal-volume ball of node i's cell, used for the analytic
  // self-cell average of the log kernel.
  double equal_volume_radius(std::size_t i) const;
};

// Builds the grid.  `patch_centers` lists the singular points (sources, plus
// the origin when an |x|^{n alpha} factor is present).  Throws GridError when
// two centers are too close to fit non-overlapping patches.
QuadratureGrid build_grid(int dim, const std::vector<std::vector<double>>& patch_centers,
                          const GridConfig& cfg);

// A standalone graded patch rule over B_rho(center), no blend taper: every
// ring is moment-correctable.  Quadrature test bed for the singular measure.
QuadratureGrid build_patch_rule(int dim, const std::vector<double>& center, double rho,
                                const GridConfig& cfg);

}  // namespace stoda
