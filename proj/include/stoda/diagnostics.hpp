#pragma once

#include <functional>
#include <vector>

#include "stoda/operator.hpp"

namespace stoda {

// Least-squares fit of annulus-averaged field values against -log|x|:
// on a far field u = -beta log|x| + O(1) the slope recovers beta and the
// spread bounds the O(1) remainder's variation.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double spread = 0.0;
  int annuli = 0;
};

SlopeFit slope_fit(const QuadratureGrid& grid, const std::vector<double>& u, double r_lo,
                   double r_hi, int annuli = 6);

// Default far-field window [R_split, 1.5 R_split]: the Kelvin image of the
// outermost chart rings, inside the exact-u0 region and beyond the sources.
SlopeFit slope_fit_default(const QuadratureGrid& grid, const std::vector<double>& u);

// Component mass integral K_i e^{2 u_i} (= Kbar_i e^{n(v_i + c_i)}) of an
// assembled solution, on the component-corrected weights.
double component_mass(const LogKernelOperator& op, const SolveResult& result, int i);

// Pohozaev identity for blow-up values:
//   sigma_1^2 + sigma_2^2 - sigma_1 sigma_2 = sigma_1(1-alpha_1) + sigma_2(1-alpha_2).
double pohozaev_residual(double sigma1, double sigma2, double alpha1, double alpha2);

struct PohozaevCheck {
  double residual = 0.0;
  bool nonzero = false;          // (sigma_1, sigma_2) != (0,0)
  bool dichotomy_holds = false;  // sigma_1 >= 1-alpha_1 or sigma_2 >= 1-alpha_2
};

PohozaevCheck pohozaev_check(double sigma1, double sigma2, double alpha1, double alpha2);

// Inversion x -> x/|x|^2 and the two-point identity
// |x| |y| |x/|x|^2 - y/|y|^2| = |x - y| it satisfies.
std::vector<double> kelvin_point(const std::vector<double>& x);
double kelvin_two_point_gap(const std::vector<double>& x, const std::vector<double>& y);

// Kelvin transform of a callable field:
//   u~(x) = u(x/|x|^2) - beta log|x| + shift,
// the form used to carry far-field concentration to the origin.  beta = 0,
// shift = 0 gives the plain involution.
using FieldEval = std::function<double(const std::vector<double>&)>;
FieldEval kelvin_transform(FieldEval u, double beta, double shift);

// Kbar under inversion: K~(x) = |x|^{-2n} Kbar(x/|x|^2); tends to 1 at the
// origin for weights with the natural far-field decay.
double kelvin_kbar(const ProblemSpec& prob, int component, const std::vector<double>& x);

// Local masses (1/2pi) Int_{B_r(P)} dens around a candidate concentration
// point, one entry per radius (ascending).  `value` is the smallest-radius
// entry; `settled` marks whether it already carries most of the largest-
// radius mass (concentration) rather than vanishing with r.
struct SigmaTable {
  std::vector<double> radius;
  std::vector<double> local_mass;
  double value = 0.0;
  bool settled = false;
};

SigmaTable sigma_estimate(const QuadratureGrid& grid, const std::vector<double>& weights,
                          const std::vector<double>& density, const std::vector<double>& center,
                          std::vector<double> radii);

// Nodewise density K_i e^{2 u_i} of an assembled solution, and the
// homotopy-normalized density Kbar_i e^{2 psi_i} of a non-converged state.
std::vector<double> solution_density(const LogKernelOperator& op, const SolveResult& result, int i);
std::vector<double> psi_density(const LogKernelOperator& op, const SolveResult& result, int i);

struct DiagnosticsReport {
  std::vector<double> masses;
  std::vector<double> mass_targets;
  std::vector<double> mass_residuals;  // relative
  std::vector<double> beta_farfield;
  std::vector<SlopeFit> slopes;
  std::vector<std::vector<SigmaTable>> per_source_sigma;  // [component][source]
  double kelvin_roundtrip_error = 0.0;
  double component_symmetry_gap = 0.0;  // max |u_1 - u_2| (Toda only)
  bool converged = false;
};

// Full post-solve diagnostics (masses, slopes, per-source local masses,
// Kelvin involution check).  For non-converged results only the sigma tables
// of the psi-density are populated.
DiagnosticsReport diagnose(const LogKernelOperator& op, const SolveResult& result);

}  // namespace stoda
