#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace stoda {

// A singular-source configuration: m distinct points in R^n with one weight
// row per component.  Two components means the SU(3) Toda system (n must be
// 2); one component is the scalar Liouville problem in R^n.
struct SourceSet {
  int dimension = 2;
  std::vector<std::vector<double>> points;   // m points, each of size `dimension`
  std::vector<std::vector<double>> weights;  // components x m, entries in [0,1)

  int num_components() const { return static_cast<int>(weights.size()); }
  int num_sources() const { return static_cast<int>(points.size()); }
  bool toda() const { return num_components() == 2; }

  double min_pairwise_distance() const;

  // Throws ConfigError when an invariant fails (duplicate points, weights
  // outside [0,1), Toda with n != 2, ragged rows).
  void validate() const;
};

// Far-field exponents and normalized masses derived from the weights.
struct DerivedExponents {
  std::vector<double> beta;         // beta_i = 2 - sum_l beta_{i,l}
  std::vector<double> beta_bar;     // Toda: (2 beta_i + beta_{3-i})/3; scalar: beta
  std::vector<double> target_mass;  // Toda: 2 pi beta_bar_i; scalar: beta * gamma_n
};

DerivedExponents derived_exponents(const SourceSet& s);

// One strict-inequality condition, kept as signed margins so callers can see
// how close an input sits to the boundary.  `holds` is a strict sign test on
// every margin; `indeterminate` flags any margin within 1e-12 of zero.
struct Condition {
  bool applicable = false;
  bool holds = false;
  bool indeterminate = false;
  std::vector<double> margins;
};

// A1)-A6) of the scalar 7-weight family.  A1 and A4 are equalities and store
// the signed residual LHS - 2; they hold when |residual| <= 1e-12.
struct AssumptionsA {
  bool applicable = false;
  std::array<bool, 6> holds{};
  std::array<double, 6> margins{};  // A6 stores min over its three clauses
  bool all() const;
};

struct ConditionReport {
  Condition luo_tian;        // (cond-beta), scalar mode
  Condition toda_existence;  // (cond-beta-toda), Toda mode
  Condition beta_like;       // (cond-beta-like), Toda mode
  Condition barbeta_form;    // (barbeta), Toda mode
  AssumptionsA assumptions;  // scalar m=7, or a Toda matrix with the split layout
};

// Evaluates every condition applicable to `s`.  `tolerance` shifts the strict
// sign test (margin > tolerance); the default 0 matches the paper's strict
// inequalities.
ConditionReport check_conditions(const SourceSet& s, double tolerance = 0.0);

AssumptionsA assumptions_A(const std::vector<double>& beta7);

// The explicit epsilon-family of weights used by the non-existence results.
struct CounterexampleFamily {
  double epsilon = 0.0;
  std::vector<double> beta7;                 // beta_1..beta_7
  std::vector<std::vector<double>> weights;  // 2 x 7 split assignment
};

// Builds the epsilon-family for eps in (0, 2/9):
//   beta_1 = 1-eps, beta_2 = beta_3 = 1/2-eps, beta_4 = 3 eps/2,
//   beta_5 = 1-5 eps/2, beta_6 = beta_7 = (1+eps)/2,
// with component 1 carrying beta_1..beta_4 and component 2 carrying
// beta_5..beta_7.  Asserts A1-A6 and (cond-beta-like) hold and
// (cond-beta-toda) fails; throws ConfigError for eps outside the interval.
CounterexampleFamily build_counterexample_family(double epsilon);

// True when a 2 x 7 weight matrix has the split sparsity of the family
// (component 1 zero on sources 5..7, component 2 zero on 1..4).
std::optional<std::vector<double>> split_family_weights(const std::vector<std::vector<double>>& w);

// What the fixed-point solver actually consumes: a source set plus two
// validation-only extensions.  `origin_alpha` multiplies the weight by
// |x|^{n alpha} (alpha > -1), the single-source classification setting.
// `farfield_exponent` overrides the natural scalar exponent 2 + alpha -
// sum(beta); the non-existence probes prescribe 2*beta_4 this way.  Neither
// extension applies in Toda mode.
struct ProblemSpec {
  SourceSet sources;
  double origin_alpha = 0.0;
  std::optional<double> farfield_exponent;

  void validate() const;
  int dim() const { return sources.dimension; }
  int components() const { return sources.num_components(); }

  // Far-field exponent beta_i of each component.
  std::vector<double> farfield() const;
  // Normalization targets: 2 pi bar-beta_i (Toda) or beta gamma_n (scalar).
  std::vector<double> target_masses() const;
  // Patch centers: the sources, plus the origin when origin_alpha != 0.
  std::vector<std::vector<double>> patch_centers() const;
  // Singular exponent of component i at each patch center.
  std::vector<double> patch_exponents(int i) const;
};

}  // namespace stoda
