#include "stoda/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stoda/constants.hpp"
#include "stoda/errors.hpp"

namespace stoda {

namespace {

constexpr double kBoundaryBand = 1e-12;

void finalize(Condition& c, double tol) {
  c.applicable = true;
  c.holds = std::all_of(c.margins.begin(), c.margins.end(),
                        [tol](double m) { return m > tol; });
  c.indeterminate = std::any_of(c.margins.begin(), c.margins.end(),
                                [](double m) { return std::abs(m) <= kBoundaryBand; });
}

double row_sum(const std::vector<double>& row) {
  double s = 0.0;
  for (double x : row) s += x;
  return s;
}

}  // namespace

double SourceSet::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      double d2 = 0.0;
      for (int k = 0; k < dimension; ++k) {
        const double d = points[a][k] - points[b][k];
        d2 += d * d;
      }
      best = std::min(best, std::sqrt(d2));
    }
  }
  return best;
}

void SourceSet::validate() const {
  if (dimension < 2) throw ConfigError("SourceSet: dimension must be >= 2");
  const int nc = num_components();
  if (nc != 1 && nc != 2) throw ConfigError("SourceSet: expected 1 or 2 weight rows");
  if (nc == 2 && dimension != 2)
    throw ConfigError("SourceSet: the Toda system requires dimension 2");
  const std::size_t m = points.size();
  for (const auto& p : points)
    if (p.size() != static_cast<std::size_t>(dimension))
      throw ConfigError("SourceSet: point of wrong dimension");
  for (const auto& row : weights) {
    if (row.size() != m) throw ConfigError("SourceSet: weight row length != number of points");
    for (double b : row)
      if (!(b >= 0.0 && b < 1.0)) throw ConfigError("SourceSet: weights must lie in [0,1)");
  }
  if (m >= 2 && !(min_pairwise_distance() > 0.0))
    throw ConfigError("SourceSet: points must be pairwise distinct");
}

DerivedExponents derived_exponents(const SourceSet& s) {
  s.validate();
  DerivedExponents d;
  const int nc = s.num_components();
  d.beta.resize(nc);
  d.beta_bar.resize(nc);
  d.target_mass.resize(nc);
  for (int i = 0; i < nc; ++i) d.beta[i] = 2.0 - row_sum(s.weights[i]);
  if (nc == 2) {
    for (int i = 0; i < 2; ++i) {
      d.beta_bar[i] = (2.0 * d.beta[i] + d.beta[1 - i]) / 3.0;
      d.target_mass[i] = 2.0 * kPi * d.beta_bar[i];
    }
  } else {
    d.beta_bar[0] = d.beta[0];
    d.target_mass[0] = d.beta[0] * gamma_n(s.dimension);
  }
  return d;
}

bool AssumptionsA::all() const {
  return applicable && std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

AssumptionsA assumptions_A(const std::vector<double>& b) {
  AssumptionsA a;
  if (b.size() != 7) return a;
  a.applicable = true;
  // A1, A4 are exact balances; the margin is the signed residual.
  const double a1 = b[3] + (b[0] + b[1] + b[2] + b[3]) - 2.0;
  const double a4 = b[3] + (b[4] + b[5] + b[6]) - 2.0;
  a.margins[0] = a1;
  a.holds[0] = std::abs(a1) <= kBoundaryBand;
  a.margins[1] = b[0] - (b[1] + b[2]);  // A2: beta_2 + beta_3 < beta_1
  a.holds[1] = a.margins[1] > 0.0;
  a.margins[2] = 1.0 / 3.0 - b[3];  // A3
  a.holds[2] = a.margins[2] > 0.0;
  a.margins[3] = a4;
  a.holds[3] = std::abs(a4) <= kBoundaryBand;
  a.margins[4] = 1.0 - (b[3] + b[4]);  // A5
  a.holds[4] = a.margins[4] > 0.0;
  // A6: beta_4 + beta_1 > 1 and beta_4 + beta_l < 1 for l = 2,3.
  const double m61 = b[3] + b[0] - 1.0;
  const double m62 = 1.0 - (b[3] + b[1]);
  const double m63 = 1.0 - (b[3] + b[2]);
  a.margins[5] = std::min({m61, m62, m63});
  a.holds[5] = a.margins[5] > 0.0;
  return a;
}

ConditionReport check_conditions(const SourceSet& s, double tol) {
  s.validate();
  ConditionReport r;
  const int m = s.num_sources();

  if (s.num_components() == 1) {
    // (cond-beta): sum beta_l < 2 and sum_{l != j} beta_l > beta_j for all j.
    const auto& b = s.weights[0];
    const double total = row_sum(b);
    r.luo_tian.margins.push_back(2.0 - total);
    for (int j = 0; j < m; ++j) r.luo_tian.margins.push_back((total - b[j]) - b[j]);
    finalize(r.luo_tian, tol);
    if (m == 7) r.assumptions = assumptions_A(b);
    return r;
  }

  const auto& b1 = s.weights[0];
  const auto& b2 = s.weights[1];
  const double s1 = row_sum(b1);
  const double s2 = row_sum(b2);

  // (cond-beta-toda): 3(1+beta_{i,j}) < 2 sum_i + sum_{3-i}, and sum_i < 2.
  for (int j = 0; j < m; ++j) r.toda_existence.margins.push_back(2.0 * s1 + s2 - 3.0 * (1.0 + b1[j]));
  for (int j = 0; j < m; ++j) r.toda_existence.margins.push_back(2.0 * s2 + s1 - 3.0 * (1.0 + b2[j]));
  r.toda_existence.margins.push_back(2.0 - s1);
  r.toda_existence.margins.push_back(2.0 - s2);
  finalize(r.toda_existence, tol);

  // (cond-beta-like): sum_{l != j} beta_{i,l} > max(beta_{1,j}, beta_{2,j}).
  for (int i = 0; i < 2; ++i) {
    const auto& bi = s.weights[i];
    const double si = row_sum(bi);
    for (int j = 0; j < m; ++j)
      r.beta_like.margins.push_back((si - bi[j]) - std::max(b1[j], b2[j]));
  }
  finalize(r.beta_like, tol);

  // (barbeta) in the algebraically equivalent closed form: the paper's
  // "bar beta_i > 0" clause is stated against beta_i = 2 bar beta_i -
  // bar beta_{3-i} > 0, which is what sum_l beta_{i,l} < 2 transforms to.
  const auto d = derived_exponents(s);
  for (int i = 0; i < 2; ++i)
    r.barbeta_form.margins.push_back(2.0 * d.beta_bar[i] - d.beta_bar[1 - i]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < m; ++j)
      r.barbeta_form.margins.push_back(1.0 - s.weights[i][j] - d.beta_bar[i]);
  finalize(r.barbeta_form, tol);

  if (m == 7) {
    if (auto b7 = split_family_weights(s.weights)) r.assumptions = assumptions_A(*b7);
  }
  return r;
}

std::optional<std::vector<double>> split_family_weights(const std::vector<std::vector<double>>& w) {
  if (w.size() != 2 || w[0].size() != 7 || w[1].size() != 7) return std::nullopt;
  for (int l = 0; l < 4; ++l)
    if (w[1][l] != 0.0) return std::nullopt;
  for (int l = 4; l < 7; ++l)
    if (w[0][l] != 0.0) return std::nullopt;
  std::vector<double> b7(7);
  for (int l = 0; l < 4; ++l) b7[l] = w[0][l];
  for (int l = 4; l < 7; ++l) b7[l] = w[1][l];
  return b7;
}

void ProblemSpec::validate() const {
  sources.validate();
  if (!(origin_alpha > -1.0)) throw ConfigError("ProblemSpec: origin_alpha must exceed -1");
  if (sources.toda() && (origin_alpha != 0.0 || farfield_exponent))
    throw ConfigError("ProblemSpec: origin_alpha / farfield_exponent are scalar-mode only");
  if (origin_alpha != 0.0) {
    for (const auto& p : sources.points) {
      double r2 = 0.0;
      for (double c : p) r2 += c * c;
      if (!(r2 > 0.0)) throw ConfigError("ProblemSpec: origin_alpha clashes with a source at 0");
    }
  }
  if (farfield_exponent && !(*farfield_exponent > 0.0))
    throw ConfigError("ProblemSpec: farfield_exponent must be positive");
}

std::vector<double> ProblemSpec::farfield() const {
  if (sources.toda()) return derived_exponents(sources).beta;
  if (farfield_exponent) return {*farfield_exponent};
  double sum = 0.0;
  for (double b : sources.weights[0]) sum += b;
  return {2.0 + origin_alpha - sum};
}

std::vector<double> ProblemSpec::target_masses() const {
  if (sources.toda()) return derived_exponents(sources).target_mass;
  return {farfield()[0] * gamma_n(sources.dimension)};
}

std::vector<std::vector<double>> ProblemSpec::patch_centers() const {
  auto centers = sources.points;
  if (origin_alpha != 0.0) centers.push_back(std::vector<double>(sources.dimension, 0.0));
  return centers;
}

std::vector<double> ProblemSpec::patch_exponents(int i) const {
  std::vector<double> e = sources.weights[i];
  if (origin_alpha != 0.0) e.push_back(-origin_alpha);
  return e;
}

CounterexampleFamily build_counterexample_family(double eps) {
  if (!(eps > 0.0 && eps < 2.0 / 9.0))
    throw ConfigError("counterexample family: epsilon must lie in (0, 2/9)");
  CounterexampleFamily f;
  f.epsilon = eps;
  f.beta7 = {1.0 - eps,       0.5 - eps, 0.5 - eps, 1.5 * eps,
             1.0 - 2.5 * eps, 0.5 * (1.0 + eps), 0.5 * (1.0 + eps)};
  f.weights.assign(2, std::vector<double>(7, 0.0));
  for (int l = 0; l < 4; ++l) f.weights[0][l] = f.beta7[l];
  for (int l = 4; l < 7; ++l) f.weights[1][l] = f.beta7[l];

  SourceSet probe;
  probe.dimension = 2;
  probe.weights = f.weights;
  probe.points.resize(7);
  for (int l = 0; l < 7; ++l) probe.points[l] = {static_cast<double>(l), 0.0};
  const ConditionReport rep = check_conditions(probe);
  if (!rep.assumptions.all() || !rep.beta_like.holds || rep.toda_existence.holds)
    throw NumericalError("counterexample family: constructed weights failed their defining checks");
  return f;
}

}  // namespace stoda
