#pragma once

#include <string>
#include <vector>

#include "stoda/diagnostics.hpp"
#include "stoda/operator.hpp"

namespace stoda {

// Families probed for non-existence behavior.  Scalar: four sources with
// A1-A3 weights and prescribed far field 2 beta_4, the fourth source pushed
// out along a scale schedule.  Toda: the seven-source split family with the
// sixth and seventh sources at distance s and 2s.  Each family has a sanity
// leg whose weights satisfy the existence conditions instead.
struct ProbeSpec {
  enum class Family { Scalar, Toda };
  Family family = Family::Scalar;
  double epsilon = 0.1;  // weight family parameter, in (0, 2/9)
  bool sanity_leg = false;
  std::vector<double> schedule = {5.0, 10.0, 20.0};
  GridConfig grid;
  IterationConfig iteration;
};

struct ProbeLegResult {
  double s = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  double sup_psi = 0.0;
  std::vector<double> masses;           // converged legs only
  std::vector<double> slope_rel_error;  // per component, vs beta_i
  std::vector<std::vector<SigmaTable>> sigma;  // [component][candidate]
  // worst ratio of the local-mass profile at a candidate against the
  // integrable-weight scaling (r_lo/r_hi)^{n(1-beta)}; about 1 for smooth
  // profiles, > 1 when mass piles onto the candidate beyond what the weight
  // singularity alone explains
  double concentration_index = 0.0;
  std::vector<IterationRecord> history;
};

struct ProbeReport {
  enum class Verdict { ConsistentWithNonexistence, Converged, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  ProbeSpec::Family family = ProbeSpec::Family::Scalar;
  bool sanity_leg = false;
  double epsilon = 0.0;
  std::vector<std::vector<double>> candidates;  // sigma candidate points
  std::vector<ProbeLegResult> legs;
  std::vector<std::string> notes;
};

const char* to_string(ProbeReport::Verdict v);

// Runs the family over its scale schedule and reports solver behavior.  The
// report is observational: it never claims non-existence, only whether the
// runs are consistent with it (no convergence at the largest scale, or
// monotonically degrading slope diagnostics).
ProbeReport nonexistence_probe(const ProbeSpec& spec);

// The solver problem of one leg (exposed for tests and the CLI).
ProblemSpec probe_problem(const ProbeSpec& spec, double s);

}  // namespace stoda
