#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "stoda/grid.hpp"
#include "stoda/problem.hpp"
#include "stoda/weight_field.hpp"

namespace stoda {

// The fixed-point unknowns: one bounded remainder per component, sampled on
// the grid nodes.  Elements of C_0 -- converged fields decay on the outer
// chart.
struct FieldPair {
  std::vector<std::vector<double>> comp;

  static FieldPair zeros(int components, std::size_t n);
  double sup_norm() const;
  bool finite() const;
};

struct IterationConfig {
  double damping = 0.5;       // theta; halved on residual increase
  double damping_min = 0.05;
  double tolerance = 1e-6;    // sup-norm of v - tT(v)
  int max_iterations = 200;   // per homotopy stage
  std::vector<double> homotopy = {0.25, 0.5, 0.75, 1.0};
  double blowup_threshold = 12.0;  // sup psi beyond which divergence is declared

  void validate() const;  // schedule strictly increasing, ends at 1
};

enum class SolveStatus { Converged, BlowUp, MaxIter };

const char* to_string(SolveStatus s);

struct IterationRecord {
  double t = 0.0;
  int iter = 0;
  double theta = 0.0;
  double residual = 0.0;
  std::vector<double> raw_mass;  // integral of Kbar_i e^{n v_i} before normalization
  std::vector<double> c;
  std::vector<double> sup_psi;   // sup of v_i + c_i + (1/n) log t
};

struct SolveResult {
  SolveStatus status = SolveStatus::MaxIter;
  FieldPair v;
  std::vector<double> c;
  FieldPair u;  // assembled u_i = v_i + beta_i u0 + c_i (Converged only)
  std::vector<double> beta_farfield;
  std::vector<double> target_mass;
  std::vector<IterationRecord> history;
  std::size_t blowup_node = std::numeric_limits<std::size_t>::max();
  int blowup_component = -1;
};

// The closed form behind every normalization: c = (1/n) log(target / raw),
// so that Int Kbar e^{n(v+c)} = target exactly up to roundoff.
double normalization_constant_for(double target, double raw_integral, int n);

// The compact operator T of the fixed-point formulation:
//   (T v)_i = kappa sum_j C_ij  Int log(1/|x-y|) Kbar_j e^{n(v_j + c_j)} dy - beta_i u0,
// with kappa = 1/gamma_n, C the SU(3) Cartan matrix in Toda mode (identity in
// scalar mode), and c_j the unique constant normalizing component j's mass to
// its target.  For |x| > 1 the kernel log(|x|/|x-y|) is used instead and the
// -beta_i u0 term cancels analytically.
class LogKernelOperator {
 public:
  LogKernelOperator(const QuadratureGrid& grid, const ProblemSpec& prob, double log_cap = 300.0);

  const QuadratureGrid& grid() const { return *grid_; }
  const ProblemSpec& problem() const { return prob_; }
  int components() const { return static_cast<int>(fields_.size()); }
  int exponent() const { return grid_->dim; }
  const WeightField& weight_field(int i) const { return fields_[i]; }
  const std::vector<double>& targets() const { return targets_; }
  const std::vector<double>& farfield() const { return beta_ff_; }

  // c = (1/n) log(target / Int Kbar_i e^{n v_i}); throws NumericalError when
  // the quadrature value is non-finite or non-positive.
  double normalization_constant(const std::vector<double>& v_i, int i, double* raw = nullptr) const;

  // One application of T on grid nodes.  Outputs the normalization constants
  // and the pre-normalization integrals alongside the image.
  FieldPair apply(const FieldPair& v, std::vector<double>* c_out = nullptr,
                  std::vector<double>* raw_out = nullptr) const;

  // Evaluates (T v)_i at arbitrary points (must not coincide with grid
  // nodes); used by diagnostics, the Kelvin transform and FD residual checks.
  std::vector<double> eval_image_at(const FieldPair& v, int i,
                                    const std::vector<std::vector<double>>& points) const;

  // u_i(x) = (T-image at x) + beta_i u0(x) + c_i reconstructed from v; on a
  // fixed point this evaluates the solution off the grid.
  std::vector<double> eval_solution_at(const FieldPair& v, int i,
                                       const std::vector<std::vector<double>>& points) const;

 private:
  void densities(const FieldPair& v, std::vector<std::vector<double>>& rho,
                 std::vector<double>& c, std::vector<double>& raw) const;

  const QuadratureGrid* grid_;
  ProblemSpec prob_;
  std::vector<WeightField> fields_;
  std::vector<double> targets_;
  std::vector<double> beta_ff_;
  std::vector<double> coupling_;   // row-major components x components
  std::vector<double> sub_;        // per node: log|x|^2 outside B_1, else 0
  std::vector<double> self_term_;  // 2 log R_eq - 2/n per node
  std::vector<double> u0_;
  std::vector<std::ptrdiff_t> self_index_;
  double kappa_ = 0.0;  // 1/gamma_n
};

// Damped fixed-point iteration over the homotopy schedule: at each stage t,
// v <- (1-theta) v + theta t T(v), started from the previous stage's output.
// An initial field (e.g. interpolated from a coarser solve) replaces the
// v = 0 start; pair it with a short homotopy schedule such as {1.0}.
SolveResult solve(const LogKernelOperator& op, const IterationConfig& cfg,
                  const FieldPair* initial = nullptr);

// Fills result.u; throws std::logic_error unless status == Converged.
void assemble_solution(const LogKernelOperator& op, SolveResult& result);

}  // namespace stoda
