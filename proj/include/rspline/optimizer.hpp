#ifndef RSPLINE_OPTIMIZER_HPP_
#define RSPLINE_OPTIMIZER_HPP_

#include "rspline/energy.hpp"

namespace rspline {

struct OptimizerOptions {
  // Sup-norm threshold on the free-coordinate gradient. The evaluation
  // floor of the discrete gradient grows like eps / h^3 (second differences
  // applied twice), about 3e-8 at M = 512; don't ask for less than that.
  double tol_grad = 1e-4;
  int max_iter = 20000;
  double initial_step = 1.0;
  double backtrack = 0.5;
  double sufficient_decrease = 1e-4;
  int memory = 15;  // quasi-Newton history length; 0 = plain gradient descent

  void validate() const {
    if (tol_grad <= 0.0) throw std::invalid_argument("tol_grad must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (backtrack <= 0.0 || backtrack >= 1.0)
      throw std::invalid_argument("backtracking factor must lie in (0,1)");
    if (initial_step <= 0.0) throw std::invalid_argument("initial step must be positive");
    if (sufficient_decrease <= 0.0 || sufficient_decrease >= 1.0)
      throw std::invalid_argument("sufficient-decrease constant must lie in (0,1)");
    if (memory < 0) throw std::invalid_argument("memory must be >= 0");
  }
};

enum class Termination { GradientTolerance, MaxIterExceeded, LineSearchStalled };

struct ConvergenceReport {
  int iterations = 0;
  double final_energy = 0.0;
  double final_grad_norm = 0.0;
  std::vector<double> energy_trace;      // per accepted iterate
  std::vector<double> coercivity_trace;  // sup_t g(γ', γ') per accepted iterate
  Termination reason = Termination::MaxIterExceeded;

  bool converged() const { return reason == Termination::GradientTolerance; }
};

/// Minimizes the discrete spline energy over the free node coordinates.
/// Constraints hold exactly at every iterate (knots pinned, velocity
/// neighbours eliminated). Non-convergence is reported, not thrown.
std::pair<ChartCurve, ConvergenceReport> minimize(const InterpolationProblem& problem,
                                                  int segments,
                                                  const OptimizerOptions& opts = {});

/// Same, starting from a caller-supplied curve (multi-start, refinement).
std::pair<ChartCurve, ConvergenceReport> minimize_from(const InterpolationProblem& problem,
                                                       ChartCurve start,
                                                       const OptimizerOptions& opts = {});

struct CoercivityResult {
  bool within_bound = false;
  double max_speed_sq = 0.0;
  double bound = 0.0;
};

/// Checks the a-priori speed bound sup_t g(γ',γ') <= (c + sqrt(c² + h₀))²
/// for curves of energy <= c² whose initial discrete velocity is v.
CoercivityResult coercivity_check(const ChartCurve& curve, const TangentVec& v, double c_squared);

}  // namespace rspline

#endif  // RSPLINE_OPTIMIZER_HPP_
