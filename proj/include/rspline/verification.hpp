#ifndef RSPLINE_VERIFICATION_HPP_
#define RSPLINE_VERIFICATION_HPP_

#include "rspline/curve.hpp"
#include "rspline/polyspline.hpp"
#include "rspline/problem.hpp"

namespace rspline {

/// Pointwise norm of D_t³γ̇ + R(D_tγ̇, γ̇)γ̇ over one knot interval.
/// Discrete curves carry a trim margin: samples within a few nodes of a
/// breakpoint are excluded because the composed difference stencils straddle
/// the derivative jump there.
struct IntervalResidual {
  double t_begin = 0.0;
  double t_end = 0.0;
  Vec times;
  Vec values;
  double sup = 0.0;
};

std::vector<IntervalResidual> el_residual(const ChartCurve& solution,
                                          const InterpolationProblem& problem);
std::vector<IntervalResidual> el_residual(const PiecewisePolynomial& poly,
                                          const InterpolationProblem& problem,
                                          int samples_per_interval = 65);

/// One-sided discrete limits of D_tγ̇ at the interior knots, and its value
/// at the extrema where natural conditions apply. Jumps at a velocity site
/// are reported but are not a defect.
struct JunctionEntry {
  double t = 0.0;
  bool velocity_site = false;
  double jump = 0.0;  // |Δ D_tγ̇|_g
};

struct NaturalEntry {
  double t = 0.0;
  double value = 0.0;  // |D_tγ̇|_g
};

struct JunctionReport {
  std::vector<JunctionEntry> junctions;
  std::vector<NaturalEntry> naturals;
};

JunctionReport junction_report(const ChartCurve& solution, const InterpolationProblem& problem);

/// Exact-polynomial variant: per interior knot the jumps of derivative
/// orders 1..2k−2, and per applicable extreme the values |γ^{(k+ℓ−1)}|,
/// ℓ = 1..k−1.
struct ExactJunctionEntry {
  double t = 0.0;
  bool velocity_site = false;
  std::vector<double> jumps;  // index ℓ-1 holds |Δγ^{(ℓ)}|
};

struct ExactNaturalEntry {
  double t = 0.0;
  std::vector<double> values;
};

struct ExactJunctionReport {
  std::vector<ExactJunctionEntry> junctions;
  std::vector<ExactNaturalEntry> naturals;
};

ExactJunctionReport junction_report(const PiecewisePolynomial& poly,
                                    const InterpolationProblem& problem);

/// Curve restricted to one knot interval (1-based), reparametrized to [0,1].
ChartCurve restrict_to_interval(const ChartCurve& curve, const InterpolationProblem& problem,
                                int interval);

/// Least-squares fit of D_tγ̇ − η_γ by ν(t) + t ζ(t) with ν, ζ parallel,
/// where η_γ is the double covariant integral of R(γ̇, D_tγ̇)γ̇. The curve
/// must span a single knot interval. The misfit is relative when the target
/// has nonnegligible L² norm, absolute otherwise.
struct StructureCheck {
  double misfit = 0.0;
  bool relative = true;
  Vec nu0;    // initial value of the recovered parallel field ν
  Vec zeta0;  // initial value of the recovered parallel field ζ
};

StructureCheck dubois_structure_check(const ChartCurve& curve);

/// |E(γ) − E(γ reversed)| under node-order reversal.
double reversal_check(const ChartCurve& curve);

/// All certificate numbers for one candidate solution.
struct VerificationReport {
  double el_residual_max = 0.0;
  std::vector<IntervalResidual> el_profiles;
  std::vector<JunctionEntry> junction_jumps;
  std::vector<NaturalEntry> natural_values;
  double structure_residual = 0.0;  // worst interval misfit
  double h = 0.0;
  int segments = 0;
};

VerificationReport verify(const ChartCurve& solution, const InterpolationProblem& problem);
VerificationReport verify(const PiecewisePolynomial& poly, const InterpolationProblem& problem);

}  // namespace rspline

#endif  // RSPLINE_VERIFICATION_HPP_
