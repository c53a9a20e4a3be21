#ifndef RSPLINE_ENERGY_HPP_
#define RSPLINE_ENERGY_HPP_

#include "rspline/curve.hpp"
#include "rspline/problem.hpp"

namespace rspline {

/// Discrete spline energy: trapezoid quadrature of (1/2) g(D_t γ', D_t γ')
/// over the grid nodes.
double spline_energy(const ChartCurve& curve);

/// Objective minimized for a given problem. Identical to spline_energy
/// except at the velocity-site node, where the acceleration uses the
/// reflected (ghost-node) second difference built from the prescribed
/// velocity. The composed one-sided stencil at that node encodes a spurious
/// O(1) boundary condition that the constraints cannot cancel and drops the
/// convergence of the minimizer to first order; the reflected form restores
/// second order while the eliminated nodes still satisfy the one-sided
/// velocity stencil exactly.
double spline_energy(const ChartCurve& curve, const InterpolationProblem& problem);

/// Hard constraints of a problem on a given grid: pinned knot nodes plus
/// velocity-adjacent nodes eliminated as affine functions of their
/// neighbours, chosen so the discrete velocity stencil at the site equals v.
struct ConstraintSet {
  struct Pinned {
    int node;
    Vec value;
  };
  struct Eliminated {
    int node;
    int depends_on;  // -1 when the node is fully determined by constants
    double coeff;
    Vec offset;
  };
  std::vector<Pinned> pinned;
  std::vector<Eliminated> eliminated;
  std::vector<bool> constrained;  // one flag per grid node

  bool is_constrained(int node) const { return constrained[node]; }
};

ConstraintSet build_constraints(const InterpolationProblem& problem, int segments);

/// Overwrites pinned and eliminated rows of coords in place.
void enforce_constraints(const ConstraintSet& cs, Mat& coords);

/// Exact gradient of the discrete energy with respect to node coordinates
/// (the quadrature and the stencils are differentiated analytically).
/// Rows of constrained nodes are masked to exactly zero.
Mat energy_gradient(const ChartCurve& curve, const InterpolationProblem& problem);

/// Gradient of the discrete energy with respect to every node, no masking.
Mat energy_gradient_unmasked(const ChartCurve& curve);

/// Unmasked gradient of the problem objective (ghost-node acceleration at
/// the velocity site, see the spline_energy overload above).
Mat energy_gradient_unmasked(const ChartCurve& curve, const InterpolationProblem& problem);

/// Piecewise-linear chart interpolation of the knots, with the nodes next
/// to the velocity site adjusted so the discrete velocity constraint holds.
ChartCurve initial_curve(const InterpolationProblem& problem, int segments);

}  // namespace rspline

#endif  // RSPLINE_ENERGY_HPP_
