#ifndef RSPLINE_POLYSPLINE_HPP_
#define RSPLINE_POLYSPLINE_HPP_

#include "rspline/problem.hpp"

namespace rspline {

class SingularSystem : public std::runtime_error {
 public:
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

class CountMismatch : public std::logic_error {
 public:
  explicit CountMismatch(const std::string& what) : std::logic_error(what) {}
};

/// Piecewise degree-(2k-1) polynomial on breakpoints t_0 < ... < t_N.
/// Piece i (1-based in formulas, 0-based here) is expressed in the
/// monomial basis centered at its left breakpoint: coeffs[i] is a
/// (2k) x dim matrix, row a holding the coefficient of (t - t_i)^a.
struct PiecewisePolynomial {
  int order;  // k
  Vec breakpoints;
  std::vector<Mat> coeffs;

  int pieces() const { return static_cast<int>(coeffs.size()); }
  int dim() const { return static_cast<int>(coeffs.front().cols()); }

  /// Derivative of the given order at t; for t at an interior breakpoint
  /// the left piece is used.
  Vec eval(double t, int deriv_order = 0) const;
  /// Same but using the right piece at breakpoints (for jump measurement).
  Vec eval_right(double t, int deriv_order = 0) const;
};

/// Assembled square linear system (one rhs column per dimension) whose
/// solution is the exact flat-space k-spline: interpolation rows, prescribed
/// derivatives at the site, junction continuity of orders 1..2k-2 away from
/// the site, and natural conditions at the extrema not carrying derivatives.
struct PolysplineSystem {
  Mat matrix;
  Mat rhs;
  std::vector<std::string> row_labels;
};

PolysplineSystem assemble_system(const InterpolationProblem& problem);

PiecewisePolynomial solve_exact(const InterpolationProblem& problem);

/// Energy of the piecewise polynomial by closed-form integration of the
/// squared k-th derivative: (1/2)∫|γ''|² for k = 2, ∫|γ^(k)|² for k >= 3.
double exact_energy(const PiecewisePolynomial& poly);

/// ∫ |γ^(k)|² without any convention factor.
double exact_energy_integral(const PiecewisePolynomial& poly);

}  // namespace rspline

#endif  // RSPLINE_POLYSPLINE_HPP_
