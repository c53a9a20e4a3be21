#ifndef RSPLINE_CURVE_HPP_
#define RSPLINE_CURVE_HPP_

#include <Eigen/Dense>

#include "rspline/manifold.hpp"

namespace rspline {

/// Uniform grid t_i = i / M on [0, 1].
struct TimeGrid {
  int segments;  // M; node count is M + 1

  explicit TimeGrid(int m) : segments(m) {
    if (m < 2) throw std::invalid_argument("grid needs at least 2 segments");
  }
  int nodes() const { return segments + 1; }
  double h() const { return 1.0 / segments; }
  double t(int i) const { return static_cast<double>(i) / segments; }
};

/// A discrete H^2 curve: chart coordinates at every grid node.
/// coords is (M+1) x dim, one node per row.
struct ChartCurve {
  TimeGrid grid;
  Mat coords;
  ManifoldModel manifold;

  ChartCurve(TimeGrid g, Mat c, ManifoldModel m)
      : grid(g), coords(std::move(c)), manifold(std::move(m)) {
    if (coords.rows() != grid.nodes() || coords.cols() != manifold.dim())
      throw std::invalid_argument("curve coordinate array has wrong shape");
  }

  int dim() const { return manifold.dim(); }
  ChartCurve reversed() const;
};

/// Second-order time differentiation of per-node values: central stencils
/// in the interior, one-sided second-order stencils at the ends.
/// f is (M+1) x d; so is the result.
Mat apply_diff_stencil(const Mat& f, double h);
/// Transpose of the stencil operator above (needed by exact gradients).
Mat apply_diff_stencil_transpose(const Mat& f, double h);

/// Discrete curve velocity, node by node.
Mat velocity(const ChartCurve& curve);

/// Discrete covariant derivative along the curve of a per-node field v:
/// (D_t v)^k = dv^k/dt + Γ^k_ij ẋ^i v^j.
Mat covariant_derivative_along(const ChartCurve& curve, const Mat& v);

/// Parallel transport of v0 (based at the first node) along the curve:
/// solves D_t v = 0 with a classical RK4 step per grid interval.
/// Returns the field at every node.
Mat parallel_transport(const ChartCurve& curve, const TangentVec& v0);

/// Covariant integral: the field mu with mu(0) = 0 and D_t mu = eta,
/// via RK4 on  mu' = eta − Γ(ẋ, mu).
Mat covariant_integral(const ChartCurve& curve, const Mat& eta);

/// Cubic-interpolating sampler of a discrete curve or per-node field;
/// used by the one-step integrators to evaluate between nodes.
class CurveSampler {
 public:
  explicit CurveSampler(const Mat& values, double h) : values_(values), h_(h) {}

  Vec value(double t) const;
  Vec derivative(double t) const;

 private:
  void weights(double t, int* base, double w[4], double dw[4]) const;
  const Mat& values_;
  double h_;
};

}  // namespace rspline

#endif  // RSPLINE_CURVE_HPP_
