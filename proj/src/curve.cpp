#include "rspline/curve.hpp"

#include <algorithm>
#include <cmath>

namespace rspline {

ChartCurve ChartCurve::reversed() const {
  return ChartCurve(grid, coords.colwise().reverse(), manifold);
}

Mat apply_diff_stencil(const Mat& f, double h) {
  const int n = static_cast<int>(f.rows());
  if (n < 3) throw std::invalid_argument("stencil needs at least 3 nodes");
  Mat out(n, f.cols());
  const double inv2h = 1.0 / (2.0 * h);
  out.row(0) = (-3.0 * f.row(0) + 4.0 * f.row(1) - f.row(2)) * inv2h;
  for (int i = 1; i < n - 1; ++i) out.row(i) = (f.row(i + 1) - f.row(i - 1)) * inv2h;
  out.row(n - 1) = (f.row(n - 3) - 4.0 * f.row(n - 2) + 3.0 * f.row(n - 1)) * inv2h;
  return out;
}

Mat apply_diff_stencil_transpose(const Mat& f, double h) {
  const int n = static_cast<int>(f.rows());
  if (n < 3) throw std::invalid_argument("stencil needs at least 3 nodes");
  Mat out = Mat::Zero(n, f.cols());
  const double inv2h = 1.0 / (2.0 * h);
  // Scatter each stencil row of the forward operator.
  out.row(0) += -3.0 * inv2h * f.row(0);
  out.row(1) += 4.0 * inv2h * f.row(0);
  out.row(2) += -inv2h * f.row(0);
  for (int i = 1; i < n - 1; ++i) {
    out.row(i - 1) += -inv2h * f.row(i);
    out.row(i + 1) += inv2h * f.row(i);
  }
  out.row(n - 3) += inv2h * f.row(n - 1);
  out.row(n - 2) += -4.0 * inv2h * f.row(n - 1);
  out.row(n - 1) += 3.0 * inv2h * f.row(n - 1);
  return out;
}

Mat velocity(const ChartCurve& curve) {
  if (curve.grid.segments < 2) throw std::invalid_argument("velocity needs M >= 2");
  return apply_diff_stencil(curve.coords, curve.grid.h());
}

Mat covariant_derivative_along(const ChartCurve& curve, const Mat& v) {
  if (v.rows() != curve.coords.rows() || v.cols() != curve.coords.cols())
    throw std::invalid_argument("field shape does not match curve");
  const Mat xdot = velocity(curve);
  Mat out = apply_diff_stencil(v, curve.grid.h());
  if (!curve.manifold.flat()) {
    for (int i = 0; i < curve.grid.nodes(); ++i) {
      const ChristoffelSymbols G = curve.manifold.christoffel(curve.coords.row(i));
      out.row(i) += G.contract(xdot.row(i), v.row(i)).transpose();
    }
  } else {
    for (int i = 0; i < curve.grid.nodes(); ++i)
      curve.manifold.check_admissible(curve.coords.row(i));
  }
  return out;
}

void CurveSampler::weights(double t, int* base, double w[4], double dw[4]) const {
  const int n = static_cast<int>(values_.rows());
  int i0 = static_cast<int>(std::floor(t / h_)) - 1;
  i0 = std::clamp(i0, 0, n - 4);
  *base = i0;
  const double u = t / h_ - i0;
  // Lagrange cubic through nodes i0..i0+3 at local positions 0..3.
  static const double denom[4] = {-6.0, 2.0, -2.0, 6.0};
  for (int a = 0; a < 4; ++a) {
    double p = 1.0, dp = 0.0;
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      dp = dp * (u - b) + p;
      p *= (u - b);
    }
    w[a] = p / denom[a];
    dw[a] = dp / denom[a] / h_;
  }
}

Vec CurveSampler::value(double t) const {
  int base;
  double w[4], dw[4];
  weights(t, &base, w, dw);
  Vec out = Vec::Zero(values_.cols());
  for (int a = 0; a < 4; ++a) out += w[a] * values_.row(base + a).transpose();
  return out;
}

Vec CurveSampler::derivative(double t) const {
  int base;
  double w[4], dw[4];
  weights(t, &base, w, dw);
  Vec out = Vec::Zero(values_.cols());
  for (int a = 0; a < 4; ++a) out += dw[a] * values_.row(base + a).transpose();
  return out;
}

namespace {

// RK4 over the grid for v' = rhs(t, v); returns the value at every node.
template <typename Rhs>
Mat integrate_rk4(const TimeGrid& grid, const Vec& v0, Rhs rhs) {
  const double h = grid.h();
  Mat out(grid.nodes(), v0.size());
  Vec v = v0;
  out.row(0) = v.transpose();
  for (int i = 0; i < grid.segments; ++i) {
    const double t = grid.t(i);
    const Vec k1 = rhs(t, v);
    const Vec k2 = rhs(t + 0.5 * h, Vec(v + 0.5 * h * k1));
    const Vec k3 = rhs(t + 0.5 * h, Vec(v + 0.5 * h * k2));
    const Vec k4 = rhs(t + h, Vec(v + h * k3));
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.row(i + 1) = v.transpose();
  }
  return out;
}

}  // namespace

Mat parallel_transport(const ChartCurve& curve, const TangentVec& v0) {
  if ((v0.base.coords - curve.coords.row(0).transpose()).norm() > 1e-9)
    throw std::invalid_argument("transported vector must be based at the curve start");
  for (int i = 0; i < curve.grid.nodes(); ++i)
    curve.manifold.check_admissible(curve.coords.row(i));
  if (curve.manifold.flat()) {
    Mat out(curve.grid.nodes(), curve.dim());
    out.rowwise() = v0.comp.transpose();
    return out;
  }
  const CurveSampler pos(curve.coords, curve.grid.h());
  auto rhs = [&](double t, const Vec& v) -> Vec {
    const Vec x = pos.value(t);
    const Vec xd = pos.derivative(t);
    return -curve.manifold.christoffel(x).contract(xd, v);
  };
  return integrate_rk4(curve.grid, v0.comp, rhs);
}

Mat covariant_integral(const ChartCurve& curve, const Mat& eta) {
  if (eta.rows() != curve.coords.rows() || eta.cols() != curve.coords.cols())
    throw std::invalid_argument("field shape does not match curve");
  for (int i = 0; i < curve.grid.nodes(); ++i)
    curve.manifold.check_admissible(curve.coords.row(i));
  const CurveSampler pos(curve.coords, curve.grid.h());
  const CurveSampler src(eta, curve.grid.h());
  const bool flat = curve.manifold.flat();
  auto rhs = [&](double t, const Vec& mu) -> Vec {
    Vec r = src.value(t);
    if (!flat) {
      const Vec x = pos.value(t);
      const Vec xd = pos.derivative(t);
      r -= curve.manifold.christoffel(x).contract(xd, mu);
    }
    return r;
  };
  return integrate_rk4(curve.grid, Vec::Zero(curve.dim()), rhs);
}

}  // namespace rspline
