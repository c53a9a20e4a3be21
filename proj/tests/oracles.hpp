#ifndef RSPLINE_TESTS_ORACLES_HPP_
#define RSPLINE_TESTS_ORACLES_HPP_

// Independent reference implementations used to check the library. Each
// oracle recomputes a quantity from first principles with a different
// method than the code under test.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "rspline/curve.hpp"
#include "rspline/manifold.hpp"

namespace oracles {

using rspline::Mat;
using rspline::Vec;

// ---------------------------------------------------------------------------
// Finite-difference gradient of a scalar function of curve coordinates.
inline Mat fd_gradient(const std::function<double(const Mat&)>& f, const Mat& coords,
                       double step = 1e-6) {
  Mat g(coords.rows(), coords.cols());
  Mat x = coords;
  for (int i = 0; i < coords.rows(); ++i) {
    for (int j = 0; j < coords.cols(); ++j) {
      const double saved = x(i, j);
      x(i, j) = saved + step;
      const double fp = f(x);
      x(i, j) = saved - step;
      const double fm = f(x);
      x(i, j) = saved;
      g(i, j) = (fp - fm) / (2.0 * step);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Sphere metric by pulling the ambient Euclidean metric back through the
// inverse stereographic projection (from the north pole, matching the
// library chart), differentiated by central finite differences.
inline Eigen::Vector3d inverse_stereographic(const Vec& x) {
  const double s = x.squaredNorm();
  return {2.0 * x[0] / (1.0 + s), 2.0 * x[1] / (1.0 + s), (s - 1.0) / (1.0 + s)};
}

inline Mat sphere_metric_fd(const Vec& x, double step = 1e-6) {
  Eigen::Matrix<double, 3, 2> jac;
  for (int j = 0; j < 2; ++j) {
    Vec xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    jac.col(j) = (inverse_stereographic(xp) - inverse_stereographic(xm)) / (2.0 * step);
  }
  return jac.transpose() * jac;
}

// Christoffel symbols from the metric alone via the standard formula with
// central finite differences of g.
inline std::vector<Mat> christoffel_fd(const std::function<Mat(const Vec&)>& metric, const Vec& x,
                                       double step = 1e-5) {
  const int d = static_cast<int>(x.size());
  std::vector<Mat> dg(d);  // dg[c](i,j) = ∂_c g_ij
  for (int c = 0; c < d; ++c) {
    Vec xp = x, xm = x;
    xp[c] += step;
    xm[c] -= step;
    dg[c] = (metric(xp) - metric(xm)) / (2.0 * step);
  }
  const Mat ginv = metric(x).inverse();
  std::vector<Mat> gamma(d, Mat::Zero(d, d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k](i, j) = 0.5 * s;
      }
  return gamma;
}

// ---------------------------------------------------------------------------
// Exact solution of the single-interval cubic problem γ(0)=0, γ(1)=1,
// γ'(0)=0, γ''(1)=0, worked by hand-style elimination of the 4x4 system.
// With γ = c0 + c1 t + c2 t² + c3 t³: c0 = 0 and c1 = 0 immediately;
// the remaining 2x2 block {c2 + c3 = 1, 2 c2 + 6 c3 = 0} eliminates to
// 4 c3 = −2, so c3 = −1/2 and c2 = 3/2.
inline double hand_cubic(double t, int deriv = 0) {
  const double c2 = 1.5, c3 = -0.5;
  switch (deriv) {
    case 0: return c2 * t * t + c3 * t * t * t;
    case 1: return 2.0 * c2 * t + 3.0 * c3 * t * t;
    case 2: return 2.0 * c2 + 6.0 * c3 * t;
    case 3: return 6.0 * c3;
    default: return 0.0;
  }
}

// ½ ∫ (hand_cubic'')² by direct polynomial integration: (3 − 3t)² integrates
// to 9 − 9 + 3 = 3 over [0,1], halved to 3/2.
inline double hand_cubic_energy() { return 1.5; }

// ---------------------------------------------------------------------------
// Gauss–Legendre quadrature (5 points per panel, exact for degree ≤ 9).
inline double gauss_integrate(const std::function<double(double)>& f, double a, double b,
                              int panels = 8) {
  static const std::array<double, 5> xs = {-0.906179845938664, -0.538469310105683, 0.0,
                                           0.538469310105683, 0.906179845938664};
  static const std::array<double, 5> ws = {0.236926885056189, 0.478628670499366,
                                           0.568888888888889, 0.478628670499366,
                                           0.236926885056189};
  double total = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    for (int q = 0; q < 5; ++q) total += 0.5 * w * ws[q] * f(mid + 0.5 * w * xs[q]);
  }
  return total;
}

// ∫₀¹ q̈² dt for the quadratic through (0,0), (r, y1), (1, y2), with the
// quadratic found by solving the 3x3 Vandermonde system directly.
inline double parabola_energy_quadrature(double r, double y1, double y2) {
  Eigen::Matrix3d vand;
  vand << 1.0, 0.0, 0.0, 1.0, r, r * r, 1.0, 1.0, 1.0;
  const Eigen::Vector3d c = vand.fullPivLu().solve(Eigen::Vector3d(0.0, y1, y2));
  return gauss_integrate([&](double) { return (2.0 * c[2]) * (2.0 * c[2]); }, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// The C² unit bump of half-width delta centered at r: quintic smoothstep
// rising on [r−δ, r], mirrored on [r, r+δ], zero outside. Built here
// independently for boundary-identity and integral checks.
struct Bump {
  double r, delta;
  static double smoothstep(double u, int deriv) {
    switch (deriv) {
      case 0: return ((6.0 * u - 15.0) * u + 10.0) * u * u * u;
      case 1: return ((30.0 * u - 60.0) * u + 30.0) * u * u;
      case 2: return ((120.0 * u - 180.0) * u + 60.0) * u;
      default: return 0.0;
    }
  }
  double eval(double t, int deriv = 0) const {
    if (t <= r - delta || t >= r + delta) return 0.0;
    // Rising half uses u = (t - (r-δ))/δ; the falling half mirrors it, so
    // each derivative picks up a factor (du/dt) = ±1/δ.
    const double dudt = (t < r) ? 1.0 / delta : -1.0 / delta;
    const double u = (t < r) ? (t - (r - delta)) / delta : ((r + delta) - t) / delta;
    return smoothstep(u, deriv) * std::pow(dudt, deriv);
  }
  double curvature_integral() const {
    return gauss_integrate([&](double t) { const double b = eval(t, 2); return b * b; },
                           r - delta, r + delta, 64);
  }
};

// ---------------------------------------------------------------------------
// Deterministic random chart points / curves.
inline Vec random_point(std::mt19937& rng, int dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = u(rng);
  return x;
}

inline rspline::ChartCurve random_curve(std::mt19937& rng, const rspline::ManifoldModel& m,
                                        int segments, double scale = 1.0) {
  rspline::TimeGrid grid(segments);
  Mat coords(grid.nodes(), m.dim());
  std::uniform_real_distribution<double> u(-scale, scale);
  // Smooth random trigonometric curve so energies stay O(1).
  std::vector<Vec> amp(4);
  for (auto& a : amp) a = random_point(rng, m.dim(), scale);
  for (int i = 0; i < grid.nodes(); ++i) {
    const double t = grid.t(i);
    Vec x = Vec::Zero(m.dim());
    for (size_t n = 0; n < amp.size(); ++n)
      x += amp[n] * std::sin((static_cast<double>(n) + 1.0) * M_PI * t) /
           ((static_cast<double>(n) + 1.0) * (static_cast<double>(n) + 1.0));
    coords.row(i) = x.transpose();
  }
  return rspline::ChartCurve(grid, coords, m);
}

// Least-squares slope of log2(err) against log2(h): empirical order.
inline double fit_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  const int n = static_cast<int>(hs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log2(hs[i]), y = std::log2(errs[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles

#endif  // RSPLINE_TESTS_ORACLES_HPP_
