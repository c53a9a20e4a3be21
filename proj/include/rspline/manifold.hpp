#ifndef RSPLINE_MANIFOLD_HPP_
#define RSPLINE_MANIFOLD_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace rspline {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when a chart point leaves the admissible region of a chart
/// (e.g. too close to the stereographic pole on the sphere).
class ChartError : public std::runtime_error {
 public:
  explicit ChartError(const std::string& what) : std::runtime_error(what) {}
};

enum class ManifoldKind { Euclidean, FlatCylinder, Sphere };

/// Point in chart coordinates. Dimensionless; on the flat cylinder the
/// first coordinate is the angular coordinate on the universal cover,
/// measured in winding units (period 1).
struct ChartPoint {
  Vec coords;
};

/// Tangent vector attached to a chart point.
struct TangentVec {
  ChartPoint base;
  Vec comp;
};

/// Christoffel symbols at a point: gamma[k](i, j) = Γ^k_ij.
struct ChristoffelSymbols {
  std::vector<Mat> gamma;

  int dim() const { return static_cast<int>(gamma.size()); }

  /// Contraction Γ^k_ij u^i v^j, returned as a vector indexed by k.
  Vec contract(const Vec& u, const Vec& v) const {
    Vec out(dim());
    for (int k = 0; k < dim(); ++k) out[k] = u.dot(gamma[k] * v);
    return out;
  }
};

/// Curvature tensor at a point, components R^l_ijk with
/// (R(X,Y)Z)^l = R^l_ijk X^i Y^j Z^k.
class CurvatureTensor {
 public:
  explicit CurvatureTensor(int dim) : dim_(dim), data_(dim * dim * dim * dim, 0.0) {}

  double& operator()(int l, int i, int j, int k) {
    return data_[((l * dim_ + i) * dim_ + j) * dim_ + k];
  }
  double operator()(int l, int i, int j, int k) const {
    return data_[((l * dim_ + i) * dim_ + j) * dim_ + k];
  }
  int dim() const { return dim_; }

  Vec apply(const Vec& x, const Vec& y, const Vec& z) const {
    Vec out = Vec::Zero(dim_);
    for (int l = 0; l < dim_; ++l)
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
          for (int k = 0; k < dim_; ++k)
            out[l] += (*this)(l, i, j, k) * x[i] * y[j] * z[k];
    return out;
  }

 private:
  int dim_;
  std::vector<double> data_;
};

/// One of the three built-in model manifolds, with metric, Christoffel
/// symbols and curvature expressed in a fixed global chart.
///
/// Charts:
///  - Euclidean(n): identity chart on R^n.
///  - FlatCylinder: universal cover R^2 of the perimeter-one cylinder,
///    standard flat metric, angular coordinate in winding units.
///  - Sphere: unit sphere under stereographic projection from a
///    configurable pole; evaluation errors once |x| >= pole_radius.
class ManifoldModel {
 public:
  static ManifoldModel euclidean(int n);
  static ManifoldModel flat_cylinder();
  static ManifoldModel sphere(double pole_radius = 10.0);

  ManifoldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool flat() const { return kind_ != ManifoldKind::Sphere; }
  double pole_radius() const { return pole_radius_; }
  const Eigen::Vector3d& pole() const { return pole_; }
  std::string name() const;

  /// Throws ChartError if x is not an admissible chart point.
  void check_admissible(const Vec& x) const;

  Mat metric(const Vec& x) const;
  /// d[c](i, j) = ∂ g_ij / ∂ x^c
  std::vector<Mat> metric_derivative(const Vec& x) const;
  ChristoffelSymbols christoffel(const Vec& x) const;
  /// out[c] = ∂Γ/∂x^c
  std::vector<ChristoffelSymbols> christoffel_derivative(const Vec& x) const;
  CurvatureTensor curvature(const Vec& x) const;
  /// R(X,Y)Z at x.
  Vec curvature_apply(const Vec& x, const Vec& X, const Vec& Y, const Vec& Z) const;

  double inner(const Vec& x, const Vec& u, const Vec& v) const {
    return u.dot(metric(x) * v);
  }
  double norm(const Vec& x, const Vec& u) const {
    return std::sqrt(inner(x, u, u));
  }

 private:
  ManifoldModel(ManifoldKind kind, int dim, double pole_radius)
      : kind_(kind), dim_(dim), pole_radius_(pole_radius) {}

  ManifoldKind kind_;
  int dim_;
  double pole_radius_ = 0.0;
  Eigen::Vector3d pole_{0.0, 0.0, 1.0};
};

}  // namespace rspline

#endif  // RSPLINE_MANIFOLD_HPP_
