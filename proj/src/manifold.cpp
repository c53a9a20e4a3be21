#include "rspline/manifold.hpp"

#include <cmath>

namespace rspline {

ManifoldModel ManifoldModel::euclidean(int n) {
  if (n < 1) throw std::invalid_argument("euclidean dimension must be positive");
  return ManifoldModel(ManifoldKind::Euclidean, n, 0.0);
}

ManifoldModel ManifoldModel::flat_cylinder() {
  return ManifoldModel(ManifoldKind::FlatCylinder, 2, 0.0);
}

ManifoldModel ManifoldModel::sphere(double pole_radius) {
  if (pole_radius <= 0.0) throw std::invalid_argument("pole_radius must be positive");
  return ManifoldModel(ManifoldKind::Sphere, 2, pole_radius);
}

std::string ManifoldModel::name() const {
  switch (kind_) {
    case ManifoldKind::Euclidean: return "euclidean";
    case ManifoldKind::FlatCylinder: return "flat_cylinder";
    case ManifoldKind::Sphere: return "sphere";
  }
  return "?";
}

void ManifoldModel::check_admissible(const Vec& x) const {
  if (x.size() != dim_) throw ChartError("chart point has wrong dimension");
  if (!x.allFinite()) throw ChartError("chart point has non-finite coordinates");
  if (kind_ == ManifoldKind::Sphere && x.norm() >= pole_radius_) {
    throw ChartError("chart point within pole-proximity radius of the stereographic pole");
  }
}

Mat ManifoldModel::metric(const Vec& x) const {
  check_admissible(x);
  if (flat()) return Mat::Identity(dim_, dim_);
  // Stereographic chart of the unit sphere: g = 4/(1+|x|^2)^2 I.
  const double s = 1.0 + x.squaredNorm();
  return (4.0 / (s * s)) * Mat::Identity(dim_, dim_);
}

std::vector<Mat> ManifoldModel::metric_derivative(const Vec& x) const {
  check_admissible(x);
  std::vector<Mat> d(dim_, Mat::Zero(dim_, dim_));
  if (flat()) return d;
  const double s = 1.0 + x.squaredNorm();
  for (int c = 0; c < dim_; ++c) {
    d[c] = (-16.0 * x[c] / (s * s * s)) * Mat::Identity(dim_, dim_);
  }
  return d;
}

ChristoffelSymbols ManifoldModel::christoffel(const Vec& x) const {
  check_admissible(x);
  ChristoffelSymbols c;
  c.gamma.assign(dim_, Mat::Zero(dim_, dim_));
  if (flat()) return c;
  // Conformal metric g = e^{2phi} I with phi = log(2/(1+|x|^2)):
  // Γ^k_ij = δ_ki ∂_j phi + δ_kj ∂_i phi − δ_ij ∂_k phi, ∂_c phi = −2 x_c / s.
  const double s = 1.0 + x.squaredNorm();
  const double a = -2.0 / s;
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        double v = 0.0;
        if (k == i) v += a * x[j];
        if (k == j) v += a * x[i];
        if (i == j) v -= a * x[k];
        c.gamma[k](i, j) = v;
      }
  return c;
}

std::vector<ChristoffelSymbols> ManifoldModel::christoffel_derivative(const Vec& x) const {
  check_admissible(x);
  std::vector<ChristoffelSymbols> out(dim_);
  for (int m = 0; m < dim_; ++m) out[m].gamma.assign(dim_, Mat::Zero(dim_, dim_));
  if (flat()) return out;
  const double s = 1.0 + x.squaredNorm();
  const double a = -2.0 / s;
  // ∂_m a = 4 x_m / s^2
  for (int m = 0; m < dim_; ++m) {
    const double da = 4.0 * x[m] / (s * s);
    for (int k = 0; k < dim_; ++k)
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
          double v = 0.0;
          if (k == i) v += da * x[j] + a * (j == m ? 1.0 : 0.0);
          if (k == j) v += da * x[i] + a * (i == m ? 1.0 : 0.0);
          if (i == j) v -= da * x[k] + a * (k == m ? 1.0 : 0.0);
          out[m].gamma[k](i, j) = v;
        }
  }
  return out;
}

CurvatureTensor ManifoldModel::curvature(const Vec& x) const {
  check_admissible(x);
  CurvatureTensor R(dim_);
  if (flat()) return R;
  // R^l_ijk = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_ia Γ^a_jk − Γ^l_ja Γ^a_ik
  const ChristoffelSymbols G = christoffel(x);
  const std::vector<ChristoffelSymbols> dG = christoffel_derivative(x);
  for (int l = 0; l < dim_; ++l)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k) {
          double v = dG[i].gamma[l](j, k) - dG[j].gamma[l](i, k);
          for (int a = 0; a < dim_; ++a) {
            v += G.gamma[l](i, a) * G.gamma[a](j, k) - G.gamma[l](j, a) * G.gamma[a](i, k);
          }
          R(l, i, j, k) = v;
        }
  return R;
}

Vec ManifoldModel::curvature_apply(const Vec& x, const Vec& X, const Vec& Y, const Vec& Z) const {
  if (flat()) {
    check_admissible(x);
    return Vec::Zero(dim_);
  }
  return curvature(x).apply(X, Y, Z);
}

}  // namespace rspline
