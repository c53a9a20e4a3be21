#include "rspline/polyspline.hpp"

#include <cmath>
#include <sstream>

namespace rspline {

namespace {

double falling_factorial(int a, int l) {
  double f = 1.0;
  for (int q = 0; q < l; ++q) f *= (a - q);
  return f;
}

// Row entries of P_i^{(l)}(s) over the 2k coefficients of piece i.
Eigen::RowVectorXd derivative_row(int two_k, double s, int l) {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(two_k);
  for (int a = l; a < two_k; ++a) row[a] = falling_factorial(a, l) * std::pow(s, a - l);
  return row;
}

int find_piece_left(const Vec& bp, double t) {
  const int n = static_cast<int>(bp.size()) - 1;
  int p = 0;
  while (p + 1 < n && t > bp[p + 1]) ++p;
  return p;
}

int find_piece_right(const Vec& bp, double t) {
  const int n = static_cast<int>(bp.size()) - 1;
  int p = n - 1;
  while (p > 0 && t < bp[p]) --p;
  return p;
}

Vec eval_piece(const PiecewisePolynomial& poly, int piece, double t, int l) {
  const int two_k = 2 * poly.order;
  const double s = t - poly.breakpoints[piece];
  Vec out = Vec::Zero(poly.dim());
  if (l >= two_k) return out;
  double sp = 1.0;
  for (int a = l; a < two_k; ++a) {
    out += falling_factorial(a, l) * sp * poly.coeffs[piece].row(a).transpose();
    sp *= s;
  }
  return out;
}

}  // namespace

Vec PiecewisePolynomial::eval(double t, int deriv_order) const {
  return eval_piece(*this, find_piece_left(breakpoints, t), t, deriv_order);
}

Vec PiecewisePolynomial::eval_right(double t, int deriv_order) const {
  return eval_piece(*this, find_piece_right(breakpoints, t), t, deriv_order);
}

PolysplineSystem assemble_system(const InterpolationProblem& problem) {
  problem.validate();
  if (!problem.manifold.flat())
    throw std::invalid_argument("exact polyspline solves require a flat manifold");
  const int k = problem.order;
  const int two_k = 2 * k;
  const int N = problem.segments();
  const int d = problem.manifold.dim();
  const int n_unknowns = two_k * N;
  const int j = problem.has_velocity() ? problem.velocity_site : -1;

  PolysplineSystem sys;
  sys.matrix = Mat::Zero(n_unknowns, n_unknowns);
  sys.rhs = Mat::Zero(n_unknowns, d);
  int row = 0;
  auto piece_cols = [&](int piece) { return piece * two_k; };
  auto add_row = [&](const std::string& label) -> int {
    if (row >= n_unknowns) throw CountMismatch("constraint families exceed 2kN rows");
    sys.row_labels.push_back(label);
    return row++;
  };

  // (a) interpolation at both ends of every piece
  for (int i = 0; i < N; ++i) {
    const double delta = problem.knots[i + 1].t - problem.knots[i].t;
    int r = add_row("interp left piece " + std::to_string(i));
    sys.matrix(r, piece_cols(i)) = 1.0;
    sys.rhs.row(r) = problem.knots[i].point.transpose();
    r = add_row("interp right piece " + std::to_string(i));
    sys.matrix.block(r, piece_cols(i), 1, two_k) = derivative_row(two_k, delta, 0);
    sys.rhs.row(r) = problem.knots[i + 1].point.transpose();
  }

  // (b) prescribed derivatives at the site, on each touching side
  if (j >= 0) {
    for (const auto& [l, v] : problem.prescribed) {
      if (j > 0) {
        const int piece = j - 1;
        const double delta = problem.knots[j].t - problem.knots[piece].t;
        const int r = add_row("prescribed order " + std::to_string(l) + " left");
        sys.matrix.block(r, piece_cols(piece), 1, two_k) = derivative_row(two_k, delta, l);
        sys.rhs.row(r) = v.transpose();
      }
      if (j < N) {
        const int r = add_row("prescribed order " + std::to_string(l) + " right");
        sys.matrix.block(r, piece_cols(j), 1, two_k) = derivative_row(two_k, 0.0, l);
        sys.rhs.row(r) = v.transpose();
      }
    }
  }

  // (c) junction continuity of orders 1..2k-2 at interior knots away from
  // the site (the site already binds orders 1..k-1 on both sides; orders
  // k..2k-2 are allowed to jump there)
  for (int q = 1; q < N; ++q) {
    if (q == j) continue;
    const double delta = problem.knots[q].t - problem.knots[q - 1].t;
    for (int l = 1; l <= two_k - 2; ++l) {
      const int r = add_row("junction order " + std::to_string(l) + " at knot " + std::to_string(q));
      sys.matrix.block(r, piece_cols(q - 1), 1, two_k) = derivative_row(two_k, delta, l);
      sys.matrix.block(r, piece_cols(q), 1, two_k) -= derivative_row(two_k, 0.0, l);
    }
  }

  // (d) natural conditions, orders k..2k-2, at each extreme not carrying
  // the prescribed derivatives
  if (j != 0) {
    for (int l = k; l <= two_k - 2; ++l) {
      const int r = add_row("natural order " + std::to_string(l) + " at 0");
      sys.matrix.block(r, piece_cols(0), 1, two_k) = derivative_row(two_k, 0.0, l);
    }
  }
  if (j != N) {
    const double delta = problem.knots[N].t - problem.knots[N - 1].t;
    for (int l = k; l <= two_k - 2; ++l) {
      const int r = add_row("natural order " + std::to_string(l) + " at 1");
      sys.matrix.block(r, piece_cols(N - 1), 1, two_k) = derivative_row(two_k, delta, l);
    }
  }

  if (row != n_unknowns)
    throw CountMismatch("constraint families total " + std::to_string(row) +
                        " rows, expected " + std::to_string(n_unknowns));
  return sys;
}

PiecewisePolynomial solve_exact(const InterpolationProblem& problem) {
  if (problem.segments() > 50)
    throw SingularSystem(
        "refusing N > 50: per-interval monomial assembly would be too ill-conditioned");
  const PolysplineSystem sys = assemble_system(problem);
  // Column equilibration: coefficient a of piece i scales like delta_i^{-a},
  // so solve in the nondimensional basis ((t - t_i)/delta_i)^a and map back.
  // This keeps the row residuals of the assembled system near roundoff even
  // at order 4, where the raw monomial columns span ~7 decades.
  const int n_unknowns = static_cast<int>(sys.matrix.rows());
  const int two_k = 2 * problem.order;
  Vec colscale(n_unknowns);
  for (int piece = 0; piece < problem.segments(); ++piece) {
    const double delta = problem.knots[piece + 1].t - problem.knots[piece].t;
    double p = 1.0;
    for (int a = 0; a < two_k; ++a, p *= delta) colscale[piece * two_k + a] = p;
  }
  const Mat scaled = sys.matrix * colscale.asDiagonal();
  Eigen::FullPivLU<Mat> lu(scaled);
  if (!lu.isInvertible())
    throw SingularSystem("polyspline constraint system is singular for this knot layout");
  Mat sol = lu.solve(sys.rhs);
  // Iterative refinement pushes the residual down to its rounding floor.
  for (int step = 0; step < 4; ++step) {
    const Mat r = sys.rhs - scaled * sol;
    if (r.cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + sys.rhs.cwiseAbs().maxCoeff())) break;
    sol += lu.solve(r);
  }
  sol = colscale.asDiagonal() * sol;
  const double resid = (sys.matrix * sol - sys.rhs).cwiseAbs().maxCoeff();
  // Componentwise backward-error scale ‖A‖∞·‖x‖∞ + ‖b‖∞.
  const double scale = sys.matrix.cwiseAbs().rowwise().sum().maxCoeff() *
                           sol.cwiseAbs().maxCoeff() +
                       sys.rhs.cwiseAbs().maxCoeff() + 1.0;
  if (resid > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "polyspline solve residual too large: " << std::scientific << resid
        << " (scale " << scale << ")";
    throw SingularSystem(msg.str());
  }

  PiecewisePolynomial poly;
  poly.order = problem.order;
  const int N = problem.segments();
  poly.breakpoints.resize(N + 1);
  for (int i = 0; i <= N; ++i) poly.breakpoints[i] = problem.knots[i].t;
  poly.coeffs.reserve(N);
  for (int i = 0; i < N; ++i) poly.coeffs.push_back(sol.middleRows(i * two_k, two_k));
  return poly;
}

double exact_energy_integral(const PiecewisePolynomial& poly) {
  const int k = poly.order;
  const int two_k = 2 * k;
  // Kahan-compensated accumulation over pieces, dimensions and powers.
  double sum = 0.0, comp = 0.0;
  auto accumulate = [&](double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (int i = 0; i < poly.pieces(); ++i) {
    const double delta = poly.breakpoints[i + 1] - poly.breakpoints[i];
    for (int dcol = 0; dcol < poly.dim(); ++dcol) {
      // coefficients of the k-th derivative (degree k-1 polynomial in s)
      Vec dcoef(k);
      for (int a = 0; a < k; ++a)
        dcoef[a] = falling_factorial(a + k, k) * poly.coeffs[i](a + k, dcol);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          accumulate(dcoef[a] * dcoef[b] * std::pow(delta, a + b + 1) / (a + b + 1));
    }
  }
  return sum;
}

double exact_energy(const PiecewisePolynomial& poly) {
  const double integral = exact_energy_integral(poly);
  return poly.order == 2 ? 0.5 * integral : integral;
}

}  // namespace rspline
