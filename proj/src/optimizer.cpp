#include "rspline/optimizer.hpp"

#include <cmath>
#include <limits>
#include <deque>

namespace rspline {

namespace {

struct FreeParametrization {
  std::vector<int> free_nodes;
  ConstraintSet constraints;
  int dim;

  int size() const { return static_cast<int>(free_nodes.size()) * dim; }

  void to_coords(const Vec& z, Mat& coords) const {
    for (size_t f = 0; f < free_nodes.size(); ++f)
      coords.row(free_nodes[f]) = z.segment(f * dim, dim).transpose();
    enforce_constraints(constraints, coords);
  }

  Vec from_coords(const Mat& coords) const {
    Vec z(size());
    for (size_t f = 0; f < free_nodes.size(); ++f)
      z.segment(f * dim, dim) = coords.row(free_nodes[f]).transpose();
    return z;
  }

  // Chain rule through the affine eliminations.
  Vec reduce_gradient(const Mat& raw) const {
    Mat g = raw;
    for (const auto& e : constraints.eliminated) {
      if (e.depends_on >= 0) g.row(e.depends_on) += e.coeff * raw.row(e.node);
    }
    Vec gz(size());
    for (size_t f = 0; f < free_nodes.size(); ++f)
      gz.segment(f * dim, dim) = g.row(free_nodes[f]).transpose();
    return gz;
  }
};

// Inverse of the flat-metric energy Hessian in the free coordinates,
// P^T S2^T W S2 P with S2 the composed difference stencil and W the
// quadrature weights. The discrete energy is badly conditioned (the
// bilaplacian's spread grows like M^4), so quasi-Newton steps are taken
// in this metric; for flat manifolds the first step is the exact Newton
// step.
class FlatHessian {
 public:
  FlatHessian(const FreeParametrization& par, const TimeGrid& grid,
              const InterpolationProblem& problem)
      : dim_(par.dim) {
    const int n = grid.nodes();
    const int nf = static_cast<int>(par.free_nodes.size());
    const double h = grid.h();

    const Mat stencil = apply_diff_stencil(Mat::Identity(n, n), h);
    Mat s2 = apply_diff_stencil(stencil, h);
    if (problem.has_velocity()) {
      // Match the objective: the velocity-site row of the acceleration is
      // the ghost-node / central second difference, not the composed stencil.
      const int s = knot_node_index(problem.knots[problem.velocity_site].t, grid.segments);
      s2.row(s).setZero();
      if (s == 0) {
        s2(0, 0) = -2.0 / (h * h);
        s2(0, 1) = 2.0 / (h * h);
      } else if (s == grid.segments) {
        s2(s, s) = -2.0 / (h * h);
        s2(s, s - 1) = 2.0 / (h * h);
      } else {
        s2(s, s - 1) = 1.0 / (h * h);
        s2(s, s) = -2.0 / (h * h);
        s2(s, s + 1) = 1.0 / (h * h);
      }
    }

    Mat p = Mat::Zero(n, nf);
    std::vector<int> col(n, -1);
    for (int f = 0; f < nf; ++f) col[par.free_nodes[f]] = f;
    for (int f = 0; f < nf; ++f) p(par.free_nodes[f], f) = 1.0;
    for (const auto& e : par.constraints.eliminated) {
      if (e.depends_on >= 0) p(e.node, col[e.depends_on]) += e.coeff;
    }

    Vec w = Vec::Constant(n, h);
    w[0] = w[n - 1] = 0.5 * h;
    const Mat a = s2 * p;
    factor_.compute(Mat(a.transpose() * w.asDiagonal() * a));
    if (factor_.info() != Eigen::Success)
      throw std::runtime_error("flat energy Hessian is not positive definite");
  }

  Vec solve(const Vec& q) const {
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const int nf = static_cast<int>(q.size()) / dim_;
    const Mat rhs = Eigen::Map<const RowMat>(q.data(), nf, dim_);
    const Mat sol = factor_.solve(rhs);
    Vec out(q.size());
    Eigen::Map<RowMat>(out.data(), nf, dim_) = sol;
    return out;
  }

 private:
  int dim_;
  Eigen::LLT<Mat> factor_;
};

double max_speed_sq(const ChartCurve& curve) {
  const Mat vel = velocity(curve);
  double m = 0.0;
  for (int i = 0; i < curve.grid.nodes(); ++i) {
    const Vec v = vel.row(i);
    m = std::max(m, curve.manifold.inner(curve.coords.row(i), v, v));
  }
  return m;
}

}  // namespace

std::pair<ChartCurve, ConvergenceReport> minimize(const InterpolationProblem& problem,
                                                  int segments,
                                                  const OptimizerOptions& opts) {
  return minimize_from(problem, initial_curve(problem, segments), opts);
}

std::pair<ChartCurve, ConvergenceReport> minimize_from(const InterpolationProblem& problem,
                                                       ChartCurve start,
                                                       const OptimizerOptions& opts) {
  opts.validate();
  problem.validate();
  if (problem.order != 2)
    throw std::invalid_argument("the discrete minimizer handles order-2 splines only");
  const int segments = start.grid.segments;
  const int dim = problem.manifold.dim();

  FreeParametrization par;
  par.constraints = build_constraints(problem, segments);
  par.dim = dim;
  for (int i = 0; i <= segments; ++i) {
    if (!par.constraints.is_constrained(i)) par.free_nodes.push_back(i);
  }

  const FlatHessian hess(par, start.grid, problem);

  Mat coords = start.coords;
  enforce_constraints(par.constraints, coords);
  ChartCurve curve(start.grid, coords, problem.manifold);

  auto eval_energy = [&](const Vec& z, Mat& scratch) -> double {
    par.to_coords(z, scratch);
    return spline_energy(ChartCurve(start.grid, scratch, problem.manifold), problem);
  };

  Vec z = par.from_coords(coords);
  Mat scratch = coords;
  double energy = spline_energy(curve, problem);
  Vec grad = par.reduce_gradient(energy_gradient_unmasked(curve, problem));

  ConvergenceReport report;
  report.energy_trace.push_back(energy);
  report.coercivity_trace.push_back(max_speed_sq(curve));

  // L-BFGS history
  std::deque<Vec> s_hist, y_hist;
  std::deque<double> rho_hist;

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    const double gnorm = grad.lpNorm<Eigen::Infinity>();
    if (gnorm <= opts.tol_grad) {
      report.reason = Termination::GradientTolerance;
      break;
    }

    // Two-loop recursion seeded with the flat-Hessian inverse.
    Vec d = -grad;
    if (s_hist.empty()) {
      d = -hess.solve(grad);
    } else {
      std::vector<double> alpha(s_hist.size());
      for (int q = static_cast<int>(s_hist.size()) - 1; q >= 0; --q) {
        alpha[q] = rho_hist[q] * s_hist[q].dot(d);
        d -= alpha[q] * y_hist[q];
      }
      d = hess.solve(d);
      for (size_t q = 0; q < s_hist.size(); ++q) {
        const double beta = rho_hist[q] * y_hist[q].dot(d);
        d += (alpha[q] - beta) * s_hist[q];
      }
    }
    double slope = grad.dot(d);
    if (slope >= 0.0) {  // not a descent direction; reset
      d = -grad;
      slope = grad.dot(d);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = opts.initial_step;
    double new_energy = energy;
    Vec z_new;
    bool accepted = false;
    while (step > 1e-16) {
      z_new = z + step * d;
      bool chart_ok = true;
      double trial = 0.0;
      try {
        trial = eval_energy(z_new, scratch);
      } catch (const ChartError&) {
        chart_ok = false;
      }
      if (chart_ok && trial <= energy + opts.sufficient_decrease * step * slope) {
        // A decrease below the floating-point resolution of the energy is
        // noise; treat it as a stall, not progress.
        if (energy - trial <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(energy))
          break;
        new_energy = trial;
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) {
      report.reason = Termination::LineSearchStalled;
      break;
    }

    par.to_coords(z_new, scratch);
    ChartCurve next(start.grid, scratch, problem.manifold);
    Vec grad_new = par.reduce_gradient(energy_gradient_unmasked(next, problem));

    if (opts.memory > 0) {
      Vec s_vec = z_new - z;
      Vec y_vec = grad_new - grad;
      const double sy = s_vec.dot(y_vec);
      if (sy > 1e-14 * s_vec.norm() * y_vec.norm()) {
        s_hist.push_back(std::move(s_vec));
        y_hist.push_back(std::move(y_vec));
        rho_hist.push_back(1.0 / sy);
        if (static_cast<int>(s_hist.size()) > opts.memory) {
          s_hist.pop_front();
          y_hist.pop_front();
          rho_hist.pop_front();
        }
      }
    }

    z = std::move(z_new);
    energy = new_energy;
    grad = std::move(grad_new);
    curve = next;
    report.energy_trace.push_back(energy);
    report.coercivity_trace.push_back(max_speed_sq(curve));
  }

  report.iterations = iter;
  report.final_energy = energy;
  report.final_grad_norm = grad.lpNorm<Eigen::Infinity>();
  if (report.reason != Termination::GradientTolerance &&
      report.reason != Termination::LineSearchStalled && iter >= opts.max_iter) {
    report.reason = Termination::MaxIterExceeded;
  }
  if (report.final_grad_norm <= opts.tol_grad) report.reason = Termination::GradientTolerance;
  return {curve, report};
}

CoercivityResult coercivity_check(const ChartCurve& curve, const TangentVec& v, double c_squared) {
  CoercivityResult res;
  const double h0 = curve.manifold.inner(v.base.coords, v.comp, v.comp);
  const double c = std::sqrt(std::max(c_squared, 0.0));
  const double root = c + std::sqrt(c * c + h0);
  res.bound = root * root;
  res.max_speed_sq = max_speed_sq(curve);
  res.within_bound = res.max_speed_sq <= res.bound * (1.0 + 1e-12) + 1e-12;
  return res;
}

}  // namespace rspline
