#include "rspline/energy.hpp"

#include <cmath>

namespace rspline {

namespace {

// D_t γ' at every node plus the intermediate velocity field.
struct Acceleration {
  Mat vel;
  Mat acc;
};

Acceleration covariant_acceleration(const ChartCurve& curve) {
  Acceleration out;
  out.vel = velocity(curve);
  out.acc = apply_diff_stencil(out.vel, curve.grid.h());
  if (!curve.manifold.flat()) {
    for (int i = 0; i < curve.grid.nodes(); ++i) {
      const ChristoffelSymbols G = curve.manifold.christoffel(curve.coords.row(i));
      out.acc.row(i) += G.contract(out.vel.row(i), out.vel.row(i)).transpose();
    }
  } else {
    for (int i = 0; i < curve.grid.nodes(); ++i)
      curve.manifold.check_admissible(curve.coords.row(i));
  }
  return out;
}

double quad_weight(const TimeGrid& grid, int i) {
  const double h = grid.h();
  return (i == 0 || i == grid.segments) ? 0.5 * h : h;
}

// Velocity-site node of a problem, if any, with the prescribed vector.
struct VelocitySite {
  enum Kind { None, LeftEnd, RightEnd, Interior };
  Kind kind = None;
  int node = -1;
  Vec v;
};

VelocitySite locate_site(const InterpolationProblem& problem, int segments) {
  VelocitySite s;
  if (!problem.has_velocity()) return s;
  s.v = problem.prescribed[0].second;
  s.node = knot_node_index(problem.knots[problem.velocity_site].t, segments);
  s.kind = (s.node == 0)          ? VelocitySite::LeftEnd
           : (s.node == segments) ? VelocitySite::RightEnd
                                  : VelocitySite::Interior;
  return s;
}

// Ghost-node covariant acceleration at the velocity site: the second
// difference with the off-grid neighbour reflected through the prescribed
// velocity, plus Γ(v, v). At an interior site this is the plain central
// second difference (both neighbours are eliminated to p ± h v).
Vec site_acceleration(const ChartCurve& curve, const VelocitySite& s) {
  const double h = curve.grid.h();
  const Mat& x = curve.coords;
  Vec a;
  switch (s.kind) {
    case VelocitySite::LeftEnd:
      a = (2.0 / (h * h)) * (x.row(1) - x.row(0)).transpose() - (2.0 / h) * s.v;
      break;
    case VelocitySite::RightEnd: {
      const int m = curve.grid.segments;
      a = (2.0 / (h * h)) * (x.row(m - 1) - x.row(m)).transpose() + (2.0 / h) * s.v;
      break;
    }
    default:
      a = (x.row(s.node + 1) - 2.0 * x.row(s.node) + x.row(s.node - 1)).transpose() / (h * h);
  }
  if (!curve.manifold.flat())
    a += curve.manifold.christoffel(x.row(s.node)).contract(s.v, s.v);
  return a;
}

}  // namespace

double spline_energy(const ChartCurve& curve) {
  const Acceleration ac = covariant_acceleration(curve);
  double e = 0.0;
  for (int i = 0; i < curve.grid.nodes(); ++i) {
    const Vec a = ac.acc.row(i);
    e += quad_weight(curve.grid, i) * 0.5 * curve.manifold.inner(curve.coords.row(i), a, a);
  }
  return e;
}

double spline_energy(const ChartCurve& curve, const InterpolationProblem& problem) {
  const VelocitySite site = locate_site(problem, curve.grid.segments);
  if (site.kind == VelocitySite::None) return spline_energy(curve);
  const Acceleration ac = covariant_acceleration(curve);
  double e = 0.0;
  for (int i = 0; i < curve.grid.nodes(); ++i) {
    const Vec a = (i == site.node) ? site_acceleration(curve, site) : Vec(ac.acc.row(i));
    e += quad_weight(curve.grid, i) * 0.5 * curve.manifold.inner(curve.coords.row(i), a, a);
  }
  return e;
}

ConstraintSet build_constraints(const InterpolationProblem& problem, int segments) {
  problem.validate();
  ConstraintSet cs;
  cs.constrained.assign(segments + 1, false);
  for (const Knot& k : problem.knots) {
    const int node = knot_node_index(k.t, segments);
    cs.pinned.push_back({node, k.point});
    cs.constrained[node] = true;
  }
  if (problem.has_velocity()) {
    if (problem.order != 2)
      throw std::invalid_argument("discrete constraints support k = 2 only");
    const Knot& site = problem.knots[problem.velocity_site];
    const int s = knot_node_index(site.t, segments);
    const double h = 1.0 / segments;
    const Vec v = problem.prescribed[0].second;
    if (s == 0) {
      // (-3 x_0 + 4 x_1 - x_2) / 2h = v  with x_0 pinned.
      ConstraintSet::Eliminated e;
      e.node = 1;
      e.depends_on = 2;
      e.coeff = 0.25;
      e.offset = (2.0 * h * v + 3.0 * site.point) / 4.0;
      cs.eliminated.push_back(e);
      cs.constrained[1] = true;
    } else if (s == segments) {
      // (x_{M-2} - 4 x_{M-1} + 3 x_M) / 2h = v  with x_M pinned.
      ConstraintSet::Eliminated e;
      e.node = segments - 1;
      e.depends_on = segments - 2;
      e.coeff = 0.25;
      e.offset = (3.0 * site.point - 2.0 * h * v) / 4.0;
      cs.eliminated.push_back(e);
      cs.constrained[segments - 1] = true;
    } else {
      // Both neighbours fixed symmetrically: x_{s±1} = p_j ± h v, which
      // makes the central stencil at s equal to v exactly.
      for (int sgn : {-1, 1}) {
        ConstraintSet::Eliminated e;
        e.node = s + sgn;
        e.depends_on = -1;
        e.coeff = 0.0;
        e.offset = site.point + sgn * h * v;
        cs.eliminated.push_back(e);
        cs.constrained[s + sgn] = true;
      }
    }
  }
  return cs;
}

void enforce_constraints(const ConstraintSet& cs, Mat& coords) {
  for (const auto& p : cs.pinned) coords.row(p.node) = p.value.transpose();
  for (const auto& e : cs.eliminated) {
    Vec value = e.offset;
    if (e.depends_on >= 0) value += e.coeff * coords.row(e.depends_on).transpose();
    coords.row(e.node) = value.transpose();
  }
}

namespace {

Mat gradient_impl(const ChartCurve& curve, const VelocitySite& site) {
  const int n = curve.grid.nodes();
  const int d = curve.dim();
  const double h = curve.grid.h();
  const Acceleration ac = covariant_acceleration(curve);
  const bool flat = curve.manifold.flat();

  // E = sum_i w_i (1/2) A_i^T G_i A_i with A = D V + Γ(V, V), V = D X.
  // The velocity-site node (if any) is excluded here and added explicitly
  // below with its ghost-node acceleration.
  Mat b = Mat::Zero(n, d);       // b_i = w_i G_i A_i
  Mat direct = Mat::Zero(n, d);  // explicit dependence through G(x_i), Γ(x_i)
  Mat c = Mat::Zero(n, d);       // dE/dV through the Christoffel term
  for (int i = 0; i < n; ++i) {
    if (i == site.node) continue;
    const double w = quad_weight(curve.grid, i);
    const Vec a = ac.acc.row(i);
    if (flat) {
      b.row(i) = w * a.transpose();
      continue;
    }
    const Vec x = curve.coords.row(i);
    const Vec vel = ac.vel.row(i);
    const Mat g = curve.manifold.metric(x);
    const Vec bi = w * (g * a);
    b.row(i) = bi.transpose();
    const auto dg = curve.manifold.metric_derivative(x);
    const auto dG = curve.manifold.christoffel_derivative(x);
    const ChristoffelSymbols G = curve.manifold.christoffel(x);
    for (int cc = 0; cc < d; ++cc) {
      double v = 0.5 * w * a.dot(dg[cc] * a);
      v += bi.dot(dG[cc].contract(vel, vel));
      direct(i, cc) = v;
    }
    // c_i^n = 2 b_i^k Γ^k_{mn} V^m
    Vec ci = Vec::Zero(d);
    for (int k = 0; k < d; ++k) ci += 2.0 * bi[k] * (G.gamma[k].transpose() * vel);
    c.row(i) = ci.transpose();
  }

  Mat grad = direct + apply_diff_stencil_transpose(
                          Mat(apply_diff_stencil_transpose(b, h) + c), h);

  if (site.kind != VelocitySite::None) {
    const int s = site.node;
    const double w = quad_weight(curve.grid, s);
    const Vec x = curve.coords.row(s);
    const Vec a = site_acceleration(curve, site);
    const Vec bi = flat ? Vec(w * a) : Vec(w * (curve.manifold.metric(x) * a));
    switch (site.kind) {
      case VelocitySite::LeftEnd:
        grad.row(1) += (2.0 / (h * h)) * bi.transpose();
        grad.row(0) -= (2.0 / (h * h)) * bi.transpose();
        break;
      case VelocitySite::RightEnd:
        grad.row(n - 2) += (2.0 / (h * h)) * bi.transpose();
        grad.row(n - 1) -= (2.0 / (h * h)) * bi.transpose();
        break;
      default:
        grad.row(s - 1) += (1.0 / (h * h)) * bi.transpose();
        grad.row(s + 1) += (1.0 / (h * h)) * bi.transpose();
        grad.row(s) -= (2.0 / (h * h)) * bi.transpose();
    }
    if (!flat) {
      const auto dg = curve.manifold.metric_derivative(x);
      const auto dG = curve.manifold.christoffel_derivative(x);
      for (int cc = 0; cc < d; ++cc)
        grad(s, cc) += 0.5 * w * a.dot(dg[cc] * a) + bi.dot(dG[cc].contract(site.v, site.v));
    }
  }
  return grad;
}

}  // namespace

Mat energy_gradient_unmasked(const ChartCurve& curve) {
  return gradient_impl(curve, VelocitySite{});
}

Mat energy_gradient_unmasked(const ChartCurve& curve, const InterpolationProblem& problem) {
  return gradient_impl(curve, locate_site(problem, curve.grid.segments));
}

Mat energy_gradient(const ChartCurve& curve, const InterpolationProblem& problem) {
  Mat grad = energy_gradient_unmasked(curve, problem);
  const ConstraintSet cs = build_constraints(problem, curve.grid.segments);
  for (int i = 0; i < curve.grid.nodes(); ++i) {
    if (cs.is_constrained(i)) grad.row(i).setZero();
  }
  return grad;
}

ChartCurve initial_curve(const InterpolationProblem& problem, int segments) {
  problem.validate();
  const TimeGrid grid(segments);
  const int d = problem.manifold.dim();
  Mat coords(grid.nodes(), d);
  size_t seg = 0;
  for (int i = 0; i < grid.nodes(); ++i) {
    const double t = grid.t(i);
    while (seg + 2 < problem.knots.size() && t > problem.knots[seg + 1].t) ++seg;
    const Knot& a = problem.knots[seg];
    const Knot& b = problem.knots[seg + 1];
    const double u = (t - a.t) / (b.t - a.t);
    coords.row(i) = ((1.0 - u) * a.point + u * b.point).transpose();
  }
  const ConstraintSet cs = build_constraints(problem, segments);
  enforce_constraints(cs, coords);
  return ChartCurve(grid, coords, problem.manifold);
}

}  // namespace rspline
