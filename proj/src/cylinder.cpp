#include "rspline/cylinder.hpp"

#include <cmath>
#include <limits>

namespace rspline {

namespace {

void check_knot_time(double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("middle knot time must lie in (0,1)");
}

InterpolationProblem winding_problem(double r, std::int64_t k0, std::int64_t m,
                                     const double* v) {
  InterpolationProblem p{ManifoldModel::euclidean(1)};
  p.order = 2;
  p.knots = {{0.0, Vec::Constant(1, 0.0)},
             {r, Vec::Constant(1, static_cast<double>(m) + 0.5)},
             {1.0, Vec::Constant(1, static_cast<double>(k0))}};
  if (v != nullptr) {
    p.velocity_site = 0;
    p.prescribed = {{1, Vec::Constant(1, *v)}};
  }
  return p;
}

}  // namespace

double golden_ratio_conjugate() { return (std::sqrt(5.0) - 1.0) / 2.0; }

double parabola_energy(double r, std::int64_t k0, std::int64_t m) {
  check_knot_time(r);
  const double num = static_cast<double>(m) + 0.5 - static_cast<double>(k0) * r;
  const double den = r * r - r;
  return 4.0 * num * num / (den * den);
}

std::vector<DirichletEntry> dirichlet_sequence(double r, std::int64_t k_max) {
  check_knot_time(r);
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");

  std::vector<std::int64_t> schedule;
  for (std::int64_t k = 1; k <= k_max; k *= 2) schedule.push_back(k);
  if (schedule.back() != k_max) schedule.push_back(k_max);

  std::vector<DirichletEntry> out;
  double best_gap = std::numeric_limits<double>::infinity();
  std::int64_t best_k0 = 0, best_m = 0;
  size_t next = 0;
  for (std::int64_t k0 = 1; k0 <= k_max && next < schedule.size(); ++k0) {
    const std::int64_t m = std::llround(static_cast<double>(k0) * r - 0.5);
    const double gap = std::abs(static_cast<double>(m) + 0.5 - static_cast<double>(k0) * r);
    if (gap < best_gap) {
      best_gap = gap;
      best_k0 = k0;
      best_m = m;
    }
    while (next < schedule.size() && k0 == schedule[next]) {
      DirichletEntry e;
      e.K = schedule[next];
      e.k0 = best_k0;
      e.m = best_m;
      e.gap = best_gap;
      e.energy_int = parabola_energy(r, best_k0, best_m);
      e.energy_f = 0.5 * e.energy_int;
      e.spline_energy_int =
          exact_energy_integral(solve_exact(winding_problem(r, best_k0, best_m, nullptr)));
      e.initial_speed = static_cast<double>(best_k0) -
                        (2.0 * best_m + 1.0 - 2.0 * best_k0 * r) / (r * r - r);
      out.push_back(e);
      ++next;
    }
  }
  return out;
}

ScanResult constrained_winding_scan(double r, double v, const ScanWindow& window) {
  check_knot_time(r);
  if (window.m_min > window.m_max || window.k_min > window.k_max)
    throw std::invalid_argument("scan window is empty");

  ScanResult result;
  result.best.energy_int = std::numeric_limits<double>::infinity();
  for (std::int64_t m = window.m_min; m <= window.m_max; ++m) {
    for (std::int64_t k0 = window.k_min; k0 <= window.k_max; ++k0) {
      ScanEntry cell;
      cell.m = m;
      cell.k0 = k0;
      cell.energy_int = exact_energy_integral(solve_exact(winding_problem(r, k0, m, &v)));
      cell.energy_f = 0.5 * cell.energy_int;
      if (cell.energy_int < result.best.energy_int) result.best = cell;
      result.entries.push_back(cell);
    }
  }
  return result;
}

double bump_curvature_integral(double delta) {
  if (delta <= 0.0) throw std::invalid_argument("bump half-width must be positive");
  return 240.0 / (7.0 * delta * delta * delta);
}

std::vector<NaturalPeriodicEntry> natural_periodic_sequence(double r, int j_max, double delta) {
  check_knot_time(r);
  if (j_max < 0) throw std::invalid_argument("j_max must be >= 0");
  if (!(r - delta > 0.0 && r + delta < 1.0))
    throw std::invalid_argument("bump support must stay inside (0,1)");

  const double phi_int = bump_curvature_integral(delta);
  const std::int64_t k_max = std::int64_t{1} << j_max;
  std::vector<NaturalPeriodicEntry> out;
  for (const DirichletEntry& d : dirichlet_sequence(r, k_max)) {
    NaturalPeriodicEntry e;
    e.K = d.K;
    e.k0 = d.k0;
    e.m = d.m;
    e.alpha = static_cast<double>(d.m) + 0.5 - static_cast<double>(d.k0) * r;
    e.energy_int = e.alpha * e.alpha * phi_int;
    e.energy_f = 0.5 * e.energy_int;
    out.push_back(e);
  }
  return out;
}

}  // namespace rspline
