#ifndef RSPLINE_CYLINDER_HPP_
#define RSPLINE_CYLINDER_HPP_

#include <cstdint>
#include <vector>

#include "rspline/polyspline.hpp"
#include "rspline/problem.hpp"

namespace rspline {

/// Slowest-approximable irrational in (0,1): (√5 − 1) / 2.
double golden_ratio_conjugate();

/// ∫₀¹ q̈² dt for the parabola through (0,0), (r, m+½), (1, k₀) on the
/// universal cover: 4 (m + ½ − k₀ r)² / (r² − r)².
double parabola_energy(double r, std::int64_t k0, std::int64_t m);

/// A minimizing-sequence member: the best winding pair with end class
/// k₀ ≤ K, its parabola energies under both conventions, the true 3-point
/// spline optimum of the same class, and the parabola's initial speed.
struct DirichletEntry {
  std::int64_t K = 0;
  std::int64_t k0 = 0;
  std::int64_t m = 0;
  double gap = 0.0;            // |m + ½ − k₀ r|
  double energy_int = 0.0;     // ∫ γ̈²  (parabola)
  double energy_f = 0.0;       // ½ ∫ γ̈² (parabola)
  double spline_energy_int = 0.0;  // ∫ γ̈² of the natural 3-point cubic spline
  double initial_speed = 0.0;  // k₀ − (2m + 1 − 2k₀r)/(r² − r)
};

/// Best winding pair for each K in the doubling schedule 1, 2, 4, … up to
/// K_max (K_max itself appended when the schedule skips it), found by
/// exhaustive scan over k₀ ≤ K with m the nearest integer to k₀r − ½.
std::vector<DirichletEntry> dirichlet_sequence(double r, std::int64_t k_max);

/// One cell of the constrained scan: exact spline energy of the class
/// (m, k₀) with γ(0) = 0, γ′(0) = v, γ(r) = m + ½, γ(1) = k₀.
struct ScanEntry {
  std::int64_t m = 0;
  std::int64_t k0 = 0;
  double energy_int = 0.0;
  double energy_f = 0.0;
};

struct ScanWindow {
  std::int64_t m_min, m_max, k_min, k_max;
};

struct ScanResult {
  std::vector<ScanEntry> entries;  // row-major over (m, k₀)
  ScanEntry best;
};

/// Exact energies of every winding class in the window for a fixed initial
/// velocity, plus the argmin. With v prescribed the infimum is attained.
ScanResult constrained_winding_scan(double r, double v, const ScanWindow& window);

/// ∫ φ̈² for the C² bump of half-width δ: two mirrored quintics on
/// [r−δ, r] and [r, r+δ] with unit peak and flat (value, slope, second
/// derivative) decay to zero at the support ends. Equals 240 / (7 δ³).
double bump_curvature_integral(double delta);

/// A natural-and-periodic competitor: the winding line ω_{k_j} plus
/// α_j · φ with α_j = m_j + ½ − k_j r, whose energy α_j² ∫φ̈² still → 0.
struct NaturalPeriodicEntry {
  std::int64_t K = 0;
  std::int64_t k0 = 0;
  std::int64_t m = 0;
  double alpha = 0.0;
  double energy_int = 0.0;  // α² ∫ φ̈²
  double energy_f = 0.0;
};

std::vector<NaturalPeriodicEntry> natural_periodic_sequence(double r, int j_max, double delta);

}  // namespace rspline

#endif  // RSPLINE_CYLINDER_HPP_
