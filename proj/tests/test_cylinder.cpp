#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rspline/cylinder.hpp"

using namespace rspline;

TEST_CASE("parabola energy: exact zeros and quadrature agreement") {
  CHECK(parabola_energy(0.5, 1, 0) == 0.0);  // m + 1/2 = k0 r exactly
  CHECK(parabola_energy(0.25, 2, 0) == 0.0);

  std::mt19937 rng(60);
  std::uniform_real_distribution<double> ur(0.1, 0.9);
  std::uniform_int_distribution<std::int64_t> uk(-50, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const double r = ur(rng);
    const std::int64_t k0 = uk(rng), m = uk(rng);
    const double lib = parabola_energy(r, k0, m);
    const double ref = oracles::parabola_energy_quadrature(r, m + 0.5, static_cast<double>(k0));
    CHECK(std::abs(lib - ref) <= 1e-10 * std::max(1.0, ref));
  }
}

TEST_CASE("dirichlet sequence: gaps non-increasing, energies collapse, speeds blow up") {
  const double r = golden_ratio_conjugate();
  const auto entries = dirichlet_sequence(r, 10000);
  REQUIRE(entries.size() >= 8);
  for (size_t i = 1; i < entries.size(); ++i) CHECK(entries[i].gap <= entries[i - 1].gap);

  double e100 = 0.0, e10000 = 0.0;
  double speed_max = 0.0;
  for (const auto& e : entries) {
    if (e.K <= 100) e100 = e.energy_int;
    e10000 = e.energy_int;
    speed_max = std::max(speed_max, std::abs(e.initial_speed));
  }
  CHECK(e10000 < e100);
  CHECK(e10000 < 1e-3);
  CHECK(speed_max > 1e3);

  // The winning end classes follow the recurrence a' = 4a + a_prev
  // (denominators of the continued fraction of 2r + 1 = sqrt 5).
  std::vector<std::int64_t> winners;
  for (const auto& e : entries)
    if (winners.empty() || winners.back() != e.k0) winners.push_back(e.k0);
  std::vector<std::int64_t> expect = {1, 4, 17, 72, 305, 1292, 5473};
  REQUIRE(winners.size() >= expect.size());
  for (size_t i = 0; i < expect.size(); ++i) CHECK(winners[i] == expect[i]);

  // The genuine 3-point spline optimum is never above the parabola energy.
  for (const auto& e : entries)
    CHECK(e.spline_energy_int <= e.energy_int * (1.0 + 1e-12) + 1e-15);
}

TEST_CASE("constrained winding scan: stable argmin, positive minimum, coercive boundary") {
  const double r = golden_ratio_conjugate();
  const ScanResult small = constrained_winding_scan(r, 0.0, {-10, 10, -10, 10});
  const ScanResult wide = constrained_winding_scan(r, 0.0, {-20, 20, -20, 20});
  CHECK(small.best.m == wide.best.m);
  CHECK(small.best.k0 == wide.best.k0);
  CHECK(wide.best.energy_int > 0.0);

  double boundary_min = std::numeric_limits<double>::infinity();
  for (const auto& e : wide.entries) {
    if (std::abs(e.m) == 20 || std::abs(e.k0) == 20)
      boundary_min = std::min(boundary_min, e.energy_int);
  }
  CHECK(boundary_min > 10.0 * wide.best.energy_int);
}

TEST_CASE("constrained winding scan: aligned rational case reaches zero energy") {
  // r = 1/2 and v = 1: the unit-slope line hits (1/2, 1/2) and (1, 1),
  // i.e. class (m, k0) = (0, 1) carries a zero-energy curve.
  const ScanResult res = constrained_winding_scan(0.5, 1.0, {-3, 3, -3, 3});
  CHECK(res.best.m == 0);
  CHECK(res.best.k0 == 1);
  CHECK(res.best.energy_int <= 1e-18);
}

TEST_CASE("bump curvature integral: closed form, quadrature, and delta scaling") {
  for (double delta : {0.05, 0.1, 0.2}) {
    const oracles::Bump bump{golden_ratio_conjugate(), delta};
    CHECK(bump_curvature_integral(delta) ==
          doctest::Approx(bump.curvature_integral()).epsilon(1e-10));
    CHECK(bump_curvature_integral(delta) ==
          doctest::Approx(240.0 / (7.0 * delta * delta * delta)).epsilon(1e-14));
  }
  const std::vector<double> deltas = {0.2, 0.1, 0.05};
  std::vector<double> values;
  for (double d : deltas) values.push_back(bump_curvature_integral(d));
  const double slope = oracles::fit_order(deltas, values);
  CHECK(slope >= -3.2);
  CHECK(slope <= -2.8);
}

TEST_CASE("bump: boundary identities hold exactly") {
  const double r = golden_ratio_conjugate(), delta = 0.1;
  const oracles::Bump bump{r, delta};
  // The peak is reached through u = (r - (r - delta)) / delta, which rounds.
  CHECK(bump.eval(r) == doctest::Approx(1.0).epsilon(1e-14));
  for (double t : {r - delta, r + delta, 0.0, 1.0}) {
    CHECK(bump.eval(t) == 0.0);
    CHECK(bump.eval(t, 1) == 0.0);
    CHECK(bump.eval(t, 2) == 0.0);
  }
  // The half-polynomials themselves shut off flat at both ends of a half.
  CHECK(oracles::Bump::smoothstep(0.0, 1) == 0.0);
  CHECK(oracles::Bump::smoothstep(1.0, 1) == 0.0);
  CHECK(oracles::Bump::smoothstep(0.0, 2) == 0.0);
  CHECK(oracles::Bump::smoothstep(1.0, 2) == 0.0);
}

TEST_CASE("natural periodic sequence: energies collapse with the winding gaps") {
  const double r = golden_ratio_conjugate();
  const auto entries = natural_periodic_sequence(r, 14, 0.1);
  REQUIRE(entries.size() >= 8);
  CHECK(entries.back().K >= 10000);
  CHECK(entries.back().energy_int <= entries.front().energy_int * 1e-2);
  for (const auto& e : entries) {
    CHECK(e.energy_int ==
          doctest::Approx(e.alpha * e.alpha * bump_curvature_integral(0.1)).epsilon(1e-12));
    CHECK(e.energy_f == doctest::Approx(0.5 * e.energy_int).epsilon(1e-12));
  }
}

TEST_CASE("natural periodic sequence: support must stay inside the interval") {
  CHECK_THROWS(natural_periodic_sequence(0.05, 4, 0.1));
  CHECK_THROWS(natural_periodic_sequence(0.95, 4, 0.1));
}
