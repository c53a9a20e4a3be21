#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rspline/io.hpp"

using namespace rspline;

namespace {
std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("problem parsing: full file round-trips into a valid problem") {
  std::istringstream in(R"(# sphere interpolation with one velocity
manifold sphere 10.0
order 2
knot 0 0.2 0.1
knot 1 1.1 -0.4
velocity_site 0
derivative 1 0.5 0.3
option grid 128
option tol 1e-6
)");
  const ProblemFile pf = parse_problem(in);
  CHECK(pf.problem.manifold.kind() == ManifoldKind::Sphere);
  CHECK(pf.problem.knots.size() == 2);
  CHECK(pf.problem.velocity_site == 0);
  CHECK(pf.problem.prescribed.size() == 1);
  CHECK(pf.options.grid == 128);
  CHECK(pf.options.tol == doctest::Approx(1e-6));
  CHECK_NOTHROW(pf.problem.validate());
}

TEST_CASE("problem parsing: duplicate knot times are located precisely") {
  std::istringstream in(R"(manifold euclidean 1
order 2
knot 0 0
knot 0.5 1
knot 0.5 2
knot 1 0
)");
  try {
    parse_problem(in);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "knot");
    CHECK(e.line() == 5);
  }
}

TEST_CASE("problem parsing: unknown manifolds and malformed lines are rejected") {
  std::istringstream bad1("manifold torus 2\norder 2\nknot 0 0\nknot 1 1\n");
  CHECK_THROWS_AS(parse_problem(bad1), ParseError);
  std::istringstream bad2("manifold euclidean 1\norder two\nknot 0 0\nknot 1 1\n");
  CHECK_THROWS_AS(parse_problem(bad2), ParseError);
}

TEST_CASE("grid helpers: node mapping and suggestions") {
  CHECK(knot_node_index(0.25, 8) == 2);
  CHECK_THROWS_AS(knot_node_index(0.3, 8), GridError);
  const std::vector<Knot> knots = {{0.0, Vec::Zero(1)}, {0.3, Vec::Zero(1)}, {1.0, Vec::Zero(1)}};
  CHECK(suggest_grid_size(knots).value() == 10);
  const std::vector<Knot> irr = {{0.0, Vec::Zero(1)},
                                 {std::sqrt(2.0) / 2.0, Vec::Zero(1)},
                                 {1.0, Vec::Zero(1)}};
  CHECK_FALSE(suggest_grid_size(irr, 1 << 12).has_value());
}

TEST_CASE("curve serialization: tabular text with sidecar metadata round-trips") {
  std::mt19937 rng(70);
  const ChartCurve c = oracles::random_curve(rng, ManifoldModel::sphere(), 32);
  const auto path = temp_file("rspline_curve_test.txt");
  save_curve(path.string(), c);
  const ChartCurve back = load_curve(path.string());
  CHECK(back.grid.segments == c.grid.segments);
  CHECK(back.manifold.kind() == c.manifold.kind());
  CHECK((back.coords - c.coords).lpNorm<Eigen::Infinity>() == 0.0);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".meta.json");
}

TEST_CASE("curve serialization: verification fields are bit-identical after reload") {
  InterpolationProblem p{ManifoldModel::sphere()};
  p.order = 2;
  p.knots = {{0.0, (Vec(2) << 0.2, 0.1).finished()},
             {1.0, (Vec(2) << 1.1, -0.4).finished()}};
  p.velocity_site = 0;
  p.prescribed = {{1, (Vec(2) << 0.5, 0.3).finished()}};
  std::mt19937 rng(71);
  ChartCurve c = oracles::random_curve(rng, p.manifold, 64, 0.5);
  const Json before = to_json(verify(c, p));
  const auto path = temp_file("rspline_curve_bits.txt");
  save_curve(path.string(), c);
  const ChartCurve back = load_curve(path.string());
  const Json after = to_json(verify(back, p));
  CHECK(before.dump() == after.dump());
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".meta.json");
}

TEST_CASE("polyspline serialization: structured file round-trips and is detected") {
  InterpolationProblem p{ManifoldModel::euclidean(2)};
  p.order = 2;
  p.knots = {{0.0, Vec::Zero(2)}, {0.5, Vec::Ones(2)}, {1.0, Vec::Zero(2)}};
  p.velocity_site = 0;
  p.prescribed = {{1, (Vec(2) << 1.0, -1.0).finished()}};
  const PiecewisePolynomial sol = solve_exact(p);
  const auto path = temp_file("rspline_poly_test.json");
  save_polyspline(path.string(), sol);
  CHECK(is_polyspline_file(path.string()));
  const PiecewisePolynomial back = load_polyspline(path.string());
  CHECK(back.order == sol.order);
  for (double t : {0.0, 0.3, 0.77, 1.0})
    CHECK((back.eval(t) - sol.eval(t)).norm() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("structured reports: schema version present everywhere") {
  InterpolationProblem p{ManifoldModel::euclidean(1)};
  p.order = 2;
  p.knots = {{0.0, Vec::Zero(1)}, {1.0, Vec::Ones(1)}};
  p.velocity_site = 0;
  p.prescribed = {{1, Vec::Zero(1)}};
  const PiecewisePolynomial sol = solve_exact(p);
  CHECK(to_json(sol)["schema_version"] == kSchemaVersion);
  CHECK(to_json(verify(sol, p))["schema_version"] == kSchemaVersion);
  const auto seq = dirichlet_sequence(golden_ratio_conjugate(), 64);
  CHECK(to_json(seq)["schema_version"] == kSchemaVersion);
}

TEST_CASE("render_table: objects become key/value rows, arrays become columns") {
  Json obj = {{"alpha", 1.5}, {"beta", "x"}};
  const std::string t1 = render_table(obj);
  CHECK(t1.find("alpha") != std::string::npos);
  CHECK(t1.find("1.5") != std::string::npos);

  Json rows = Json::array({{{"a", 1}, {"b", 2.5}}, {{"a", 10}, {"b", -1.0}}});
  const std::string t2 = render_table(rows);
  CHECK(t2.find("a") != std::string::npos);
  CHECK(t2.find("10") != std::string::npos);
}
