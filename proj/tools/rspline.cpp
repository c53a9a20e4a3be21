#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rspline/io.hpp"

namespace {

using rspline::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSingular = 3;
constexpr int kExitNoConvergence = 4;

struct CommonFlags {
  std::string out;
  std::string format = "table";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonFlags* common) {
  cmd->add_option("--out", common->out, "write output to this path instead of stdout");
  cmd->add_option("--format", common->format, "output format")
      ->check(CLI::IsMember({"table", "structured"}));
  cmd->add_option("--seed", common->seed, "random seed (reserved for multi-start runs)");
}

void emit(const CommonFlags& common, const Json& structured) {
  const std::string text =
      common.format == "structured" ? structured.dump(2) + "\n"
      : structured.contains("entries") ? rspline::render_table(structured.at("entries"))
                                       : rspline::render_table(structured);
  if (common.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(common.out);
    if (!out) throw std::runtime_error("cannot open '" + common.out + "' for writing");
    out << text;
  }
}

double parse_knot_time(const std::string& text) {
  if (text == "golden") return rspline::golden_ratio_conjugate();
  return std::stod(text);
}

int run_solve_exact(const std::string& problem_path, const CommonFlags& common) {
  const rspline::ProblemFile pf = rspline::load_problem(problem_path);
  pf.problem.validate();
  const rspline::PiecewisePolynomial poly = rspline::solve_exact(pf.problem);

  Json report = rspline::to_json(poly);
  report["energy_f"] = rspline::exact_energy(poly);
  report["energy_int"] = rspline::exact_energy_integral(poly);

  if (common.format == "table") {
    // Dense samples, one row per time.
    Json rows = Json::array();
    const int samples = 100;
    for (int i = 0; i <= samples; ++i) {
      const double t = static_cast<double>(i) / samples;
      Json row;
      row["t"] = t;
      const rspline::Vec x = i == 0 ? poly.eval_right(t) : poly.eval(t);
      for (int c = 0; c < poly.dim(); ++c) row["x" + std::to_string(c)] = x[c];
      rows.push_back(std::move(row));
    }
    Json table;
    table["entries"] = std::move(rows);
    std::cerr << "energy_f " << report["energy_f"].get<double>() << "\n";
    emit(common, table);
  } else {
    emit(common, report);
  }
  return kExitOk;
}

int run_minimize(const std::string& problem_path, int grid, double tol, int max_iter,
                 const CommonFlags& common) {
  const rspline::ProblemFile pf = rspline::load_problem(problem_path);
  pf.problem.validate();

  int segments = grid;
  if (segments == 0 && pf.options.grid) segments = *pf.options.grid;
  if (segments == 0) {
    const auto suggested = rspline::suggest_grid_size(pf.problem.knots);
    if (!suggested) throw rspline::GridError("no grid up to 2^16 holds every knot time");
    segments = *suggested;
    while (segments < 128) segments *= 2;
  }

  for (const auto& knot : pf.problem.knots) {
    try {
      rspline::knot_node_index(knot.t, segments);
    } catch (const rspline::GridError&) {
      std::string msg = "knot time " + std::to_string(knot.t) +
                        " does not land on a node of a grid with " +
                        std::to_string(segments) + " segments";
      if (const auto s = rspline::suggest_grid_size(pf.problem.knots))
        msg += "; try --grid " + std::to_string(*s);
      throw rspline::GridError(msg);
    }
  }

  rspline::OptimizerOptions opts;
  if (pf.options.tol) opts.tol_grad = *pf.options.tol;
  if (pf.options.max_iter) opts.max_iter = *pf.options.max_iter;
  if (tol > 0.0) opts.tol_grad = tol;
  if (max_iter > 0) opts.max_iter = max_iter;

  auto [curve, report] = rspline::minimize(pf.problem, segments, opts);

  Json j = rspline::to_json(report);
  j["grid_segments"] = segments;
  j["verification"] = rspline::to_json(rspline::verify(curve, pf.problem));

  if (!common.out.empty()) {
    rspline::save_curve(common.out, curve);
    CommonFlags to_stdout = common;
    to_stdout.out.clear();
    emit(to_stdout, j);
  } else {
    emit(common, j);
  }
  if (!report.converged()) {
    std::cerr << "minimize did not converge (" << j["reason"].get<std::string>() << ")\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int run_verify(const std::string& solution_path, const std::string& problem_path,
               const CommonFlags& common) {
  const rspline::ProblemFile pf = rspline::load_problem(problem_path);
  pf.problem.validate();
  rspline::VerificationReport report;
  if (rspline::is_polyspline_file(solution_path)) {
    report = rspline::verify(rspline::load_polyspline(solution_path), pf.problem);
  } else {
    report = rspline::verify(rspline::load_curve(solution_path), pf.problem);
  }
  emit(common, rspline::to_json(report));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spline-energy solvers and certificates on model manifolds"};
  app.require_subcommand(1);

  std::string problem_path, solution_path;

  CommonFlags solve_flags;
  auto* solve = app.add_subcommand("solve-exact", "exact flat-space polynomial spline");
  solve->add_option("problem", problem_path, "problem file")->required();
  add_common(solve, &solve_flags);

  CommonFlags min_flags;
  int grid = 0, max_iter = 0;
  double tol = 0.0;
  auto* minimize = app.add_subcommand("minimize", "discrete energy minimization");
  minimize->add_option("problem", problem_path, "problem file")->required();
  minimize->add_option("--grid", grid, "grid segment count M");
  minimize->add_option("--tol", tol, "gradient tolerance");
  minimize->add_option("--max-iter", max_iter, "iteration cap");
  add_common(minimize, &min_flags);

  CommonFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "certificate checks on a solution file");
  verify->add_option("solution", solution_path, "curve or polyspline file")->required();
  verify->add_option("problem", problem_path, "problem file")->required();
  add_common(verify, &verify_flags);

  auto* cylinder = app.add_subcommand("cylinder", "flat-cylinder winding experiments");
  cylinder->require_subcommand(1);

  CommonFlags seq_flags;
  std::string r_text = "golden";
  std::int64_t k_max = 10000;
  auto* sequence = cylinder->add_subcommand("sequence", "minimizing-sequence table");
  sequence->add_option("--r", r_text, "middle knot time, or 'golden'");
  sequence->add_option("--K", k_max, "largest end winding class");
  add_common(sequence, &seq_flags);

  CommonFlags scan_flags;
  std::string scan_r = "golden";
  double v = 0.0;
  std::int64_t window = 10;
  auto* scan = cylinder->add_subcommand("scan", "exact energies per winding class");
  scan->add_option("--r", scan_r, "middle knot time, or 'golden'");
  scan->add_option("--v", v, "prescribed initial velocity");
  scan->add_option("--window", window, "half-width W of the class window [-W,W]^2");
  add_common(scan, &scan_flags);

  CommonFlags np_flags;
  std::string np_r = "golden";
  double delta = 0.1;
  int j_max = 14;
  auto* natural = cylinder->add_subcommand("natural-periodic",
                                           "natural + periodic competitor energies");
  natural->add_option("--r", np_r, "middle knot time, or 'golden'");
  natural->add_option("--delta", delta, "bump half-width");
  natural->add_option("--j-max", j_max, "schedule length: K runs to 2^j_max");
  add_common(natural, &np_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve_exact(problem_path, solve_flags);
    if (minimize->parsed()) return run_minimize(problem_path, grid, tol, max_iter, min_flags);
    if (verify->parsed()) return run_verify(solution_path, problem_path, verify_flags);
    if (sequence->parsed()) {
      emit(seq_flags, rspline::to_json(
                          rspline::dirichlet_sequence(parse_knot_time(r_text), k_max)));
      return kExitOk;
    }
    if (scan->parsed()) {
      const rspline::ScanWindow w{-window, window, -window, window};
      emit(scan_flags,
           rspline::to_json(rspline::constrained_winding_scan(parse_knot_time(scan_r), v, w)));
      return kExitOk;
    }
    if (natural->parsed()) {
      emit(np_flags, rspline::to_json(rspline::natural_periodic_sequence(
                         parse_knot_time(np_r), j_max, delta)));
      return kExitOk;
    }
  } catch (const rspline::SingularSystem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSingular;
  } catch (const rspline::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rspline::GridError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
