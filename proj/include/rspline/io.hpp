#ifndef RSPLINE_IO_HPP_
#define RSPLINE_IO_HPP_

#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rspline/cylinder.hpp"
#include "rspline/optimizer.hpp"
#include "rspline/polyspline.hpp"
#include "rspline/verification.hpp"

namespace rspline {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Problem-file parse failure, carrying the 1-based line and the field name.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, std::string field, const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct SolverOptions {
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<int> max_iter;
};

/// A parsed problem file: the interpolation data plus any solver options
/// and winding targets the file carried.
struct ProblemFile {
  InterpolationProblem problem;
  SolverOptions options;
  std::optional<std::pair<std::int64_t, std::int64_t>> winding;  // (m, k0)
};

/// Line-oriented format with explicit field names; '#' starts a comment.
/// Lines: manifold euclidean <dim> | flat_cylinder | sphere [pole_radius];
/// order <k>; knot <t> <coords…>; velocity_site <index>;
/// derivative <order> <coords…>; winding <m> <k0>; option <name> <value>.
ProblemFile parse_problem(std::istream& in);
ProblemFile load_problem(const std::string& path);

ManifoldModel manifold_from_json(const Json& j);
Json manifold_to_json(const ManifoldModel& m);

/// Curves are plain tabular text (t, coords… per row) plus a sidecar
/// metadata document at <path>.meta.json.
void save_curve(const std::string& path, const ChartCurve& curve);
ChartCurve load_curve(const std::string& path);

void save_polyspline(const std::string& path, const PiecewisePolynomial& poly);
PiecewisePolynomial load_polyspline(const std::string& path);
/// True when the file holds a serialized piecewise polynomial rather than
/// a tabular curve.
bool is_polyspline_file(const std::string& path);

Json to_json(const ConvergenceReport& report);
Json to_json(const VerificationReport& report);
Json to_json(const PiecewisePolynomial& poly);
Json to_json(const std::vector<DirichletEntry>& entries);
Json to_json(const ScanResult& result);
Json to_json(const std::vector<NaturalPeriodicEntry>& entries);

/// Fixed-width text table from an array of flat objects (or a single
/// object rendered as key/value rows).
std::string render_table(const Json& rows);

}  // namespace rspline

#endif  // RSPLINE_IO_HPP_
