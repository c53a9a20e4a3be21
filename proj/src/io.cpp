#include "rspline/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace rspline {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line.substr(0, line.find('#')));
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

double parse_double(const std::string& tok, int line, const std::string& field) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, field, "expected a number, got '" + tok + "'");
  }
}

std::int64_t parse_int(const std::string& tok, int line, const std::string& field) {
  try {
    size_t pos = 0;
    const std::int64_t v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, field, "expected an integer, got '" + tok + "'");
  }
}

Vec parse_vector(const std::vector<std::string>& tokens, size_t from, int line,
                 const std::string& field) {
  if (tokens.size() <= from) throw ParseError(line, field, "missing coordinates");
  Vec v(tokens.size() - from);
  for (size_t i = from; i < tokens.size(); ++i)
    v[i - from] = parse_double(tokens[i], line, field);
  return v;
}

std::string format_full(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

std::string json_scalar_to_string(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream ss;
    ss << std::setprecision(10) << v.get<double>();
    return ss.str();
  }
  return v.dump();
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

ParseError::ParseError(int line, std::string field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", field '" + field +
                         "': " + message),
      line_(line),
      field_(std::move(field)) {}

ProblemFile parse_problem(std::istream& in) {
  std::optional<ManifoldModel> manifold;
  int order = 2;
  std::vector<Knot> knots;
  std::vector<double> knot_lines;  // line numbers, for duplicate reporting
  int velocity_site = 0;
  bool site_seen = false;
  std::vector<std::pair<int, Vec>> prescribed;
  SolverOptions options;
  std::optional<std::pair<std::int64_t, std::int64_t>> winding;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];

    if (key == "manifold") {
      if (tokens.size() < 2) throw ParseError(lineno, key, "missing manifold name");
      const std::string& name = tokens[1];
      if (name == "euclidean") {
        if (tokens.size() != 3) throw ParseError(lineno, key, "euclidean needs a dimension");
        manifold = ManifoldModel::euclidean(
            static_cast<int>(parse_int(tokens[2], lineno, key)));
      } else if (name == "flat_cylinder") {
        manifold = ManifoldModel::flat_cylinder();
      } else if (name == "sphere") {
        manifold = tokens.size() > 2
                       ? ManifoldModel::sphere(parse_double(tokens[2], lineno, key))
                       : ManifoldModel::sphere();
      } else {
        throw ParseError(lineno, key, "unknown manifold '" + name + "'");
      }
    } else if (key == "order") {
      if (tokens.size() != 2) throw ParseError(lineno, key, "order needs one integer");
      order = static_cast<int>(parse_int(tokens[1], lineno, key));
    } else if (key == "knot") {
      if (tokens.size() < 3) throw ParseError(lineno, key, "knot needs a time and coordinates");
      Knot k;
      k.t = parse_double(tokens[1], lineno, key);
      k.point = parse_vector(tokens, 2, lineno, key);
      for (size_t i = 0; i < knots.size(); ++i) {
        if (knots[i].t == k.t)
          throw ParseError(lineno, key,
                           "duplicate knot time " + tokens[1] + " (first at line " +
                               std::to_string(static_cast<int>(knot_lines[i])) + ")");
      }
      knots.push_back(std::move(k));
      knot_lines.push_back(lineno);
    } else if (key == "velocity_site") {
      if (tokens.size() != 2) throw ParseError(lineno, key, "velocity_site needs one integer");
      velocity_site = static_cast<int>(parse_int(tokens[1], lineno, key));
      site_seen = true;
    } else if (key == "derivative") {
      if (tokens.size() < 3)
        throw ParseError(lineno, key, "derivative needs an order and coordinates");
      const int l = static_cast<int>(parse_int(tokens[1], lineno, key));
      prescribed.emplace_back(l, parse_vector(tokens, 2, lineno, key));
    } else if (key == "winding") {
      if (tokens.size() != 3) throw ParseError(lineno, key, "winding needs m and k0");
      winding = {parse_int(tokens[1], lineno, key), parse_int(tokens[2], lineno, key)};
    } else if (key == "option") {
      if (tokens.size() != 3) throw ParseError(lineno, key, "option needs a name and a value");
      const std::string& name = tokens[1];
      if (name == "grid")
        options.grid = static_cast<int>(parse_int(tokens[2], lineno, name));
      else if (name == "tol")
        options.tol = parse_double(tokens[2], lineno, name);
      else if (name == "max_iter")
        options.max_iter = static_cast<int>(parse_int(tokens[2], lineno, name));
      else
        throw ParseError(lineno, key, "unknown option '" + name + "'");
    } else {
      throw ParseError(lineno, key, "unknown field");
    }
  }

  if (!manifold) throw ParseError(lineno, "manifold", "problem file has no manifold line");
  if (knots.empty()) throw ParseError(lineno, "knot", "problem file has no knots");
  if (!prescribed.empty() && !site_seen)
    throw ParseError(lineno, "velocity_site",
                     "prescribed derivatives given but no velocity_site");

  ProblemFile pf{InterpolationProblem{*manifold}};
  pf.problem.order = order;
  pf.problem.knots = std::move(knots);
  pf.problem.velocity_site = velocity_site;
  pf.problem.prescribed = std::move(prescribed);
  pf.options = options;
  pf.winding = winding;
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  auto in = open_for_read(path);
  return parse_problem(in);
}

Json manifold_to_json(const ManifoldModel& m) {
  Json j;
  j["name"] = m.name();
  j["dim"] = m.dim();
  if (m.kind() == ManifoldKind::Sphere) j["pole_radius"] = m.pole_radius();
  return j;
}

ManifoldModel manifold_from_json(const Json& j) {
  const std::string name = j.at("name").get<std::string>();
  if (name == "euclidean") return ManifoldModel::euclidean(j.at("dim").get<int>());
  if (name == "flat_cylinder") return ManifoldModel::flat_cylinder();
  if (name == "sphere") return ManifoldModel::sphere(j.at("pole_radius").get<double>());
  throw std::runtime_error("unknown manifold name '" + name + "'");
}

void save_curve(const std::string& path, const ChartCurve& curve) {
  auto out = open_for_write(path);
  out << "# t";
  for (int c = 0; c < curve.dim(); ++c) out << " x" << c;
  out << "\n";
  for (int i = 0; i < curve.grid.nodes(); ++i) {
    out << format_full(curve.grid.t(i));
    for (int c = 0; c < curve.dim(); ++c) out << " " << format_full(curve.coords(i, c));
    out << "\n";
  }

  Json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["kind"] = "curve";
  meta["manifold"] = manifold_to_json(curve.manifold);
  meta["segments"] = curve.grid.segments;
  open_for_write(path + ".meta.json") << meta.dump(2) << "\n";
}

ChartCurve load_curve(const std::string& path) {
  Json meta;
  open_for_read(path + ".meta.json") >> meta;
  if (meta.at("kind") != "curve")
    throw std::runtime_error("'" + path + "' is not a curve file");
  const ManifoldModel manifold = manifold_from_json(meta.at("manifold"));
  const TimeGrid grid(meta.at("segments").get<int>());

  Mat coords(grid.nodes(), manifold.dim());
  auto in = open_for_read(path);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (row >= grid.nodes()) throw std::runtime_error("curve file has too many rows");
    if (static_cast<int>(tokens.size()) != manifold.dim() + 1)
      throw std::runtime_error("curve row " + std::to_string(row + 1) +
                               " has the wrong column count");
    for (int c = 0; c < manifold.dim(); ++c) coords(row, c) = std::stod(tokens[c + 1]);
    ++row;
  }
  if (row != grid.nodes()) throw std::runtime_error("curve file has too few rows");
  return ChartCurve(grid, std::move(coords), manifold);
}

Json to_json(const PiecewisePolynomial& poly) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "polyspline";
  j["order"] = poly.order;
  j["breakpoints"] = std::vector<double>(poly.breakpoints.data(),
                                         poly.breakpoints.data() + poly.breakpoints.size());
  Json pieces = Json::array();
  for (const Mat& c : poly.coeffs) {
    Json piece = Json::array();
    for (int r = 0; r < c.rows(); ++r) {
      Json row = Json::array();
      for (int cc = 0; cc < c.cols(); ++cc) row.push_back(c(r, cc));
      piece.push_back(std::move(row));
    }
    pieces.push_back(std::move(piece));
  }
  j["coefficients"] = std::move(pieces);
  return j;
}

void save_polyspline(const std::string& path, const PiecewisePolynomial& poly) {
  open_for_write(path) << to_json(poly).dump(2) << "\n";
}

PiecewisePolynomial load_polyspline(const std::string& path) {
  Json j;
  open_for_read(path) >> j;
  if (j.at("kind") != "polyspline")
    throw std::runtime_error("'" + path + "' is not a polyspline file");
  PiecewisePolynomial poly;
  poly.order = j.at("order").get<int>();
  const auto bp = j.at("breakpoints").get<std::vector<double>>();
  poly.breakpoints = Eigen::Map<const Vec>(bp.data(), bp.size());
  for (const Json& piece : j.at("coefficients")) {
    const int rows = static_cast<int>(piece.size());
    const int cols = static_cast<int>(piece.at(0).size());
    Mat c(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int cc = 0; cc < cols; ++cc) c(r, cc) = piece.at(r).at(cc).get<double>();
    poly.coeffs.push_back(std::move(c));
  }
  return poly;
}

bool is_polyspline_file(const std::string& path) {
  auto in = open_for_read(path);
  char first = 0;
  in >> std::ws >> first;
  return first == '{';
}

Json to_json(const ConvergenceReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["iterations"] = report.iterations;
  j["final_energy"] = report.final_energy;
  j["final_grad_norm"] = report.final_grad_norm;
  switch (report.reason) {
    case Termination::GradientTolerance: j["reason"] = "gradient_tolerance"; break;
    case Termination::MaxIterExceeded: j["reason"] = "max_iter_exceeded"; break;
    case Termination::LineSearchStalled: j["reason"] = "line_search_stalled"; break;
  }
  j["converged"] = report.converged();
  j["energy_trace"] = report.energy_trace;
  j["coercivity_trace"] = report.coercivity_trace;
  return j;
}

Json to_json(const VerificationReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["el_residual_max"] = report.el_residual_max;
  Json jumps = Json::array();
  for (const auto& e : report.junction_jumps)
    jumps.push_back({{"t", e.t}, {"velocity_site", e.velocity_site}, {"jump", e.jump}});
  j["junction_jumps"] = std::move(jumps);
  Json nats = Json::array();
  for (const auto& e : report.natural_values)
    nats.push_back({{"t", e.t}, {"value", e.value}});
  j["natural_values"] = std::move(nats);
  j["structure_residual"] = report.structure_residual;
  j["h"] = report.h;
  j["segments"] = report.segments;
  return j;
}

Json to_json(const std::vector<DirichletEntry>& entries) {
  Json rows = Json::array();
  for (const auto& e : entries) {
    rows.push_back({{"K", e.K},
                    {"k0", e.k0},
                    {"m", e.m},
                    {"gap", e.gap},
                    {"energy_int", e.energy_int},
                    {"energy_f", e.energy_f},
                    {"spline_energy_int", e.spline_energy_int},
                    {"initial_speed", e.initial_speed}});
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["entries"] = std::move(rows);
  return j;
}

Json to_json(const ScanResult& result) {
  Json rows = Json::array();
  for (const auto& e : result.entries) {
    rows.push_back(
        {{"m", e.m}, {"k0", e.k0}, {"energy_int", e.energy_int}, {"energy_f", e.energy_f}});
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["entries"] = std::move(rows);
  j["best"] = {{"m", result.best.m},
               {"k0", result.best.k0},
               {"energy_int", result.best.energy_int},
               {"energy_f", result.best.energy_f}};
  return j;
}

Json to_json(const std::vector<NaturalPeriodicEntry>& entries) {
  Json rows = Json::array();
  for (const auto& e : entries) {
    rows.push_back({{"K", e.K},
                    {"k0", e.k0},
                    {"m", e.m},
                    {"alpha", e.alpha},
                    {"energy_int", e.energy_int},
                    {"energy_f", e.energy_f}});
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["entries"] = std::move(rows);
  return j;
}

std::string render_table(const Json& rows) {
  // A single object renders as key/value lines; an array of objects as a
  // fixed-width table with a header row.
  std::ostringstream out;
  if (rows.is_object()) {
    size_t width = 0;
    for (auto it = rows.begin(); it != rows.end(); ++it)
      width = std::max(width, it.key().size());
    for (auto it = rows.begin(); it != rows.end(); ++it) {
      if (!it.value().is_primitive()) continue;
      out << std::left << std::setw(static_cast<int>(width) + 2) << it.key()
          << json_scalar_to_string(it.value()) << "\n";
    }
    return out.str();
  }
  if (!rows.is_array() || rows.empty()) return "";

  std::vector<std::string> keys;
  for (auto it = rows.front().begin(); it != rows.front().end(); ++it)
    keys.push_back(it.key());
  std::vector<std::vector<std::string>> cells;
  std::vector<size_t> width(keys.size());
  for (size_t c = 0; c < keys.size(); ++c) width[c] = keys[c].size();
  for (const Json& row : rows) {
    std::vector<std::string> line;
    for (size_t c = 0; c < keys.size(); ++c) {
      line.push_back(json_scalar_to_string(row.at(keys[c])));
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (size_t c = 0; c < line.size(); ++c)
      out << std::left << std::setw(static_cast<int>(width[c]) + 2) << line[c];
    out << "\n";
  };
  emit(keys);
  for (const auto& line : cells) emit(line);
  return out.str();
}

}  // namespace rspline
