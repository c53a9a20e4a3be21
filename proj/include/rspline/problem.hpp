#ifndef RSPLINE_PROBLEM_HPP_
#define RSPLINE_PROBLEM_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "rspline/manifold.hpp"

namespace rspline {

class GridError : public std::runtime_error {
 public:
  explicit GridError(const std::string& what) : std::runtime_error(what) {}
};

struct Knot {
  double t;
  Vec point;
};

/// Interpolation data: knots (t_i, p_i) on [0,1], spline order k, and one
/// site t_j carrying prescribed derivatives of orders 1..k-1. For k = 2 the
/// prescribed list holds a single velocity, or is empty (the no-velocity
/// variant with natural conditions at both ends).
struct InterpolationProblem {
  ManifoldModel manifold;
  int order = 2;  // k
  std::vector<Knot> knots;
  int velocity_site = 0;  // index j into knots; ignored when prescribed empty
  std::vector<std::pair<int, Vec>> prescribed;  // (order ℓ, v_ℓ)

  int segments() const { return static_cast<int>(knots.size()) - 1; }  // N
  bool has_velocity() const { return !prescribed.empty(); }

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

/// Node index of knot time t on a grid with M segments; throws GridError if
/// t does not land exactly on a node.
int knot_node_index(double t, int segments);

/// Least M <= max_segments putting every knot time on a node, or nullopt.
std::optional<int> suggest_grid_size(const std::vector<Knot>& knots, int max_segments = 1 << 16);

}  // namespace rspline

#endif  // RSPLINE_PROBLEM_HPP_
