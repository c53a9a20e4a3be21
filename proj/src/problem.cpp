#include "rspline/problem.hpp"

#include <cmath>

namespace rspline {

void InterpolationProblem::validate() const {
  if (order < 2) throw std::invalid_argument("spline order k must be >= 2");
  if (knots.size() < 2) throw std::invalid_argument("need at least two knots");
  if (std::abs(knots.front().t) > 0.0) throw std::invalid_argument("first knot time must be 0");
  if (std::abs(knots.back().t - 1.0) > 0.0) throw std::invalid_argument("last knot time must be 1");
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i].t < knots[i + 1].t))
      throw std::invalid_argument("knot times must be strictly increasing");
  }
  for (const Knot& k : knots) {
    if (k.point.size() != manifold.dim())
      throw std::invalid_argument("knot point has wrong dimension");
    manifold.check_admissible(k.point);
  }
  if (!prescribed.empty()) {
    if (velocity_site < 0 || velocity_site >= static_cast<int>(knots.size()))
      throw std::invalid_argument("velocity site index out of range");
    if (order == 2) {
      if (prescribed.size() != 1 || prescribed[0].first != 1)
        throw std::invalid_argument("k = 2 admits exactly one prescribed derivative, of order 1");
    } else {
      if (static_cast<int>(prescribed.size()) != order - 1)
        throw std::invalid_argument("k-spline requires prescribed derivatives of orders 1..k-1");
      for (int l = 1; l < order; ++l) {
        if (prescribed[l - 1].first != l)
          throw std::invalid_argument("prescribed derivatives must be listed as orders 1..k-1");
      }
    }
    for (const auto& [l, v] : prescribed) {
      if (v.size() != manifold.dim())
        throw std::invalid_argument("prescribed derivative has wrong dimension");
    }
  } else if (order != 2) {
    throw std::invalid_argument("only k = 2 supports the no-velocity variant");
  }
}

int knot_node_index(double t, int segments) {
  const double idx = t * segments;
  const double rounded = std::round(idx);
  if (std::abs(idx - rounded) > 1e-9)
    throw GridError("knot time does not land on a grid node");
  return static_cast<int>(rounded);
}

std::optional<int> suggest_grid_size(const std::vector<Knot>& knots, int max_segments) {
  for (int m = 2; m <= max_segments; ++m) {
    bool ok = true;
    for (const Knot& k : knots) {
      const double idx = k.t * m;
      if (std::abs(idx - std::round(idx)) > 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok) return m;
  }
  return std::nullopt;
}

}  // namespace rspline
