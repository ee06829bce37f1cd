#pragma once

#include <optional>
#include <vector>

#include "crosscov/polygon.hpp"

namespace crosscov {

/// Closed halfplane {p : a*p.x + b*p.y >= c}.
struct Halfplane {
  Rational a, b, c;

  Rational side(const Point2& p) const { return a * p.x + b * p.y - c; }
};

/// Halfplane to the left of the directed line through `from` along `dir`.
inline Halfplane left_of(const Point2& from, const Point2& dir) {
  Halfplane h{-dir.y, dir.x, 0};
  h.c = h.a * from.x + h.b * from.y;
  return h;
}

namespace detail {

/// One Sutherland-Hodgman step against a closed halfplane. `out` is
/// overwritten; degenerate (repeated/collinear) vertices may remain.
inline void clip_against(const std::vector<Point2>& in, const Halfplane& h, std::vector<Point2>& out,
                         std::vector<Rational>& sides) {
  out.clear();
  const size_t n = in.size();
  if (n == 0) return;
  sides.resize(n);
  bool all_inside = true;
  for (size_t i = 0; i < n; ++i) {
    sides[i] = h.side(in[i]);
    if (sgn(sides[i]) < 0) all_inside = false;
  }
  if (all_inside) {
    out = in;
    return;
  }
  for (size_t i = 0; i < n; ++i) {
    const size_t j = (i + 1) % n;
    const int si = sgn(sides[i]), sj = sgn(sides[j]);
    if (si >= 0) out.push_back(in[i]);
    if ((si > 0 && sj < 0) || (si < 0 && sj > 0)) {
      Rational t = sides[i] / (sides[i] - sides[j]);
      out.emplace_back(in[i].x + t * (in[j].x - in[i].x), in[i].y + t * (in[j].y - in[i].y));
    }
  }
}

}  // namespace detail

/// Result of intersecting two closed convex polygons.
struct Intersection {
  enum class Kind { Empty, LowerDimensional, Polygon };
  Kind kind = Kind::Empty;
  std::optional<ConvexPolygon> polygon;  // set for Kind::Polygon
  std::vector<Point2> points;            // the point or segment endpoints for LowerDimensional

  Rational area() const { return polygon ? crosscov::area(*polygon) : Rational(0); }
};

/// Exact P ∩ Q by clipping P against every edge halfplane of Q.
inline Intersection intersect_convex(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<Point2> cur = p.vertices(), next;
  std::vector<Rational> sides;
  for (size_t i = 0; i < q.size() && !cur.empty(); ++i) {
    detail::clip_against(cur, left_of(q.vertex(i), q.edge(i)), next, sides);
    cur.swap(next);
  }
  Intersection r;
  if (cur.empty()) return r;
  auto hull = detail::convex_hull(cur);
  if (hull.size() >= 3) {
    r.kind = Intersection::Kind::Polygon;
    r.polygon = ConvexPolygon::hull_of(std::move(hull));
  } else {
    r.kind = Intersection::Kind::LowerDimensional;
    r.points = std::move(hull);
  }
  return r;
}

}  // namespace crosscov
