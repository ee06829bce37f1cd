#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "crosscov/geometry.hpp"
#include "crosscov/planar_cone.hpp"

namespace crosscov {

class ConvexPolygon;
ConvexPolygon validate_polygon(std::span<const Point2> raw_vertices);

/// Strictly convex polygon with nonempty interior, stored canonically:
/// counterclockwise, lexicographically smallest vertex first, no collinear
/// triples. Immutable once built.
class ConvexPolygon {
 public:
  /// Convex hull of a point set; collinear points are fused. Throws ZeroArea
  /// when the hull is lower dimensional.
  static ConvexPolygon hull_of(std::vector<Point2> points);

  const std::vector<Point2>& vertices() const { return vertices_; }
  size_t size() const { return vertices_.size(); }
  const Point2& vertex(size_t i) const { return vertices_[i % vertices_.size()]; }
  /// Edge vector from vertex i to vertex i+1.
  Point2 edge(size_t i) const { return vertex(i + 1) - vertex(i); }

  friend bool operator==(const ConvexPolygon& a, const ConvexPolygon& b) { return a.vertices_ == b.vertices_; }
  friend bool operator!=(const ConvexPolygon& a, const ConvexPolygon& b) { return !(a == b); }

 private:
  friend ConvexPolygon validate_polygon(std::span<const Point2> raw_vertices);
  explicit ConvexPolygon(std::vector<Point2> canonical) : vertices_(std::move(canonical)) {}

  std::vector<Point2> vertices_;
};

namespace detail {

inline void rotate_to_lex_min(std::vector<Point2>& v) {
  auto it = std::min_element(v.begin(), v.end(), lex_less);
  std::rotate(v.begin(), it, v.end());
}

inline Rational twice_signed_area(std::span<const Point2> v) {
  Rational s = 0;
  for (size_t i = 0, n = v.size(); i < n; ++i) s += cross(v[i], v[(i + 1) % n]);
  return s;
}

/// Andrew's monotone chain; strict turns only, result counterclockwise.
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> h(2 * pts.size());
  size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orientation(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace detail

inline ConvexPolygon ConvexPolygon::hull_of(std::vector<Point2> points) {
  auto h = detail::convex_hull(std::move(points));
  if (h.size() < 3) throw Error(ErrorKind::ZeroArea, "hull is lower dimensional");
  detail::rotate_to_lex_min(h);
  return ConvexPolygon(std::move(h));
}

/// Accepts a vertex cycle in either orientation and returns the canonical form.
inline ConvexPolygon validate_polygon(std::span<const Point2> raw_vertices) {
  const size_t n = raw_vertices.size();
  if (n < 3) throw Error(ErrorKind::TooFewVertices, "a polygon needs at least 3 vertices");
  std::vector<Point2> v(raw_vertices.begin(), raw_vertices.end());
  Rational area2 = detail::twice_signed_area(v);
  if (area2 == 0) {
    // Zero signed area with non-collinear points means the cycle crosses itself.
    size_t b = 1;
    while (b < n && v[b] == v[0]) ++b;
    for (size_t i = 0; b < n && i < n; ++i)
      if (orientation(v[0], v[b], v[i]) != 0) throw Error(ErrorKind::NotConvex, "vertex order is not strictly convex");
    throw Error(ErrorKind::ZeroArea, "vertex cycle encloses zero area");
  }
  if (area2 < 0) std::reverse(v.begin(), v.end());
  for (size_t i = 0; i < n; ++i) {
    int o = orientation(v[i], v[(i + 1) % n], v[(i + 2) % n]);
    if (o == 0) throw Error(ErrorKind::CollinearTriple, "consecutive vertices are collinear or repeated");
  }
  // Strict convexity and simplicity: every vertex lies strictly left of every
  // edge it does not bound.
  for (size_t i = 0; i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    for (size_t j = 0; j < n; ++j) {
      if (j == i || j == (i + 1) % n) continue;
      if (orientation(a, b, v[j]) <= 0) throw Error(ErrorKind::NotConvex, "vertex order is not strictly convex");
    }
  }
  detail::rotate_to_lex_min(v);
  return ConvexPolygon(std::move(v));
}

inline ConvexPolygon validate_polygon(std::initializer_list<Point2> raw) {
  return validate_polygon(std::span<const Point2>(raw.begin(), raw.size()));
}

inline std::ostream& operator<<(std::ostream& os, const ConvexPolygon& p) {
  os << '[';
  for (size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p.vertex(i);
  return os << ']';
}

inline Rational area(const ConvexPolygon& p) { return detail::twice_signed_area(p.vertices()) / 2; }

inline ConvexPolygon translate(const ConvexPolygon& p, const Point2& v) {
  std::vector<Point2> out;
  out.reserve(p.size());
  for (const auto& q : p.vertices()) out.push_back(q + v);
  return validate_polygon(out);
}

inline ConvexPolygon reflect(const ConvexPolygon& p) {
  std::vector<Point2> out;
  out.reserve(p.size());
  for (const auto& q : p.vertices()) out.push_back(-q);
  return validate_polygon(out);
}

inline ConvexPolygon transform(const ConvexPolygon& p, const Matrix2& t) {
  if (t.det() == 0) throw Error(ErrorKind::BadParams, "singular linear map");
  std::vector<Point2> out;
  out.reserve(p.size());
  for (const auto& q : p.vertices()) out.push_back(t(q));
  return validate_polygon(out);
}

inline Point2 centroid_of_vertices(const ConvexPolygon& p) {
  Point2 s(0, 0);
  for (const auto& q : p.vertices()) s = s + q;
  return s / Rational(static_cast<long>(p.size()));
}

namespace detail {

/// Angle key for edge directions measured counterclockwise from (0,-1),
/// with (0,-1) itself last; this is the order of edges leaving the
/// lexicographically smallest vertex.
inline bool edge_angle_less(const Point2& a, const Point2& b) {
  static const Point2 ref(0, -1);
  auto cls = [](const Point2& d) {
    int c = angle_class(ref, d);
    return c == 0 ? 4 : c;
  };
  int ca = cls(a), cb = cls(b);
  if (ca != cb) return ca < cb;
  if (ca == 2 || ca == 4) return false;
  return sgn(cross(a, b)) > 0;
}

}  // namespace detail

/// Minkowski sum by merging edge sequences in outer-normal order; parallel
/// edges fuse into one edge whose length is the sum.
inline ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
  const size_t n = p.size(), m = q.size();
  std::vector<Point2> out;
  out.reserve(n + m);
  Point2 cur = p.vertex(0) + q.vertex(0);
  size_t i = 0, j = 0;
  while (i < n || j < m) {
    out.push_back(cur);
    if (j == m || (i < n && detail::edge_angle_less(p.edge(i), q.edge(j)))) {
      cur = cur + p.edge(i++);
    } else if (i == n || detail::edge_angle_less(q.edge(j), p.edge(i))) {
      cur = cur + q.edge(j++);
    } else {
      cur = cur + p.edge(i++) + q.edge(j++);
    }
  }
  return validate_polygon(out);
}

/// Vertex or edge of a polygon maximizing u·x.
struct Face {
  enum class Kind { Vertex, Edge };
  Kind kind = Kind::Vertex;
  Point2 a;  // the vertex, or the first endpoint in counterclockwise order
  Point2 b;  // equals a for a vertex face
  Direction owner_direction;

  bool is_vertex() const { return kind == Kind::Vertex; }
  bool is_edge() const { return kind == Kind::Edge; }
  /// Edge vector b - a (zero for a vertex).
  Point2 vector() const { return b - a; }

  friend bool operator==(const Face& f, const Face& g) { return f.kind == g.kind && f.a == g.a && f.b == g.b; }
};

inline Face exposed_face(const ConvexPolygon& p, const Direction& u) {
  const auto& v = p.vertices();
  const size_t n = v.size();
  size_t best = 0;
  Rational best_val = dot(u.vec(), v[0]);
  for (size_t i = 1; i < n; ++i) {
    Rational d = dot(u.vec(), v[i]);
    if (d > best_val) {
      best_val = d;
      best = i;
    }
  }
  size_t next = (best + 1) % n, prev = (best + n - 1) % n;
  if (dot(u.vec(), v[next]) == best_val) return {Face::Kind::Edge, v[best], v[next], u};
  if (dot(u.vec(), v[prev]) == best_val) return {Face::Kind::Edge, v[prev], v[best], u};
  return {Face::Kind::Vertex, v[best], v[best], u};
}

/// Euclidean length of a segment parallel to u^⊥, in units of the primitive
/// vector u^⊥ (the exact rational multiplier).
inline Rational length_in_units(const Point2& segment, const Direction& u) {
  const Point2 e = u.perp().vec();
  return sgn(e.x) != 0 ? abs(segment.x / e.x) : abs(segment.y / e.y);
}

namespace detail {

/// Index of vertex a (and for edges, check that b follows a); throws otherwise.
inline size_t locate_face(const ConvexPolygon& p, const Face& f) {
  for (size_t i = 0; i < p.size(); ++i) {
    if (p.vertex(i) != f.a) continue;
    if (f.is_vertex() || p.vertex(i + 1) == f.b) return i;
  }
  throw Error(ErrorKind::FaceNotOnPolygon, "face is not a vertex or edge of the polygon");
}

inline Point2 outer_normal(const Point2& edge) { return {edge.y, -edge.x}; }

}  // namespace detail

/// Normal cone at a face: spanned by incident edge normals for a vertex, a
/// single ray for an edge.
inline PlanarCone normal_cone(const ConvexPolygon& p, const Face& f) {
  size_t i = detail::locate_face(p, f);
  const size_t n = p.size();
  if (f.is_edge()) return PlanarCone::ray(Direction(detail::outer_normal(p.edge(i))));
  return PlanarCone::spanned(detail::outer_normal(p.edge(i + n - 1)), detail::outer_normal(p.edge(i)));
}

/// Support cone at a face: a pointed cone for a vertex, the inner halfplane
/// for an edge.
inline PlanarCone support_cone(const ConvexPolygon& p, const Face& f) {
  size_t i = detail::locate_face(p, f);
  const size_t n = p.size();
  if (f.is_edge()) return PlanarCone::halfplane(Direction(p.edge(i)));
  return PlanarCone::spanned(p.edge(i), -p.edge(i + n - 1));
}

inline PlanarCone vertex_support_cone(const ConvexPolygon& p, size_t i) {
  const size_t n = p.size();
  return PlanarCone::spanned(p.edge(i), -p.edge(i + n - 1));
}

inline Face vertex_face(const ConvexPolygon& p, size_t i) {
  const size_t n = p.size();
  Point2 u = detail::outer_normal(p.edge(i + n - 1)) + detail::outer_normal(p.edge(i));
  return {Face::Kind::Vertex, p.vertex(i), p.vertex(i), Direction(u)};
}

inline Face edge_face(const ConvexPolygon& p, size_t i) {
  return {Face::Kind::Edge, p.vertex(i), p.vertex(i + 1), Direction(detail::outer_normal(p.edge(i)))};
}

/// Point-in-polygon with closed boundary; returns +1 interior, 0 boundary, -1 outside.
inline int locate_point(const ConvexPolygon& p, const Point2& x) {
  int result = 1;
  for (size_t i = 0; i < p.size(); ++i) {
    int o = orientation(p.vertex(i), p.vertex(i + 1), x);
    if (o < 0) return -1;
    if (o == 0) result = 0;
  }
  return result;
}

struct BoundingBox {
  Point2 lo;
  Point2 hi;
};

inline BoundingBox bounding_box(const ConvexPolygon& p) {
  BoundingBox b{p.vertex(0), p.vertex(0)};
  for (const auto& v : p.vertices()) {
    if (v.x < b.lo.x) b.lo.x = v.x;
    if (v.y < b.lo.y) b.lo.y = v.y;
    if (v.x > b.hi.x) b.hi.x = v.x;
    if (v.y > b.hi.y) b.hi.y = v.y;
  }
  return b;
}

}  // namespace crosscov
