#pragma once

// Independent reference implementations and random generators shared by the
// unit and acceptance tests. Nothing here calls the clipping kernel.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "crosscov.hpp"

namespace oracle {

using crosscov::ConvexPolygon;
using crosscov::PlanarCone;
using crosscov::Point2;
using crosscov::Rational;

inline Rational cross3(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Closed point-in-convex test by sign of every edge cross product.
inline bool inside(const std::vector<Point2>& ccw, const Point2& p) {
  for (size_t i = 0; i < ccw.size(); ++i)
    if (sgn(cross3(ccw[i], ccw[(i + 1) % ccw.size()], p)) < 0) return false;
  return true;
}

/// Jarvis march, dropping collinear points; returns CCW order.
inline std::vector<Point2> gift_wrap(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull;
  size_t cur = 0;
  do {
    hull.push_back(pts[cur]);
    size_t nxt = (cur + 1) % pts.size();
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i == cur) continue;
      const int o = sgn(cross3(pts[cur], pts[nxt], pts[i]));
      // Prefer the most clockwise candidate; on ties keep the farthest.
      if (o < 0) nxt = i;
      else if (o == 0) {
        const Point2 d1 = pts[nxt] - pts[cur], d2 = pts[i] - pts[cur];
        if (crosscov::norm_sq(d2) > crosscov::norm_sq(d1)) nxt = i;
      }
    }
    cur = nxt;
  } while (cur != 0 && hull.size() <= pts.size());
  return hull;
}

inline Rational shoelace(const std::vector<Point2>& v) {
  Rational s = 0;
  for (size_t i = 0; i < v.size(); ++i) s += crosscov::cross(v[i], v[(i + 1) % v.size()]);
  return abs(s) / 2;
}

/// All edge-edge crossings plus the vertices of each polygon inside the
/// other, then a hull.
inline std::vector<Point2> brute_intersection(const std::vector<Point2>& p, const std::vector<Point2>& q) {
  std::vector<Point2> pts;
  for (const auto& v : p)
    if (inside(q, v)) pts.push_back(v);
  for (const auto& v : q)
    if (inside(p, v)) pts.push_back(v);
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) {
      const Point2 a = p[i], b = p[(i + 1) % p.size()], c = q[j], d = q[(j + 1) % q.size()];
      const Point2 r = b - a, s = d - c;
      const Rational den = crosscov::cross(r, s);
      if (sgn(den) == 0) continue;  // parallel overlaps are covered by the vertex tests
      const Rational t = crosscov::cross(c - a, s) / den, u = crosscov::cross(c - a, r) / den;
      if (sgn(t) >= 0 && t <= 1 && sgn(u) >= 0 && u <= 1) pts.push_back(a + t * r);
    }
  return gift_wrap(pts);
}

inline std::vector<Point2> shifted(const ConvexPolygon& p, const Point2& x) {
  std::vector<Point2> v;
  for (const auto& q : p.vertices()) v.push_back(q + x);
  return v;
}

/// λ₂(K ∩ (L + x)) by the brute-force route.
inline Rational brute_cov(const ConvexPolygon& k, const ConvexPolygon& l, const Point2& x) {
  const auto h = brute_intersection(k.vertices(), shifted(l, x));
  return h.size() < 3 ? Rational(0) : shoelace(h);
}

/// Support K + (−L) as the hull of all pairwise vertex differences.
inline std::vector<Point2> brute_support(const ConvexPolygon& k, const ConvexPolygon& l) {
  std::vector<Point2> pts;
  for (const auto& a : k.vertices())
    for (const auto& b : l.vertices()) pts.push_back(a - b);
  return gift_wrap(pts);
}

/// Cone covariogram by truncating both cones to large triangles; exact as
/// long as the bounded intersection lies inside the truncation.
inline Rational brute_cone_cov(const PlanarCone& a, const PlanarCone& b, const Point2& x, const Rational& reach = 1000000) {
  auto tri = [&](const PlanarCone& c, const Point2& apex) {
    return std::vector<Point2>{apex, apex + reach * c.lower().vec(), apex + reach * c.upper().vec()};
  };
  const auto h = brute_intersection(tri(a, Point2(0, 0)), tri(b, x));
  return h.size() < 3 ? Rational(0) : shoelace(h);
}

// ---------------------------------------------------------------------------
// Random inputs

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline Rational random_rational(Rng& rng, long lo, long hi, long den) {
  return crosscov::make_rational(uniform(rng, lo * den, hi * den), den);
}

inline Point2 random_point(Rng& rng, long radius, long den = 1) {
  return {random_rational(rng, -radius, radius, den), random_rational(rng, -radius, radius, den)};
}

/// Convex polygon with exactly n vertices: hull of lattice points near a
/// circle, rescaled by 1/den and shifted by a random offset.
inline ConvexPolygon random_polygon(Rng& rng, size_t n, long radius = 12, long den = 1) {
  const double r = static_cast<double>(radius);
  for (int attempt = 0;; ++attempt) {
    // After a few misses, oversample and keep an ordered subset of the
    // hull: any subset of points in strictly convex position stays so.
    const bool over = attempt >= 50 || n >= 10;
    const size_t m = over ? 4 * n : n;
    std::vector<Point2> pts;
    std::uniform_real_distribution<double> ang(0, 2 * M_PI), rad(over ? 0.9 * r : 0.6 * r, r);
    for (size_t i = 0; i < m; ++i) {
      const double t = ang(rng), s = rad(rng);
      pts.emplace_back(std::lround(s * std::cos(t)), std::lround(s * std::sin(t)));
    }
    auto h = gift_wrap(pts);
    if (h.size() < n) continue;
    while (h.size() > n) h.erase(h.begin() + uniform(rng, 0, static_cast<long>(h.size()) - 1));
    const Point2 offset = random_point(rng, radius, 2 * den);
    for (auto& p : h) p = p / Rational(den) + offset;
    return crosscov::validate_polygon(h);
  }
}

inline ConvexPolygon random_polygon_in(Rng& rng, size_t lo, size_t hi, long radius, long den = 1) {
  return random_polygon(rng, static_cast<size_t>(uniform(rng, static_cast<long>(lo), static_cast<long>(hi))), radius, den);
}

/// Primitive-ish nonzero integer vector with entries in [−r, r].
inline Point2 random_vector(Rng& rng, long r) {
  for (;;) {
    Point2 v(uniform(rng, -r, r), uniform(rng, -r, r));
    if (!v.is_zero()) return v;
  }
}

/// Pointed cone with nonempty interior.
inline PlanarCone random_cone(Rng& rng, long r = 9) {
  for (;;) {
    const Point2 a = random_vector(rng, r), b = random_vector(rng, r);
    if (sgn(crosscov::cross(a, b)) > 0) return PlanarCone::spanned(a, b);
  }
}

/// Admissible cone pair: A and B pointed and meeting only at the apex.
inline crosscov::ConePair random_cone_pair(Rng& rng, long r = 9) {
  for (;;) {
    const PlanarCone a = random_cone(rng, r), b = random_cone(rng, r);
    if (crosscov::meet_only_at_apex(a, b)) return crosscov::ConePair(a, b);
  }
}

/// Invertible rational linear map with small entries.
inline crosscov::Matrix2 random_linear_map(Rng& rng) {
  for (;;) {
    crosscov::Matrix2 t{random_rational(rng, -3, 3, 2), random_rational(rng, -3, 3, 2), random_rational(rng, -3, 3, 2),
                        random_rational(rng, -3, 3, 2)};
    if (sgn(t.det()) != 0) return t;
  }
}

inline Rational positive_rational(Rng& rng, long hi = 4, long den = 4) { return crosscov::make_rational(uniform(rng, 1, hi * den), den); }

}  // namespace oracle
