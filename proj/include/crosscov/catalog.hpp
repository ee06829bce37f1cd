#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "crosscov/cones.hpp"
#include "crosscov/covariogram.hpp"
#include "crosscov/parallel.hpp"
#include "crosscov/synisothesis.hpp"

namespace crosscov {

/// Parameters of the first parallelogram family. Generators are the
/// unnormalized segments I1 = [(−1,0),(1,0)], I2 = [(−1,−1),(1,1)],
/// I3 = [(0,−1),(0,1)], I4 = [(1,−1),(−1,1)].
struct Parall12Params {
  Rational alpha = 1, beta = 1, gamma = 1, delta = 1;
  Point2 y{0, 0};
};

/// Parameters of the second family; I^(m) = [(−m,−1),(m,1)].
struct Parall34Params {
  Rational alpha = 1, beta = 2, gamma = 2, delta = 1, m = 0;
  Point2 y{0, 0};
};

namespace detail {

/// Minkowski sum of centred segments s·[−d, d] and t·[−e, e], translated.
inline ConvexPolygon segment_sum(const Rational& s, const Point2& d, const Rational& t, const Point2& e,
                                 const Point2& shift = Point2(0, 0)) {
  std::vector<Point2> v;
  for (int i : {-1, 1})
    for (int j : {-1, 1}) v.push_back(shift + Rational(i) * s * d + Rational(j) * t * e);
  return ConvexPolygon::hull_of(std::move(v));
}

inline void require_positive(std::initializer_list<const Rational*> xs) {
  for (const Rational* x : xs)
    if (sgn(*x) <= 0) throw Error(ErrorKind::BadParams, "scale parameters must be positive");
}

}  // namespace detail

inline PairOfBodies make_pair(int which, const Parall12Params& p) {
  if (which != 1 && which != 2) throw Error(ErrorKind::BadParams, "first family has members 1 and 2");
  detail::require_positive({&p.alpha, &p.beta, &p.gamma, &p.delta});
  const Point2 i1(1, 0), i2(1, 1), i3(0, 1), i4(-1, 1);
  if (which == 1)
    return {detail::segment_sum(p.alpha, i1, p.beta, i2), detail::segment_sum(p.gamma, i3, p.delta, i4, p.y)};
  return {detail::segment_sum(p.alpha, i1, p.delta, i4), detail::segment_sum(p.beta, i2, p.gamma, i3, p.y)};
}

/// Admissible: either m = 0, α ≠ γ and β ≠ δ, or m ≠ 0 and α ≠ γ.
inline void check_parall34(const Parall34Params& p) {
  detail::require_positive({&p.alpha, &p.beta, &p.gamma, &p.delta});
  if (p.alpha == p.gamma) throw Error(ErrorKind::BadParams, "second family requires alpha != gamma");
  if (sgn(p.m) == 0 && p.beta == p.delta) throw Error(ErrorKind::BadParams, "with m = 0 the second family requires beta != delta");
}

/// Second-family bodies without the admissibility check (positivity is
/// still required); at inadmissible parameters the two pairs are trivial
/// associates.
inline PairOfBodies family34_bodies(int which, const Parall34Params& p) {
  if (which != 3 && which != 4) throw Error(ErrorKind::BadParams, "second family has members 3 and 4");
  detail::require_positive({&p.alpha, &p.beta, &p.gamma, &p.delta});
  const Point2 i1(1, 0), i3(0, 1), im(p.m, Rational(1));
  if (which == 3)
    return {detail::segment_sum(p.alpha, i1, p.beta, i3), detail::segment_sum(p.gamma, i1, p.delta, im, p.y)};
  return {detail::segment_sum(p.gamma, i1, p.beta, i3), detail::segment_sum(p.alpha, i1, p.delta, im, p.y)};
}

inline PairOfBodies make_pair(int which, const Parall34Params& p) {
  if (which != 3 && which != 4) throw Error(ErrorKind::BadParams, "second family has members 3 and 4");
  check_parall34(p);
  return family34_bodies(which, p);
}

/// The two cone pairs with equal covariogram: A1 = ⟨0..3π/4⟩,
/// B1 = −⟨π/4..π/2⟩, A2 = ⟨0..π/4⟩, B2 = −⟨π/2..3π/4⟩.
inline std::pair<ConePair, ConePair> make_cone_counterexample() {
  const Point2 e0(1, 0), e1(1, 1), e2(0, 1), e3(-1, 1);
  return {ConePair(PlanarCone::spanned(e0, e3), -PlanarCone::spanned(e1, e2)),
          ConePair(PlanarCone::spanned(e0, e1), -PlanarCone::spanned(e2, e3))};
}

namespace detail {

/// Points of all segment crossings and endpoints, projected to x.
inline std::vector<Rational> arrangement_events(const std::vector<Segment>& segs) {
  std::vector<Rational> xs;
  for (const auto& s : segs) {
    xs.push_back(s.a.x);
    xs.push_back(s.b.x);
  }
  for (size_t i = 0; i < segs.size(); ++i)
    for (size_t j = i + 1; j < segs.size(); ++j) {
      const Point2 d1 = segs[i].b - segs[i].a, d2 = segs[j].b - segs[j].a;
      const Rational den = cross(d1, d2);
      if (sgn(den) == 0) continue;
      const Rational t = cross(segs[j].a - segs[i].a, d2) / den;
      const Rational u = cross(segs[j].a - segs[i].a, d1) / den;
      if (sgn(t) >= 0 && t <= 1 && sgn(u) >= 0 && u <= 1) xs.push_back(segs[i].a.x + t * d1.x);
    }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// One point in every face of the segment arrangement: the midline of each
/// vertical slab between events, cut at the midpoints between crossings.
inline std::vector<Point2> cell_representatives(const std::vector<Segment>& segs) {
  std::vector<Point2> out;
  const auto xs = arrangement_events(segs);
  for (size_t k = 0; k + 1 < xs.size(); ++k) {
    const Rational mx = (xs[k] + xs[k + 1]) / 2;
    std::vector<Rational> ys;
    for (const auto& s : segs) {
      const Rational lo = std::min(s.a.x, s.b.x), hi = std::max(s.a.x, s.b.x);
      if (lo == hi || mx < lo || mx > hi) continue;
      ys.push_back(s.a.y + (mx - s.a.x) / (s.b.x - s.a.x) * (s.b.y - s.a.y));
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    for (size_t i = 0; i + 1 < ys.size(); ++i) out.emplace_back(mx, (ys[i] + ys[i + 1]) / 2);
    for (const auto& y : ys) out.emplace_back(mx, y);
  }
  return out;
}

/// Uniform rational point of a box with denominator 2^16 on each axis.
inline Point2 random_point_in(const BoundingBox& box, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(0, 1L << 16);
  const Rational sx = make_rational(d(rng), 1L << 16);
  const Rational sy = make_rational(d(rng), 1L << 16);
  return {box.lo.x + sx * (box.hi.x - box.lo.x), box.lo.y + sy * (box.hi.y - box.lo.y)};
}

inline BoundingBox box_union(const BoundingBox& a, const BoundingBox& b) {
  return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)}, {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
}

}  // namespace detail

struct VerifyResult {
  bool equal = true;
  std::optional<Point2> witness;  // first probe where the covariograms differ
  Rational first_value, second_value;
  size_t probes = 0;
};

/// Stratified exact comparison of g_p and g_q: support vertices and edge
/// midpoints, one point per face of the combined singular-set arrangement,
/// then n seeded probes in the bounding box of the union of the supports.
inline VerifyResult verify_equal_covariogram(const PairOfBodies& p, const PairOfBodies& q, size_t n, uint64_t seed) {
  const ConvexPolygon sp = support(p.first, p.second), sq = support(q.first, q.second);
  std::vector<Point2> probes;
  for (const ConvexPolygon* s : {&sp, &sq})
    for (size_t i = 0; i < s->size(); ++i) {
      probes.push_back(s->vertex(i));
      probes.push_back(midpoint(s->vertex(i), s->vertex(i + 1)));
    }
  std::vector<Segment> segs = second_singular_set(p.first, p.second).segments;
  for (const auto& s : second_singular_set(q.first, q.second).segments) segs.push_back(s);
  std::mt19937_64 rng(seed);
  auto cells = detail::cell_representatives(segs);
  constexpr size_t kMaxCells = 20000;
  if (cells.size() > kMaxCells) {
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(kMaxCells);
  }
  probes.insert(probes.end(), cells.begin(), cells.end());
  const BoundingBox box = detail::box_union(bounding_box(sp), bounding_box(sq));
  for (size_t i = 0; i < n; ++i) probes.push_back(detail::random_point_in(box, rng));

  const CrossCovariogram gp(p.first, p.second), gq(q.first, q.second);
  std::vector<char> ok(probes.size(), 1);
  parallel_for(probes.size(), [&](size_t i) { ok[i] = gp(probes[i]) == gq(probes[i]); });
  VerifyResult r;
  r.probes = probes.size();
  for (size_t i = 0; i < probes.size(); ++i)
    if (!ok[i]) {
      r.equal = false;
      r.witness = probes[i];
      r.first_value = gp(probes[i]);
      r.second_value = gq(probes[i]);
      break;
    }
  return r;
}

}  // namespace crosscov
