#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "crosscov/polygon.hpp"

namespace crosscov {

struct PairOfBodies {
  ConvexPolygon first, second;

  friend bool operator==(const PairOfBodies& p, const PairOfBodies& q) {
    return p.first == q.first && p.second == q.second;
  }
};

/// G is a translate of F and cone(P,F) = cone(Q,G).
inline bool isothetic(const ConvexPolygon& p, const Face& f, const ConvexPolygon& q, const Face& g) {
  const PlanarCone cf = support_cone(p, f), cg = support_cone(q, g);
  if (f.kind != g.kind) return false;
  if (f.is_edge() && f.vector() != g.vector()) return false;
  return cf == cg;
}

namespace detail {

/// One direction per ray and per open cell of the common refinement of the
/// normal fans of the given polygons.
inline std::vector<Direction> fan_representatives(std::initializer_list<const ConvexPolygon*> polys) {
  std::vector<Point2> normals;
  for (const ConvexPolygon* p : polys)
    for (size_t i = 0; i < p->size(); ++i) normals.push_back(Direction(outer_normal(p->edge(i))).vec());
  std::sort(normals.begin(), normals.end(), edge_angle_less);
  normals.erase(std::unique(normals.begin(), normals.end()), normals.end());
  std::vector<Direction> out;
  for (size_t i = 0; i < normals.size(); ++i) {
    const Point2& a = normals[i];
    const Point2& b = normals[(i + 1) % normals.size()];
    out.emplace_back(a);
    // Consecutive normals of a union of convex polygons are less than π apart.
    out.emplace_back(a + b);
  }
  return out;
}

template <class T>
bool same_unordered(const T& a, const T& b, const T& c, const T& d) {
  return (a == c && b == d) || (a == d && b == c);
}

}  // namespace detail

/// For every u: {λ₁((P₁)_u), λ₁((P₂)_u)} = {λ₁((Q₁)_u), λ₁((Q₂)_u)} and the
/// support cones at those faces agree as unordered pairs.
inline bool synisothetic(const PairOfBodies& p, const PairOfBodies& q) {
  for (const Direction& u : detail::fan_representatives({&p.first, &p.second, &q.first, &q.second})) {
    const Face f1 = exposed_face(p.first, u), f2 = exposed_face(p.second, u);
    const Face g1 = exposed_face(q.first, u), g2 = exposed_face(q.second, u);
    if (!detail::same_unordered(length_in_units(f1.vector(), u), length_in_units(f2.vector(), u),
                                length_in_units(g1.vector(), u), length_in_units(g2.vector(), u)))
      return false;
    if (!detail::same_unordered(support_cone(p.first, f1), support_cone(p.second, f2), support_cone(q.first, g1),
                                support_cone(q.second, g2)))
      return false;
  }
  return true;
}

struct AssociateWitness {
  enum class Branch { Same, Swapped };
  Point2 x;
  Branch branch;
};

inline const char* branch_name(AssociateWitness::Branch b) {
  return b == AssociateWitness::Branch::Same ? "same" : "swapped";
}

/// x with (K,L) = (K'+x, L'+x), or with (K,L) = (−L'+x, −K'+x).
inline std::optional<AssociateWitness> trivial_associates(const PairOfBodies& p, const PairOfBodies& q) {
  auto translate_of = [](const ConvexPolygon& a, const ConvexPolygon& b) -> std::optional<Point2> {
    if (a.size() != b.size()) return std::nullopt;
    const Point2 x = a.vertex(0) - b.vertex(0);  // canonical forms start at the lex-min vertex
    for (size_t i = 0; i < a.size(); ++i)
      if (a.vertex(i) != b.vertex(i) + x) return std::nullopt;
    return x;
  };
  if (auto x = translate_of(p.first, q.first))
    if (auto y = translate_of(p.second, q.second); y && *x == *y) return AssociateWitness{*x, AssociateWitness::Branch::Same};
  const ConvexPolygon ml = reflect(q.second), mk = reflect(q.first);
  if (auto x = translate_of(p.first, ml))
    if (auto y = translate_of(p.second, mk); y && *x == *y) return AssociateWitness{*x, AssociateWitness::Branch::Swapped};
  return std::nullopt;
}

/// c with P = −P + 2c.
inline std::optional<Point2> central_symmetry_center(const ConvexPolygon& p) {
  const size_t n = p.size();
  if (n % 2 != 0) return std::nullopt;
  const Point2 s = p.vertex(0) + p.vertex(n / 2);
  for (size_t i = 1; i < n / 2; ++i)
    if (p.vertex(i) + p.vertex(i + n / 2) != s) return std::nullopt;
  return s / Rational(2);
}

struct SymmetryPoint {
  enum class Branch { Equal, Central };
  Point2 z;
  Branch branch;
};

inline const char* branch_name(SymmetryPoint::Branch b) { return b == SymmetryPoint::Branch::Equal ? "equal" : "central"; }

/// z with g_{K,L}(z + x) = g_{K,L}(z − x) for all x: either K = L + z, or K
/// and L + z are centrally symmetric about the same point.
inline std::optional<SymmetryPoint> symmetry_point(const ConvexPolygon& k, const ConvexPolygon& l) {
  if (k.size() == l.size()) {
    const Point2 z = k.vertex(0) - l.vertex(0);
    bool equal = true;
    for (size_t i = 0; i < k.size() && equal; ++i) equal = k.vertex(i) == l.vertex(i) + z;
    if (equal) return SymmetryPoint{z, SymmetryPoint::Branch::Equal};
  }
  auto ck = central_symmetry_center(k);
  auto cl = central_symmetry_center(l);
  if (ck && cl) return SymmetryPoint{*ck - *cl, SymmetryPoint::Branch::Central};
  return std::nullopt;
}

}  // namespace crosscov
