#pragma once

#include <optional>
#include <ostream>

#include "crosscov/geometry.hpp"

namespace crosscov {

/// Closed convex cone with apex at the origin.
///
/// A pointed cone with interior is the set swept counterclockwise from
/// `lower()` to `upper()` (opening strictly less than π). The degenerate
/// forms are the apex alone, a single ray (lower == upper) and a closed
/// halfplane (upper == -lower, swept counterclockwise from lower).
class PlanarCone {
 public:
  enum class Kind { Origin, Ray, Pointed, Halfplane };

  static PlanarCone origin() { return PlanarCone(Kind::Origin, Direction(), Direction()); }
  static PlanarCone ray(const Direction& d) { return PlanarCone(Kind::Ray, d, d); }
  static PlanarCone halfplane(const Direction& lower) { return PlanarCone(Kind::Halfplane, lower, -lower); }
  static PlanarCone pointed(const Direction& lower, const Direction& upper) {
    if (sgn(cross(lower.vec(), upper.vec())) <= 0)
      throw Error(ErrorKind::InvalidCone, "upper ray must follow lower ray counterclockwise by less than pi");
    return PlanarCone(Kind::Pointed, lower, upper);
  }
  /// Cone spanned by two vectors listed in counterclockwise order.
  static PlanarCone spanned(const Point2& lower, const Point2& upper) {
    return pointed(Direction(lower), Direction(upper));
  }

  Kind kind() const { return kind_; }
  const Direction& lower() const { return lower_; }
  const Direction& upper() const { return upper_; }

  /// Contains no line.
  bool is_pointed() const { return kind_ != Kind::Halfplane; }
  bool has_interior() const { return kind_ == Kind::Pointed || kind_ == Kind::Halfplane; }

  bool contains(const Point2& p) const {
    if (p.is_zero()) return true;
    switch (kind_) {
      case Kind::Origin: return false;
      case Kind::Ray: return sgn(cross(lower_.vec(), p)) == 0 && sgn(dot(lower_.vec(), p)) > 0;
      case Kind::Halfplane: return sgn(cross(lower_.vec(), p)) >= 0;
      case Kind::Pointed: return sgn(cross(lower_.vec(), p)) >= 0 && sgn(cross(p, upper_.vec())) >= 0;
    }
    return false;
  }

  bool contains_in_interior(const Point2& p) const {
    switch (kind_) {
      case Kind::Origin:
      case Kind::Ray: return false;
      case Kind::Halfplane: return sgn(cross(lower_.vec(), p)) > 0;
      case Kind::Pointed: return sgn(cross(lower_.vec(), p)) > 0 && sgn(cross(p, upper_.vec())) > 0;
    }
    return false;
  }

  /// Reflection in the origin.
  PlanarCone operator-() const {
    if (kind_ == Kind::Origin) return *this;
    return PlanarCone(kind_, -lower_, -upper_);
  }

  PlanarCone transformed(const Matrix2& t) const {
    if (kind_ == Kind::Origin) return *this;
    Point2 lo = t(lower_.vec()), hi = t(upper_.vec());
    if (kind_ == Kind::Ray) return ray(Direction(lo));
    if (t.det() < 0) std::swap(lo, hi);
    if (kind_ == Kind::Halfplane) return halfplane(Direction(lo));
    return pointed(Direction(lo), Direction(hi));
  }

  friend bool operator==(const PlanarCone& a, const PlanarCone& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ == Kind::Origin) return true;
    return a.lower_ == b.lower_ && a.upper_ == b.upper_;
  }
  friend bool operator!=(const PlanarCone& a, const PlanarCone& b) { return !(a == b); }

 private:
  PlanarCone(Kind k, Direction lo, Direction hi) : kind_(k), lower_(std::move(lo)), upper_(std::move(hi)) {}

  Kind kind_;
  Direction lower_;
  Direction upper_;
};

/// Strict total order used to canonicalize unordered pairs of cones.
inline bool cone_less(const PlanarCone& a, const PlanarCone& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.kind() == PlanarCone::Kind::Origin) return false;
  auto key = [](const Direction& d) { return std::make_pair(d.dx(), d.dy()); };
  if (a.lower() != b.lower()) return key(a.lower()) < key(b.lower());
  return key(a.upper()) < key(b.upper());
}

/// True when the two pointed cones meet only at the apex.
inline bool meet_only_at_apex(const PlanarCone& a, const PlanarCone& b) {
  if (a.kind() == PlanarCone::Kind::Origin || b.kind() == PlanarCone::Kind::Origin) return true;
  return !a.contains(b.lower().vec()) && !a.contains(b.upper().vec()) && !b.contains(a.lower().vec()) &&
         !b.contains(a.upper().vec());
}

/// True when the interiors of two cones intersect.
inline bool interiors_intersect(const PlanarCone& a, const PlanarCone& b) {
  using Kind = PlanarCone::Kind;
  if (!a.has_interior() || !b.has_interior()) return false;
  if (a.kind() == Kind::Halfplane && b.kind() == Kind::Halfplane) return b.lower() != -a.lower();
  if (a.kind() == Kind::Halfplane || b.kind() == Kind::Halfplane) {
    const PlanarCone& h = a.kind() == Kind::Halfplane ? a : b;
    const PlanarCone& s = a.kind() == Kind::Halfplane ? b : a;
    // A sector misses the open halfplane iff both its rays lie in the closed complement.
    return sgn(cross(h.lower().vec(), s.lower().vec())) > 0 || sgn(cross(h.lower().vec(), s.upper().vec())) > 0;
  }
  // Two open sectors overlap iff the overlap arc, bounded by one lower and one
  // upper ray, has its mediant direction inside both.
  for (const Direction& p : {a.lower(), b.lower()})
    for (const Direction& q : {a.upper(), b.upper()}) {
      Point2 mid = p.vec() + q.vec();
      if (!mid.is_zero() && a.contains_in_interior(mid) && b.contains_in_interior(mid)) return true;
    }
  return false;
}

inline std::ostream& operator<<(std::ostream& os, const PlanarCone& c) {
  switch (c.kind()) {
    case PlanarCone::Kind::Origin: return os << "{O}";
    case PlanarCone::Kind::Ray: return os << "ray" << c.lower();
    case PlanarCone::Kind::Halfplane: return os << "half<" << c.lower() << ".." << c.upper() << '>';
    case PlanarCone::Kind::Pointed: return os << '<' << c.lower() << ".." << c.upper() << '>';
  }
  return os;
}

}  // namespace crosscov
