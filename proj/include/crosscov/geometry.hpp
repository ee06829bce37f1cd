#pragma once

#include <compare>
#include <ostream>
#include <utility>

#include "crosscov/rational.hpp"

namespace crosscov {

struct Point2 {
  Rational x;
  Rational y;

  Point2() = default;
  Point2(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {}
  Point2(long x_, long y_) : x(x_), y(y_) {}

  friend bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point2& a, const Point2& b) { return !(a == b); }
  friend Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator-(const Point2& a) { return {-a.x, -a.y}; }
  friend Point2 operator*(const Rational& s, const Point2& a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(const Point2& a, const Rational& s) { return {s * a.x, s * a.y}; }
  friend Point2 operator/(const Point2& a, const Rational& s) { return {a.x / s, a.y / s}; }

  bool is_zero() const { return sgn(x) == 0 && sgn(y) == 0; }
};

/// Lexicographic (x, then y).
inline bool lex_less(const Point2& a, const Point2& b) {
  int c = cmp(a.x, b.x);
  return c < 0 || (c == 0 && a.y < b.y);
}

inline Rational cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline Rational dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline Rational norm_sq(const Point2& a) { return a.x * a.x + a.y * a.y; }

/// Sign of cross(b - a, c - a): +1 left turn, -1 right turn, 0 collinear.
inline int orientation(const Point2& a, const Point2& b, const Point2& c) {
  return sgn((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

inline Point2 midpoint(const Point2& a, const Point2& b) {
  return {(a.x + b.x) / 2, (a.y + b.y) / 2};
}

inline std::ostream& operator<<(std::ostream& os, const Point2& p) {
  return os << '(' << p.x.get_str() << ',' << p.y.get_str() << ')';
}

/// Nonzero direction stored as the primitive integer vector on its ray, so
/// two directions are equal exactly when they point the same way.
class Direction {
 public:
  Direction() : v_(1, 0) {}
  Direction(long dx, long dy) : Direction(Point2(dx, dy)) {}
  explicit Direction(const Point2& v) {
    if (v.is_zero()) throw Error(ErrorKind::BadParams, "zero direction vector");
    Integer l;
    mpz_lcm(l.get_mpz_t(), v.x.get_den_mpz_t(), v.y.get_den_mpz_t());
    Integer a = v.x.get_num() * (l / v.x.get_den());
    Integer b = v.y.get_num() * (l / v.y.get_den());
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    v_ = Point2(Rational(a / g), Rational(b / g));
  }

  const Point2& vec() const { return v_; }
  const Rational& dx() const { return v_.x; }
  const Rational& dy() const { return v_.y; }

  Direction operator-() const { return Direction(-v_); }
  /// Counterclockwise rotation by a right angle.
  Direction perp() const { return Direction(Point2(-v_.y, v_.x)); }

  friend bool operator==(const Direction& a, const Direction& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Direction& a, const Direction& b) { return !(a == b); }

 private:
  Point2 v_;
};

inline std::ostream& operator<<(std::ostream& os, const Direction& d) { return os << d.vec(); }

/// CCW angle class of d measured from ref, with angles in [0, 2π):
/// 0 means d == ref, 1 in (0, π), 2 exactly π, 3 in (π, 2π).
inline int angle_class(const Point2& ref, const Point2& d) {
  int c = sgn(cross(ref, d));
  if (c == 0) return sgn(dot(ref, d)) > 0 ? 0 : 2;
  return c > 0 ? 1 : 3;
}

/// True when the CCW angle from ref to a is smaller than from ref to b.
inline bool ccw_less(const Point2& ref, const Point2& a, const Point2& b) {
  int ca = angle_class(ref, a), cb = angle_class(ref, b);
  if (ca != cb) return ca < cb;
  if (ca == 0 || ca == 2) return false;
  return sgn(cross(a, b)) > 0;
}

/// Rational 2x2 matrix acting on column vectors.
struct Matrix2 {
  Rational a, b, c, d;  // [[a, b], [c, d]]

  Point2 operator()(const Point2& p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
  Rational det() const { return a * d - b * c; }
  Matrix2 inverse() const {
    Rational k = det();
    if (k == 0) throw Error(ErrorKind::BadParams, "singular linear map");
    return {d / k, -b / k, -c / k, a / k};
  }
  friend Matrix2 operator*(const Matrix2& m, const Matrix2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  static Matrix2 identity() { return {1, 0, 0, 1}; }
  /// Linear map sending e1 -> u and e2 -> v.
  static Matrix2 from_columns(const Point2& u, const Point2& v) { return {u.x, v.x, u.y, v.y}; }
};

}  // namespace crosscov
