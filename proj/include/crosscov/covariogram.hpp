#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "crosscov/intersect.hpp"
#include "crosscov/parallel.hpp"
#include "crosscov/polygon.hpp"

namespace crosscov {

namespace detail {

using i128 = __int128;

inline Integer to_integer(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~0ULL));
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

/// Integer vertex with coordinates bounded by kCoordLimit in magnitude.
struct IPoint {
  int64_t x, y;
};

inline constexpr int64_t kCoordLimit = int64_t(1) << 29;

inline i128 icross(int64_t ax, int64_t ay, int64_t bx, int64_t by) { return i128(ax) * by - i128(ay) * bx; }

/// Twice the area of P ∩ Q for integer convex CCW polygons, from the
/// boundary of the intersection: each edge of P contributes the part inside
/// Q and vice versa, via ∫ cross(y, dy) = (t₁ − t₀)·cross(start, edge).
/// Collinear same-direction edges are counted once (on the P side).
inline Rational twice_area_integer(const std::vector<IPoint>& p, const std::vector<IPoint>& q) {
  i128 whole = 0;
  Rational partial = 0;
  auto pass = [&](const std::vector<IPoint>& a, const std::vector<IPoint>& b, bool strict_same) {
    const size_t n = a.size(), m = b.size();
    for (size_t i = 0; i < n; ++i) {
      const IPoint& s = a[i];
      const IPoint& t = a[(i + 1) % n];
      const int64_t ex = t.x - s.x, ey = t.y - s.y;
      // Bounds lo = ln/ld, hi = hn/hd with positive denominators.
      i128 ln = 0, ld = 1, hn = 1, hd = 1;
      bool empty = false;
      for (size_t j = 0; j < m && !empty; ++j) {
        const IPoint& u = b[j];
        const IPoint& v = b[(j + 1) % m];
        const int64_t fx = v.x - u.x, fy = v.y - u.y;
        const i128 s0 = icross(fx, fy, s.x - u.x, s.y - u.y);
        const i128 sd = icross(fx, fy, ex, ey);
        if (sd == 0) {
          if (s0 < 0) empty = true;
          else if (s0 == 0 && strict_same && i128(fx) * ex + i128(fy) * ey > 0) empty = true;
        } else if (sd > 0) {
          // t >= -s0/sd
          if (-s0 * ld > ln * sd) ln = -s0, ld = sd;
        } else {
          // t <= s0/(-sd)
          if (s0 * hd < hn * -sd) hn = s0, hd = -sd;
        }
        if (ln * hd >= hn * ld) empty = true;
      }
      if (empty) continue;
      const i128 c = icross(s.x, s.y, ex, ey);
      if (ln == 0 && hn == hd) {
        whole += c;
      } else {
        Rational lo(to_integer(ln), to_integer(ld)), hi(to_integer(hn), to_integer(hd));
        lo.canonicalize();
        hi.canonicalize();
        partial += (hi - lo) * Rational(to_integer(c));
      }
    }
  };
  pass(p, q, false);
  pass(q, p, true);
  return partial + Rational(to_integer(whole));
}

}  // namespace detail

/// Evaluator for g_{K,L}(x) = λ₂(K ∩ (L + x)).
///
/// Coordinates are brought to a common denominator so that small inputs run
/// in fixed-width integers; anything that would not fit is clipped with
/// rationals instead. Both paths are exact.
class CrossCovariogram {
 public:
  CrossCovariogram(ConvexPolygon k, ConvexPolygon l) : k_(std::move(k)), l_(std::move(l)) {
    kbox_ = bounding_box(k_);
    lbox_ = bounding_box(l_);
    lines_.reserve(l_.size());
    for (size_t i = 0; i < l_.size(); ++i) lines_.push_back(left_of(l_.vertex(i), l_.edge(i)));
    Integer den = 1;
    for (const auto* poly : {&k_, &l_})
      for (const auto& v : poly->vertices()) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.x.get_den_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.y.get_den_mpz_t());
      }
    integral_ = den.fits_slong_p() && scale_into(k_, den, kint_) && scale_into(l_, den, lint_);
    if (integral_) den_ = den.get_si();
  }

  const ConvexPolygon& first() const { return k_; }
  const ConvexPolygon& second() const { return l_; }

  Rational operator()(const Point2& x) const {
    // Boxes that at most touch give a zero-area intersection.
    if (kbox_.hi.x <= lbox_.lo.x + x.x || lbox_.hi.x + x.x <= kbox_.lo.x) return 0;
    if (kbox_.hi.y <= lbox_.lo.y + x.y || lbox_.hi.y + x.y <= kbox_.lo.y) return 0;
    if (integral_) {
      if (auto r = integer_eval(x)) return *r;
    }
    return clip_eval(x);
  }

  /// Rational clipping path, exposed for cross-checking.
  Rational clip_eval(const Point2& x) const {
    thread_local std::vector<Point2> cur, next;
    thread_local std::vector<Rational> sides;
    cur = k_.vertices();
    Halfplane shifted;
    for (const auto& h : lines_) {
      shifted.a = h.a;
      shifted.b = h.b;
      shifted.c = h.c + h.a * x.x + h.b * x.y;
      detail::clip_against(cur, shifted, next, sides);
      cur.swap(next);
      if (cur.size() < 3) return 0;
    }
    Rational s = detail::twice_signed_area(cur);
    return s / 2;
  }

 private:
  static bool scale_into(const ConvexPolygon& p, const Integer& den, std::vector<detail::IPoint>& out) {
    out.clear();
    for (const auto& v : p.vertices()) {
      Rational sx = v.x * Rational(den), sy = v.y * Rational(den);
      const Integer& ix = sx.get_num();
      const Integer& iy = sy.get_num();
      if (!ix.fits_slong_p() || !iy.fits_slong_p()) return false;
      long a = ix.get_si(), b = iy.get_si();
      if (std::abs(a) >= detail::kCoordLimit || std::abs(b) >= detail::kCoordLimit) return false;
      out.push_back({a, b});
    }
    return true;
  }

  std::optional<Rational> integer_eval(const Point2& x) const {
    // Common denominator S = lcm(den_, e) with e = lcm of x's denominators.
    Integer e;
    mpz_lcm(e.get_mpz_t(), x.x.get_den_mpz_t(), x.y.get_den_mpz_t());
    if (!e.fits_slong_p()) return std::nullopt;
    const long el = e.get_si();
    const long g = std::gcd(den_, el);
    const long k = el / g;  // S = den_ * k
    if (k >= detail::kCoordLimit || den_ >= detail::kCoordLimit) return std::nullopt;
    const detail::i128 s = detail::i128(den_) * k;
    if (s >= detail::kCoordLimit) return std::nullopt;
    Integer sx = x.x.get_num() * (static_cast<long>(s) / x.x.get_den().get_si());
    Integer sy = x.y.get_num() * (static_cast<long>(s) / x.y.get_den().get_si());
    if (!sx.fits_slong_p() || !sy.fits_slong_p()) return std::nullopt;
    const long tx = sx.get_si(), ty = sy.get_si();
    thread_local std::vector<detail::IPoint> kp, lp;
    kp.resize(kint_.size());
    lp.resize(lint_.size());
    for (size_t i = 0; i < kint_.size(); ++i) {
      detail::i128 a = detail::i128(kint_[i].x) * k, b = detail::i128(kint_[i].y) * k;
      if (a >= detail::kCoordLimit || a <= -detail::kCoordLimit || b >= detail::kCoordLimit ||
          b <= -detail::kCoordLimit)
        return std::nullopt;
      kp[i] = {static_cast<int64_t>(a), static_cast<int64_t>(b)};
    }
    for (size_t i = 0; i < lint_.size(); ++i) {
      detail::i128 a = detail::i128(lint_[i].x) * k + tx, b = detail::i128(lint_[i].y) * k + ty;
      if (a >= detail::kCoordLimit || a <= -detail::kCoordLimit || b >= detail::kCoordLimit ||
          b <= -detail::kCoordLimit)
        return std::nullopt;
      lp[i] = {static_cast<int64_t>(a), static_cast<int64_t>(b)};
    }
    Rational twice = detail::twice_area_integer(kp, lp);
    Integer s2 = Integer(static_cast<long>(s)) * Integer(static_cast<long>(s)) * 2;
    return Rational(twice / Rational(s2));
  }

  ConvexPolygon k_, l_;
  BoundingBox kbox_, lbox_;
  std::vector<Halfplane> lines_;
  bool integral_ = false;
  long den_ = 1;
  std::vector<detail::IPoint> kint_, lint_;
};

/// Exact covariogram value at a location.
struct CovariogramValue {
  Rational value;
  Point2 location;
};

inline CovariogramValue eval(const ConvexPolygon& k, const ConvexPolygon& l, const Point2& x) {
  return {CrossCovariogram(k, l)(x), x};
}

/// supp g_{K,L} = K + (-L).
inline ConvexPolygon support(const ConvexPolygon& k, const ConvexPolygon& l) { return minkowski_sum(k, reflect(l)); }

/// Unordered pair stored with first <= second.
template <class T>
struct UnorderedPair {
  T first, second;

  UnorderedPair() = default;
  UnorderedPair(T a, T b) : first(std::move(a)), second(std::move(b)) {
    if (second < first) std::swap(first, second);
  }
  friend bool operator==(const UnorderedPair& p, const UnorderedPair& q) {
    return p.first == q.first && p.second == q.second;
  }
};

using LengthPair = UnorderedPair<Rational>;

/// {λ₁(K_u), λ₁(L_{-u})}, in units of the primitive vector orthogonal to u.
inline LengthPair edge_length_pair(const ConvexPolygon& k, const ConvexPolygon& l, const Direction& u) {
  Face fk = exposed_face(k, u);
  Face fl = exposed_face(l, -u);
  return {length_in_units(fk.vector(), u), length_in_units(fl.vector(), u)};
}

struct Segment {
  Point2 a, b;
  friend bool operator==(const Segment& s, const Segment& t) { return s.a == t.a && s.b == t.b; }
};

/// Closure of the points where g is not C², as a canonical arrangement of
/// maximal collinear segments (sorted, endpoints lexicographically ordered).
struct SingularSet {
  std::vector<Segment> segments;
  size_t raw_count = 0;  // translated boundary edges before merging
};

namespace detail {

/// Portion of segment [a,b] inside a closed convex polygon, if nonempty.
inline std::optional<Segment> clip_segment(const Point2& a, const Point2& b, const ConvexPolygon& p) {
  Rational t0 = 0, t1 = 1;
  const Point2 d = b - a;
  for (size_t i = 0; i < p.size(); ++i) {
    Halfplane h = left_of(p.vertex(i), p.edge(i));
    Rational sa = h.side(a), sd = h.a * d.x + h.b * d.y;
    if (sgn(sd) == 0) {
      if (sgn(sa) < 0) return std::nullopt;
      continue;
    }
    Rational t = -sa / sd;
    if (sgn(sd) > 0) {
      if (t > t0) t0 = t;
    } else if (t < t1) {
      t1 = t;
    }
    if (t0 > t1) return std::nullopt;
  }
  return Segment{a + t0 * d, a + t1 * d};
}

}  // namespace detail

/// S²(K,L) = ⋃_{z vertex of K} (−∂L + z) ∪ ⋃_{w vertex of −L} (∂K + w).
inline SingularSet second_singular_set(const ConvexPolygon& k, const ConvexPolygon& l) {
  const ConvexPolygon ml = reflect(l);
  const ConvexPolygon supp = minkowski_sum(k, ml);
  std::vector<Segment> raw;
  for (const auto& z : k.vertices())
    for (size_t i = 0; i < ml.size(); ++i) raw.push_back({ml.vertex(i) + z, ml.vertex(i + 1) + z});
  for (const auto& w : ml.vertices())
    for (size_t i = 0; i < k.size(); ++i) raw.push_back({k.vertex(i) + w, k.vertex(i + 1) + w});

  // Group by supporting line (primitive normal with fixed sign, offset) and
  // merge overlapping or touching parameter intervals.
  struct Key {
    Rational nx, ny, c;
    bool operator<(const Key& o) const {
      if (nx != o.nx) return nx < o.nx;
      if (ny != o.ny) return ny < o.ny;
      return c < o.c;
    }
  };
  std::map<Key, std::vector<std::pair<Rational, Rational>>> lines;
  for (const auto& s : raw) {
    Point2 d = s.b - s.a;
    Direction n(Point2(-d.y, d.x));
    if (sgn(n.dx()) < 0 || (sgn(n.dx()) == 0 && sgn(n.dy()) < 0)) n = -n;
    Key key{n.dx(), n.dy(), dot(n.vec(), s.a)};
    Point2 t(n.dy(), -n.dx());  // direction along the line
    Rational ta = dot(t, s.a), tb = dot(t, s.b);
    if (tb < ta) std::swap(ta, tb);
    lines[key].push_back({ta, tb});
  }
  SingularSet out;
  out.raw_count = raw.size();
  for (auto& [key, iv] : lines) {
    std::sort(iv.begin(), iv.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    std::vector<std::pair<Rational, Rational>> merged;
    for (const auto& p : iv) {
      if (!merged.empty() && p.first <= merged.back().second) {
        if (p.second > merged.back().second) merged.back().second = p.second;
      } else {
        merged.push_back(p);
      }
    }
    // Recover points: n·p = c, t·p = s with t ⊥ n, |n|² = |t|².
    Rational nn = key.nx * key.nx + key.ny * key.ny;
    Point2 nvec(key.nx, key.ny), tvec(key.ny, -key.nx);
    for (const auto& [s0, s1] : merged) {
      Point2 a = (key.c / nn) * nvec + (s0 / nn) * tvec;
      Point2 b = (key.c / nn) * nvec + (s1 / nn) * tvec;
      if (auto clipped = detail::clip_segment(a, b, supp)) {
        Segment seg = *clipped;
        if (lex_less(seg.b, seg.a)) std::swap(seg.a, seg.b);
        out.segments.push_back(seg);
      }
    }
  }
  std::sort(out.segments.begin(), out.segments.end(), [](const Segment& s, const Segment& t) {
    if (s.a != t.a) return lex_less(s.a, t.a);
    return lex_less(s.b, t.b);
  });
  return out;
}

/// Dense exact lattice evaluation; values[j * nx + i] sits at
/// origin + (i * x_step, j * y_step).
struct GridSample {
  Point2 origin;
  Rational x_step, y_step;
  size_t nx = 0, ny = 0;
  std::vector<Rational> values;

  Point2 location(size_t i, size_t j) const {
    return {origin.x + Rational(static_cast<long>(i)) * x_step, origin.y + Rational(static_cast<long>(j)) * y_step};
  }
  const Rational& at(size_t i, size_t j) const { return values[j * nx + i]; }
};

inline GridSample sample_grid(const ConvexPolygon& k, const ConvexPolygon& l, size_t nx, size_t ny,
                              std::optional<BoundingBox> bounds = std::nullopt) {
  if (nx < 2 || ny < 2) throw Error(ErrorKind::BadResolution, "grid resolution must be at least 2 per axis");
  BoundingBox box = bounds ? *bounds : bounding_box(support(k, l));
  if (!(box.hi.x > box.lo.x) || !(box.hi.y > box.lo.y))
    throw Error(ErrorKind::BadResolution, "grid bounds must have positive extent");
  GridSample g;
  g.origin = box.lo;
  g.nx = nx;
  g.ny = ny;
  g.x_step = (box.hi.x - box.lo.x) / Rational(static_cast<long>(nx - 1));
  g.y_step = (box.hi.y - box.lo.y) / Rational(static_cast<long>(ny - 1));
  g.values.assign(nx * ny, Rational(0));
  const CrossCovariogram cov(k, l);
  parallel_for(ny, [&](size_t j) {
    for (size_t i = 0; i < nx; ++i) g.values[j * nx + i] = cov(g.location(i, j));
  });
  return g;
}

struct MonteCarloEstimate {
  double estimate = 0;
  double std_error = 0;  // binomial standard error of the estimate
  size_t samples = 0;
  size_t hits = 0;
};

/// Independent statistical estimate of λ₂(K ∩ (L + x)) by uniform rejection
/// sampling in the intersection of the two bounding boxes. The generator is
/// std::mt19937_64 seeded with `seed`, so results are reproducible.
inline MonteCarloEstimate monte_carlo_check(const ConvexPolygon& k, const ConvexPolygon& l, const Point2& x,
                                            size_t n, uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::BadParams, "sample count must be positive");
  struct P {
    double x, y;
  };
  auto to_d = [](const ConvexPolygon& p, const Point2& shift) {
    std::vector<P> v;
    for (const auto& q : p.vertices()) v.push_back({to_double(q.x + shift.x), to_double(q.y + shift.y)});
    return v;
  };
  const auto kv = to_d(k, Point2(0, 0));
  const auto lv = to_d(l, x);
  auto inside = [](const std::vector<P>& v, double px, double py) {
    for (size_t i = 0, n = v.size(); i < n; ++i) {
      const P& a = v[i];
      const P& b = v[(i + 1) % n];
      if ((b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x) < 0) return false;
    }
    return true;
  };
  auto box = [](const std::vector<P>& v) {
    P lo = v[0], hi = v[0];
    for (const auto& p : v) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
    return std::make_pair(lo, hi);
  };
  auto [klo, khi] = box(kv);
  auto [llo, lhi] = box(lv);
  const double x0 = std::max(klo.x, llo.x), x1 = std::min(khi.x, lhi.x);
  const double y0 = std::max(klo.y, llo.y), y1 = std::min(khi.y, lhi.y);
  MonteCarloEstimate r;
  r.samples = n;
  if (!(x1 > x0) || !(y1 > y0)) return r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  for (size_t i = 0; i < n; ++i) {
    double px = ux(rng), py = uy(rng);
    if (inside(kv, px, py) && inside(lv, px, py)) ++r.hits;
  }
  const double box_area = (x1 - x0) * (y1 - y0);
  const double p = static_cast<double>(r.hits) / static_cast<double>(n);
  r.estimate = box_area * p;
  r.std_error = box_area * std::sqrt(p * (1 - p) / static_cast<double>(n));
  return r;
}

}  // namespace crosscov
