#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crosscov/planar_cone.hpp"
#include "crosscov/polygon.hpp"

namespace crosscov {

/// Pair of pointed cones (A, B) with A ∩ B = {O}, so that A ∩ (B + x) is
/// bounded for every x.
class ConePair {
 public:
  ConePair(PlanarCone a, PlanarCone b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.kind() != PlanarCone::Kind::Pointed || b_.kind() != PlanarCone::Kind::Pointed)
      throw Error(ErrorKind::InvalidCone, "cone pair members must be pointed with nonempty interior");
    if (!meet_only_at_apex(a_, b_)) throw Error(ErrorKind::InvalidCone, "cones of a pair must meet only at the apex");
  }

  const PlanarCone& a() const { return a_; }
  const PlanarCone& b() const { return b_; }

 private:
  PlanarCone a_, b_;
};

namespace detail {

/// λ₂(A ∩ (B + x)) for cones with A ∩ B ⊂ {O}; degenerate cones give 0.
inline Rational cone_area(const PlanarCone& a, const PlanarCone& b, const Point2& x) {
  if (a.kind() != PlanarCone::Kind::Pointed || b.kind() != PlanarCone::Kind::Pointed) return 0;
  struct Line {
    Point2 p, d;  // region to the left of p + t d
  };
  const Line lines[4] = {{Point2(0, 0), a.lower().vec()},
                         {Point2(0, 0), -a.upper().vec()},
                         {x, b.lower().vec()},
                         {x, -b.upper().vec()}};
  auto feasible = [&](const Point2& y) {
    for (const auto& l : lines)
      if (sgn(cross(l.d, y - l.p)) < 0) return false;
    return true;
  };
  std::vector<Point2> pts;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Rational den = cross(lines[i].d, lines[j].d);
      if (sgn(den) == 0) continue;
      Rational t = cross(lines[j].p - lines[i].p, lines[j].d) / den;
      Point2 y = lines[i].p + t * lines[i].d;
      if (feasible(y)) pts.push_back(y);
    }
  auto hull = convex_hull(std::move(pts));
  if (hull.size() < 3) return 0;
  return twice_signed_area(hull) / 2;
}

}  // namespace detail

/// g_{A,B}(x) = λ₂(A ∩ (B + x)).
inline Rational cone_cov_eval(const ConePair& pair, const Point2& x) { return detail::cone_area(pair.a(), pair.b(), x); }

/// The explicit piecewise quadratic shared by the two canonical cone pairs.
inline Rational canonical_example_closed_form(int which, const Point2& x) {
  if (which != 1 && which != 2) throw Error(ErrorKind::BadParams, "canonical cone example is 1 or 2");
  const Rational &x1 = x.x, &x2 = x.y;
  if (sgn(x2) < 0) return 0;
  if (x1 >= x2) return x2 * x2 / 2;
  if (sgn(x1) >= 0) return (x2 * x2 - x1 * x1 + 2 * x1 * x2) / 4;
  if (x2 >= -x1) return (x1 + x2) * (x1 + x2) / 4;
  return 0;
}

/// Exact access to a cone covariogram whose support lies in the closed
/// halfplane to the left of `halfplane_lower`.
struct ConeOracle {
  std::function<Rational(const Point2&)> eval;
  Direction halfplane_lower;

  static ConeOracle from_pair(const ConePair& pair) {
    // supp = conv(A ∪ −B) is pointed; its lower ray bounds a containing halfplane.
    const PlanarCone mb = -pair.b();
    const Direction cand[4] = {pair.a().lower(), pair.a().upper(), mb.lower(), mb.upper()};
    Direction lo = cand[0];
    for (const Direction& d : cand)
      if (std::all_of(std::begin(cand), std::end(cand), [&](const Direction& e) { return sgn(cross(d.vec(), e.vec())) >= 0; }))
        lo = d;
    return {[pair](const Point2& x) { return cone_cov_eval(pair, x); }, lo};
  }
};

/// Binary quadratic form a·x² + b·xy + c·y².
struct QuadForm {
  Rational a, b, c;

  Rational operator()(const Point2& p) const { return a * p.x * p.x + b * p.x * p.y + c * p.y * p.y; }
  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0 && sgn(c) == 0; }
  friend bool operator==(const QuadForm& f, const QuadForm& g) { return f.a == g.a && f.b == g.b && f.c == g.c; }
  friend bool operator!=(const QuadForm& f, const QuadForm& g) { return !(f == g); }
  friend QuadForm operator-(const QuadForm& f, const QuadForm& g) { return {f.a - g.a, f.b - g.b, f.c - g.c}; }
};

/// Singular rays together with the quadratic form of g on each sector
/// between consecutive rays (sector i lies between rays i and i+1).
struct RayStructure {
  std::vector<Direction> rays;
  std::vector<QuadForm> sector_forms;
};

namespace detail {

struct PointLess {
  bool operator()(const Point2& p, const Point2& q) const { return lex_less(p, q); }
};

/// Memoizing wrapper so that shared chord points are never re-queried.
class CachedOracle {
 public:
  explicit CachedOracle(const std::function<Rational(const Point2&)>& f) : f_(f) {}
  const Rational& operator()(const Point2& p) {
    auto it = cache_.find(p);
    if (it == cache_.end()) it = cache_.emplace(p, f_(p)).first;
    return it->second;
  }

 private:
  const std::function<Rational(const Point2&)>& f_;
  std::map<Point2, Rational, PointLess> cache_;
};

inline Point2 chord(const Point2& l, const Point2& r, const Rational& t) { return (1 - t) * l + t * r; }

/// Check points along a chord, chosen away from simple dyadic fractions and
/// including two points close to each end.
inline const std::vector<Rational>& chord_checks() {
  static const std::vector<Rational> t = {Rational(0),        Rational(1, 97), Rational(1, 5),  Rational(1, 3),
                                          Rational(2, 3),     Rational(4, 5),  Rational(96, 97), Rational(1)};
  return t;
}

/// Quadratic form through the values at t = 1/4, 1/2, 3/4 of the chord l→r.
inline QuadForm fit_form(CachedOracle& g, const Point2& l, const Point2& r) {
  const Rational v1 = g(chord(l, r, Rational(1, 4))), v2 = g(chord(l, r, Rational(1, 2))),
                 v3 = g(chord(l, r, Rational(3, 4)));
  // p(t) = p0 + p1 t + p2 t² through (1/4,v1), (1/2,v2), (3/4,v3).
  const Rational p2 = 8 * (v1 - 2 * v2 + v3);
  const Rational p1 = 2 * (v3 - v1) - p2;
  const Rational p0 = v2 - p1 / 2 - p2 / 4;
  const Rational ql = p0, bb = (p1 + 2 * p0) / 2, qr = p0 + p1 + p2;
  const Rational d = cross(l, r);
  const Rational d2 = d * d;
  QuadForm f;
  f.a = (ql * r.y * r.y - 2 * bb * r.y * l.y + qr * l.y * l.y) / d2;
  f.c = (ql * r.x * r.x - 2 * bb * r.x * l.x + qr * l.x * l.x) / d2;
  f.b = (-2 * ql * r.x * r.y + 2 * bb * (r.y * l.x + r.x * l.y) - 2 * qr * l.x * l.y) / d2;
  return f;
}

inline bool form_fits(CachedOracle& g, const QuadForm& f, const Point2& l, const Point2& r) {
  if (sgn(cross(l, r)) == 0) return true;
  for (const auto& t : chord_checks()) {
    Point2 p = chord(l, r, t);
    if (g(p) != f(p)) return false;
  }
  return true;
}

inline std::optional<QuadForm> clean_form(CachedOracle& g, const Point2& l, const Point2& r) {
  QuadForm f = fit_form(g, l, r);
  if (form_fits(g, f, l, r)) return f;
  return std::nullopt;
}

inline bool in_closed_cone(const Point2& lo, const Point2& hi, const Point2& v) {
  return sgn(cross(lo, v)) >= 0 && sgn(cross(v, hi)) >= 0;
}

/// Rational directions where the form vanishes, restricted to [lo, hi].
inline std::vector<Point2> rational_roots_in(const QuadForm& d, const Point2& lo, const Point2& hi) {
  std::vector<Point2> roots;
  if (d.is_zero()) return roots;
  auto add = [&](const Point2& v) {
    for (const Point2& w : {v, Point2(-v)})
      if (in_closed_cone(lo, hi, w)) roots.push_back(Direction(w).vec());
  };
  if (sgn(d.a) == 0) {
    // y·(b·x + c·y) = 0
    add(Point2(1, 0));
    if (sgn(d.b) != 0) add(Point2(-d.c, d.b));
    return roots;
  }
  const Rational disc = d.b * d.b - 4 * d.a * d.c;
  if (sgn(disc) < 0) return roots;
  auto s = exact_sqrt(disc);
  if (!s) return roots;
  add(Point2((-d.b + *s) / (2 * d.a), Rational(1)));
  if (sgn(*s) != 0) add(Point2((-d.b - *s) / (2 * d.a), Rational(1)));
  return roots;
}

/// Integer w with cross(h, w) = 1 for primitive h.
inline Point2 unimodular_partner(const Direction& h) {
  Integer p = h.dx().get_num(), q = h.dy().get_num();
  // Want p·wy − q·wx = 1.
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  // s·p + t·q = 1 (g = 1 for primitive h): take wy = s, wx = −t.
  return Point2(Rational(-t), Rational(s));
}

}  // namespace detail

/// Boundary rays of ∂A ∪ (−∂B) in counterclockwise order starting from the
/// declared halfplane, found from the points where the quadratic form of
/// the oracle changes.
inline RayStructure singular_ray_structure(const ConeOracle& oracle) {
  detail::CachedOracle g(oracle.eval);
  const Point2 h0 = oracle.halfplane_lower.vec();
  const Point2 w = detail::unimodular_partner(oracle.halfplane_lower);

  struct Piece {
    Point2 l, r;
    std::optional<QuadForm> form;
    int depth;
  };
  std::vector<Piece> pieces;
  for (auto [l, r] : {std::pair{h0, h0 + w}, std::pair{h0 + w, w}, std::pair{w, w - h0}, std::pair{w - h0, -h0}})
    pieces.push_back({l, r, detail::clean_form(g, l, r), 1});

  const QuadForm zero{0, 0, 0};
  size_t guard = 0;
  for (;;) {
    auto it = std::find_if(pieces.begin(), pieces.end(), [](const Piece& p) { return !p.form; });
    if (it == pieces.end()) break;
    if (++guard > 4096) throw Error(ErrorKind::OracleInconsistent, "singular ray search does not terminate");
    const size_t i = static_cast<size_t>(it - pieces.begin());
    Piece cur = pieces[i];
    std::optional<QuadForm> left = i == 0 ? std::optional<QuadForm>(zero) : pieces[i - 1].form;
    std::optional<QuadForm> right = i + 1 == pieces.size() ? std::optional<QuadForm>(zero) : pieces[i + 1].form;
    if (left && right && *left != *right) {
      bool done = false;
      for (const Point2& d : detail::rational_roots_in(*left - *right, cur.l, cur.r)) {
        if (detail::form_fits(g, *left, cur.l, d) && detail::form_fits(g, *right, d, cur.r)) {
          std::vector<Piece> repl;
          if (sgn(cross(cur.l, d)) != 0) repl.push_back({cur.l, d, left, cur.depth});
          if (sgn(cross(d, cur.r)) != 0) repl.push_back({d, cur.r, right, cur.depth});
          pieces.erase(pieces.begin() + static_cast<long>(i));
          pieces.insert(pieces.begin() + static_cast<long>(i), repl.begin(), repl.end());
          done = true;
          break;
        }
      }
      if (done) continue;
    }
    if (cur.depth >= 64) throw Error(ErrorKind::OracleInconsistent, "singular ray refinement exceeded depth 64");
    const Point2 m = Direction(cur.l + cur.r).vec();
    Piece a{cur.l, m, detail::clean_form(g, cur.l, m), cur.depth + 1};
    Piece b{m, cur.r, detail::clean_form(g, m, cur.r), cur.depth + 1};
    pieces[i] = a;
    pieces.insert(pieces.begin() + static_cast<long>(i) + 1, b);
  }

  // Where two clean neighbours disagree the ray may sit inside either of
  // them rather than at the shared endpoint; locate it exactly.
  std::vector<Point2> bounds;  // candidate ray positions, one per junction
  std::vector<std::pair<QuadForm, QuadForm>> sides;
  for (size_t i = 0; i <= pieces.size(); ++i) {
    const QuadForm lf = i == 0 ? zero : *pieces[i - 1].form;
    const QuadForm rf = i == pieces.size() ? zero : *pieces[i].form;
    if (lf == rf) continue;
    if (i == 0 || i == pieces.size()) {
      bounds.push_back(i == 0 ? h0 : Point2(-h0));
    } else {
      const Point2 lo = pieces[i - 1].l, hi = pieces[i].r, mid = pieces[i].l;
      std::optional<Point2> found;
      if (detail::form_fits(g, lf, lo, mid) && detail::form_fits(g, rf, mid, hi)) found = mid;
      for (const Point2& d : detail::rational_roots_in(lf - rf, lo, hi)) {
        if (found) break;
        if (detail::form_fits(g, lf, lo, d) && detail::form_fits(g, rf, d, hi)) found = d;
      }
      if (!found) throw Error(ErrorKind::OracleInconsistent, "form change not located on a rational ray");
      bounds.push_back(*found);
    }
    sides.push_back({lf, rf});
  }

  RayStructure out;
  for (size_t k = 0; k < bounds.size(); ++k) {
    out.rays.push_back(Direction(bounds[k]));
    if (k + 1 < bounds.size()) {
      if (sides[k].second != sides[k + 1].first)
        throw Error(ErrorKind::OracleInconsistent, "sector forms disagree between consecutive rays");
      out.sector_forms.push_back(sides[k].second);
    }
  }
  if (out.rays.size() < 2 || out.rays.size() > 4)
    throw Error(ErrorKind::OracleInconsistent,
                "found " + std::to_string(out.rays.size()) + " singular rays, expected 2 to 4");
  for (size_t k = 0; k + 1 < out.rays.size(); ++k)
    if (sgn(cross(out.rays[k].vec(), out.rays[k + 1].vec())) <= 0)
      throw Error(ErrorKind::OracleInconsistent, "singular rays are not in counterclockwise order");

  // Degree-2 homogeneity at radius 2.
  std::vector<Point2> probes;
  for (size_t k = 0; k < out.rays.size(); ++k) {
    probes.push_back(out.rays[k].vec());
    if (k + 1 < out.rays.size()) probes.push_back(out.rays[k].vec() + out.rays[k + 1].vec());
  }
  for (const auto& p : probes)
    if (g(2 * p) != 4 * g(p)) throw Error(ErrorKind::OracleInconsistent, "oracle is not homogeneous of degree 2");
  return out;
}

inline std::vector<Direction> singular_rays(const ConeOracle& oracle) { return singular_ray_structure(oracle).rays; }

/// {A, −B} as an unordered pair of cones, `first` not after `second`.
struct ConeSolution {
  PlanarCone first, second;

  ConeSolution(PlanarCone a, PlanarCone b) : first(std::move(a)), second(std::move(b)) {
    if (cone_less(second, first)) std::swap(first, second);
  }
  friend bool operator==(const ConeSolution& s, const ConeSolution& t) {
    return s.first == t.first && s.second == t.second;
  }
  /// A cone pair with this covariogram: (first, −second).
  ConePair as_pair() const { return ConePair(first, -second); }
};

enum class ConeCase { TwoRays, ThreeRays, Case1, Case2, Case3, Ambiguous };

inline const char* case_name(ConeCase c) {
  switch (c) {
    case ConeCase::TwoRays: return "two-rays";
    case ConeCase::ThreeRays: return "three-rays";
    case ConeCase::Case1: return "case-1";
    case ConeCase::Case2: return "case-2";
    case ConeCase::Case3: return "case-3";
    case ConeCase::Ambiguous: return "ambiguous";
  }
  return "?";
}

struct ConeRecoveryResult {
  enum class Kind { Unique, Ambiguous };
  Kind kind = Kind::Unique;
  std::vector<ConeSolution> solutions;
  std::vector<Direction> rays;
  ConeCase label = ConeCase::TwoRays;
  /// For four rays: linear map sending rays 1..4 to angles 0, π/4, π/2, 3π/4
  /// and the point chosen on ray 2 to (1,1).
  std::optional<Matrix2> transform;
};

namespace detail {

/// Linear coefficient c₁ of ε ↦ f(ε) = c₁ε + c₂ε², f(0) = 0, certified on
/// ε, ε/2, ε/4 and ε/3 and halving ε on failure.
inline Rational certified_slope(const std::function<Rational(const Rational&)>& f, Rational eps = Rational(1, 4)) {
  for (int k = 0; k < 64; ++k, eps /= 2) {
    const Rational f1 = f(eps), f2 = f(eps / 2), f4 = f(eps / 4), f3 = f(eps / 3);
    // Quadratic with constant term through ε/4, ε/2, ε.
    const Rational e = eps;
    // Solve f(t) = c0 + c1 t + c2 t² at t = e/4, e/2, e.
    const Rational t1 = e / 4, t2 = e / 2, t3 = e;
    const Rational d12 = (f2 - f4) / (t2 - t1), d23 = (f1 - f2) / (t3 - t2);
    const Rational c2 = (d23 - d12) / (t3 - t1);
    const Rational c1 = d12 - c2 * (t1 + t2);
    const Rational c0 = f4 - c1 * t1 - c2 * t1 * t1;
    const Rational t4 = e / 3;
    if (sgn(c0) == 0 && c0 + c1 * t4 + c2 * t4 * t4 == f3) return c1;
  }
  throw Error(ErrorKind::OracleInconsistent, "local model is not linear plus quadratic at any tested scale");
}

}  // namespace detail

/// Decides {A, −B} from the covariogram of (A, B), or reports the two
/// solutions when the configuration is the affine image of the canonical
/// ambiguous pair.
inline ConeRecoveryResult recover_cone_pair(const ConeOracle& oracle) {
  const RayStructure rs = singular_ray_structure(oracle);
  ConeRecoveryResult res;
  res.rays = rs.rays;
  const auto& r = rs.rays;
  auto cone = [&](size_t i, size_t j) {
    try {
      return PlanarCone::pointed(r[i], r[j]);
    } catch (const Error&) {
      throw Error(ErrorKind::OracleInconsistent, "detected rays do not bound pointed cones");
    }
  };

  if (r.size() == 2) {
    res.label = ConeCase::TwoRays;
    res.solutions.emplace_back(cone(0, 1), cone(0, 1));
  } else if (r.size() == 3) {
    res.label = ConeCase::ThreeRays;
    const Point2 r1 = r[0].vec(), p1 = r[0].perp().vec();
    const Point2 r3 = r[2].vec(), p3 = r[2].perp().vec();
    const Rational s1 = detail::certified_slope([&](const Rational& e) { return oracle.eval(r1 + e * p1); });
    const Rational s3 = detail::certified_slope([&](const Rational& e) { return oracle.eval(r3 - e * p3); });
    if (sgn(s1) != 0 && sgn(s3) != 0)
      throw Error(ErrorKind::OracleInconsistent, "both outer rays report a shared boundary");
    if (sgn(s1) != 0) res.solutions.emplace_back(cone(0, 1), cone(0, 2));
    else if (sgn(s3) != 0) res.solutions.emplace_back(cone(1, 2), cone(0, 2));
    else res.solutions.emplace_back(cone(0, 1), cone(1, 2));
  } else {
    const Point2 r1 = r[0].vec(), r3 = r[2].vec(), r4 = r[3].vec();
    const Point2 p2 = r[1].vec();
    const Rational d14 = cross(r1, r4);
    const Rational s = cross(p2, r4) / d14, t = cross(r1, p2) / d14;
    const Point2 a2 = t * r4;
    const Rational tau = -cross(r3, p2) / cross(r3, a2 - p2);
    const Rational vol = s * t * abs(d14);
    const Rational v = oracle.eval(p2);
    // T: r1 ↦ (2/s)(1,0), r4 ↦ (1/t)(−1,1), so that T p2 = (1,1).
    const Matrix2 img = Matrix2::from_columns(Point2(2 / s, Rational(0)), Point2(-1 / t, 1 / t));
    res.transform = img * Matrix2::from_columns(r1, r4).inverse();
    const Rational case1 = vol / 2, case2 = tau * vol / 2, case3 = (1 - tau) * vol / 2;
    if (tau == Rational(1, 2) && v == case2) {
      res.kind = ConeRecoveryResult::Kind::Ambiguous;
      res.label = ConeCase::Ambiguous;
      res.solutions.emplace_back(cone(1, 2), cone(0, 3));
      res.solutions.emplace_back(cone(0, 1), cone(2, 3));
    } else if (v == case1) {
      res.label = ConeCase::Case1;
      res.solutions.emplace_back(cone(0, 2), cone(1, 3));
    } else if (v == case2) {
      res.label = ConeCase::Case2;
      res.solutions.emplace_back(cone(1, 2), cone(0, 3));
    } else if (v == case3) {
      res.label = ConeCase::Case3;
      res.solutions.emplace_back(cone(0, 1), cone(2, 3));
    } else {
      throw Error(ErrorKind::OracleInconsistent, "value on the second ray matches none of the four-ray cases");
    }
  }

  // Every solution must reproduce the sector forms it was derived from.
  for (const auto& sol : res.solutions) {
    ConePair pair = [&] {
      try {
        return sol.as_pair();
      } catch (const Error&) {
        throw Error(ErrorKind::OracleInconsistent, "recovered cones do not form an admissible pair");
      }
    }();
    for (size_t k = 0; k + 1 < r.size(); ++k)
      for (const Rational& tt : {Rational(1, 3), Rational(1, 2), Rational(5, 7)}) {
        const Point2 p = detail::chord(r[k].vec(), r[k + 1].vec(), tt);
        if (cone_cov_eval(pair, p) != rs.sector_forms[k](p))
          throw Error(ErrorKind::OracleInconsistent, "recovered cones do not reproduce the oracle");
      }
  }
  std::sort(res.solutions.begin(), res.solutions.end(), [](const ConeSolution& x, const ConeSolution& y) {
    if (x.first != y.first) return cone_less(x.first, y.first);
    return cone_less(x.second, y.second);
  });
  return res;
}

/// g_{A,C} + g_{B,D} − g_{A,D} − g_{B,C} at x.
inline Rational cone_quad_identity_residual(const PlanarCone& a, const PlanarCone& b, const PlanarCone& c,
                                            const PlanarCone& d, const Point2& x) {
  using K = PlanarCone::Kind;
  auto admissible = [](const PlanarCone& k) { return k.kind() == K::Origin || k.kind() == K::Pointed; };
  for (const PlanarCone* k : {&a, &b, &c, &d})
    if (!admissible(*k)) throw Error(ErrorKind::HypothesisViolated, "cones must be pointed with interior or {O}");
  for (const PlanarCone* k : {&a, &b})
    if (k->kind() == K::Pointed && (sgn(k->lower().dy()) <= 0 || sgn(k->upper().dy()) <= 0))
      throw Error(ErrorKind::HypothesisViolated, "upper cones must meet the horizontal axis only at O");
  bool pos = false, neg = false;
  for (const PlanarCone* k : {&c, &d}) {
    if (k->kind() != K::Pointed) continue;
    for (const Direction& e : {k->lower(), k->upper()}) {
      if (sgn(e.dy()) > 0) throw Error(ErrorKind::HypothesisViolated, "lower cones must lie in the lower halfplane");
      if (sgn(e.dy()) == 0) (sgn(e.dx()) > 0 ? pos : neg) = true;
    }
  }
  if (pos && neg) throw Error(ErrorKind::HypothesisViolated, "the hull of the lower cones must be pointed");
  return detail::cone_area(a, c, x) + detail::cone_area(b, d, x) - detail::cone_area(a, d, x) -
         detail::cone_area(b, c, x);
}

}  // namespace crosscov
