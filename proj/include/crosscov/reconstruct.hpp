#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "crosscov/catalog.hpp"
#include "crosscov/cones.hpp"
#include "crosscov/covariogram.hpp"
#include "crosscov/synisothesis.hpp"

namespace crosscov {

/// Exact access to g_{K,L} together with its support K + (−L).
struct PolygonCovOracle {
  std::function<Rational(const Point2&)> eval;
  ConvexPolygon support_hint;

  static PolygonCovOracle from_pair(const ConvexPolygon& k, const ConvexPolygon& l) {
    auto cov = std::make_shared<const CrossCovariogram>(k, l);
    return {[cov](const Point2& x) { return (*cov)(x); }, support(k, l)};
  }
};

struct EdgeRecovery {
  size_t index;       // support edge [q_index, q_index+1]
  Direction normal;   // primitive outer normal
  Rational total;     // λ₁ of the support edge, in units of normal.perp()
  LengthPair lengths; // {λ₁(K_u), λ₁(L_{−u})}, same units
};

/// Edge length pairs from the slope of g just inside each support edge.
inline std::vector<EdgeRecovery> recover_edge_pairs(const PolygonCovOracle& oracle) {
  const ConvexPolygon& s = oracle.support_hint;
  std::vector<EdgeRecovery> out;
  for (size_t m = 0; m < s.size(); ++m) {
    const Point2 e = s.edge(m);
    const Direction u(detail::outer_normal(e));
    const Rational total = length_in_units(e, u);
    const Point2 mid = midpoint(s.vertex(m), s.vertex(m + 1));
    const Rational slope =
        detail::certified_slope([&](const Rational& eps) { return oracle.eval(mid - eps * u.vec()); });
    // Moving εu inward sweeps width ε‖u‖ over a segment of min·‖u‖ Euclidean length.
    const Rational tmin = slope / norm_sq(u.vec());
    if (sgn(tmin) < 0 || 2 * tmin > total)
      throw Error(ErrorKind::OracleInconsistent, "edge slope outside the admissible range");
    out.push_back({m, u, total, LengthPair(tmin, total - tmin)});
  }
  return out;
}

namespace detail {

inline Rational inf_norm(const Point2& p) { return std::max(abs(p.x), abs(p.y)); }

inline size_t support_vertex_index(const ConvexPolygon& s, const Point2& q) {
  for (size_t i = 0; i < s.size(); ++i)
    if (s.vertex(i) == q) return i;
  throw Error(ErrorKind::BadParams, "point is not a vertex of the support");
}

}  // namespace detail

/// Cone pair {cone(K,z), −cone(L,w)} at the support vertex q = z − w,
/// from the oracle localized as y ↦ g(q + ρy)/ρ². Each localized query is
/// checked against g(q + 2ρy) = 4 g(q + ρy); any failure halves ρ.
inline ConeRecoveryResult recover_vertex_cones(const PolygonCovOracle& oracle, const Point2& q) {
  const ConvexPolygon& s = oracle.support_hint;
  const size_t i = detail::support_vertex_index(s, q);
  const Direction h0(s.edge(i));
  const Point2 w = detail::unimodular_partner(h0);
  Rational shortest = detail::inf_norm(s.edge(0));
  for (size_t m = 1; m < s.size(); ++m) shortest = std::min(shortest, detail::inf_norm(s.edge(m)));
  Rational rho = shortest / (8 * (detail::inf_norm(h0.vec()) + detail::inf_norm(w)));
  for (int attempt = 0; attempt < 64; ++attempt, rho /= 2) {
    bool mismatch = false;
    const Rational rho2 = rho * rho;
    ConeOracle local{[&](const Point2& y) -> Rational {
                       const Rational a = oracle.eval(q + rho * y);
                       if (oracle.eval(q + 2 * rho * y) != 4 * a) mismatch = true;
                       return a / rho2;
                     },
                     h0};
    try {
      ConeRecoveryResult r = recover_cone_pair(local);
      if (!mismatch) return r;
    } catch (const Error& e) {
      if (!mismatch) throw;
    }
  }
  throw Error(ErrorKind::OracleInconsistent, "no scale localizes the oracle at a support vertex");
}

enum class EdgeLabel { Parallel, KEdge, LEdge };

inline const char* label_name(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::Parallel: return "parallel";
    case EdgeLabel::KEdge: return "K-edge";
    case EdgeLabel::LEdge: return "L-edge";
  }
  return "?";
}

/// Forward labels: which of K_u and (−L)_u are edges for each support edge.
inline std::vector<EdgeLabel> edge_labels(const ConvexPolygon& k, const ConvexPolygon& l) {
  const ConvexPolygon s = support(k, l);
  std::vector<EdgeLabel> out;
  for (size_t m = 0; m < s.size(); ++m) {
    const Direction u(detail::outer_normal(s.edge(m)));
    const bool ke = exposed_face(k, u).is_edge(), le = exposed_face(l, -u).is_edge();
    out.push_back(ke && le ? EdgeLabel::Parallel : ke ? EdgeLabel::KEdge : EdgeLabel::LEdge);
  }
  return out;
}

struct ReconstructionResult {
  enum class Kind { Unique, ExceptionalFamily12, ExceptionalFamily34 };
  Kind kind = Kind::Unique;
  std::vector<PairOfBodies> pairs;
  /// For exceptional kinds: the linear map taking pairs[0] to a translate of
  /// the catalog member of the family with `params12` / `params34`.
  std::optional<Matrix2> transform;
  std::optional<Parall12Params> params12;
  std::optional<Parall34Params> params34;
  size_t oracle_queries = 0;
  size_t assemblies_tested = 0;
};

inline const char* kind_name(ReconstructionResult::Kind k) {
  switch (k) {
    case ReconstructionResult::Kind::Unique: return "unique";
    case ReconstructionResult::Kind::ExceptionalFamily12: return "exceptional_family_12";
    case ReconstructionResult::Kind::ExceptionalFamily34: return "exceptional_family_34";
  }
  return "?";
}

struct AssembleOptions {
  size_t probes = 1000;
  uint64_t seed = 1;
};

namespace detail {

/// Remembers every value the oracle returned so that the final answer can
/// be checked against all of them.
class RecordingOracle {
 public:
  explicit RecordingOracle(const PolygonCovOracle& o) : o_(o) {}
  Rational operator()(const Point2& p) {
    auto it = seen_.find(p);
    if (it == seen_.end()) it = seen_.emplace(p, o_.eval(p)).first;
    return it->second;
  }
  PolygonCovOracle view() {
    return {[this](const Point2& p) { return (*this)(p); }, o_.support_hint};
  }
  const std::map<Point2, Rational, PointLess>& seen() const { return seen_; }

 private:
  const PolygonCovOracle& o_;
  std::map<Point2, Rational, PointLess> seen_;
};

inline bool same_line(const Direction& a, const Direction& b) { return a == b || a == -b; }

inline PairOfBodies transform_pair(const PairOfBodies& p, const Matrix2& t) {
  return {transform(p.first, t), transform(p.second, t)};
}

inline std::vector<PairOfBodies> representatives(const PairOfBodies& p) {
  return {p, {reflect(p.second), reflect(p.first)}};
}

/// Half the coordinate extent of the edge of a parallelogram parallel to d,
/// measured along the given axis (0 = x, 1 = y).
inline std::optional<Rational> half_edge(const ConvexPolygon& p, const Point2& d, int axis) {
  for (size_t i = 0; i < p.size(); ++i) {
    const Point2 e = p.edge(i);
    if (sgn(cross(e, d)) == 0) return abs(axis == 0 ? e.x : e.y) / 2;
  }
  return std::nullopt;
}

inline std::vector<Direction> edge_directions(const ConvexPolygon& p) {
  std::vector<Direction> out;
  for (size_t i = 0; i < p.size(); ++i) {
    Direction d(p.edge(i));
    if (std::none_of(out.begin(), out.end(), [&](const Direction& e) { return same_line(d, e); })) out.push_back(d);
  }
  return out;
}

struct FamilyMatch {
  Matrix2 t;
  std::optional<Parall12Params> p12;
  std::optional<Parall34Params> p34;
  bool swapped = false;  // pairs[1] plays the role of the first family member
};

inline bool is_parallelogram_pair(const PairOfBodies& p) {
  return p.first.size() == 4 && p.second.size() == 4 && central_symmetry_center(p.first) &&
         central_symmetry_center(p.second);
}

inline std::optional<FamilyMatch> match_family12(const PairOfBodies& p, const PairOfBodies& q) {
  for (int role = 0; role < 2; ++role) {
    const PairOfBodies& x = role == 0 ? p : q;
    const PairOfBodies& y = role == 0 ? q : p;
    for (const PairOfBodies& r : representatives(x)) {
      if (!is_parallelogram_pair(r)) continue;
      const auto dk = edge_directions(r.first), dl = edge_directions(r.second);
      for (int sk = 0; sk < 2; ++sk)
        for (int sl = 0; sl < 2; ++sl) {
          const Point2 d1 = dk[sk].vec(), d2 = dk[1 - sk].vec(), d3 = dl[sl].vec(), d4 = dl[1 - sl].vec();
          const Rational base = cross(d1, d3);
          if (sgn(base) == 0) continue;
          // d = p·d1 + q·d3
          const Rational p2 = cross(d2, d3) / base, q2 = cross(d1, d2) / base;
          const Rational p4 = cross(d4, d3) / base, q4 = cross(d1, d4) / base;
          if (sgn(p2) == 0 || sgn(q2) == 0) continue;
          const Rational lambda = p2 / q2;  // T d3 = λ(0,1) makes T d2 ∥ (1,1)
          if (sgn(p4) == 0 || p4 != -q4 * lambda) continue;
          const Matrix2 t = Matrix2::from_columns(Point2(1, 0), Point2(Rational(0), lambda)) *
                            Matrix2::from_columns(d1, d3).inverse();
          const PairOfBodies tr = transform_pair(r, t);
          const Point2 ck = *central_symmetry_center(tr.first), cl = *central_symmetry_center(tr.second);
          Parall12Params prm;
          auto a = half_edge(tr.first, Point2(1, 0), 0), b = half_edge(tr.first, Point2(1, 1), 0);
          auto c = half_edge(tr.second, Point2(0, 1), 1), d = half_edge(tr.second, Point2(-1, 1), 0);
          if (!a || !b || !c || !d) continue;
          prm.alpha = *a;
          prm.beta = *b;
          prm.gamma = *c;
          prm.delta = *d;
          prm.y = cl - ck;
          const PairOfBodies f1 = make_pair(1, prm), f2 = make_pair(2, prm);
          if (trivial_associates(f1, transform_pair(x, t)) && trivial_associates(f2, transform_pair(y, t)))
            return FamilyMatch{t, prm, std::nullopt, role == 1};
        }
    }
  }
  return std::nullopt;
}

inline std::optional<FamilyMatch> match_family34(const PairOfBodies& p, const PairOfBodies& q) {
  for (int role = 0; role < 2; ++role) {
    const PairOfBodies& x = role == 0 ? p : q;
    const PairOfBodies& y = role == 0 ? q : p;
    for (const PairOfBodies& r : representatives(x)) {
      if (!is_parallelogram_pair(r)) continue;
      const auto dk = edge_directions(r.first), dl = edge_directions(r.second);
      for (int sk = 0; sk < 2; ++sk)
        for (int sl = 0; sl < 2; ++sl) {
          if (!same_line(dk[sk], dl[sl])) continue;
          const Point2 d1 = dk[sk].vec(), d2 = dk[1 - sk].vec(), d3 = dl[1 - sl].vec();
          const Matrix2 t = Matrix2::from_columns(d1, d2).inverse();  // d1 ↦ (1,0), d2 ↦ (0,1)
          const Point2 td3 = t(d3);
          if (sgn(td3.y) == 0) continue;
          const PairOfBodies tr = transform_pair(r, t);
          const Point2 ck = *central_symmetry_center(tr.first), cl = *central_symmetry_center(tr.second);
          Parall34Params prm;
          prm.m = td3.x / td3.y;
          auto a = half_edge(tr.first, Point2(1, 0), 0), b = half_edge(tr.first, Point2(0, 1), 1);
          auto c = half_edge(tr.second, Point2(1, 0), 0), d = half_edge(tr.second, Point2(prm.m, Rational(1)), 1);
          if (!a || !b || !c || !d) continue;
          prm.alpha = *a;
          prm.beta = *b;
          prm.gamma = *c;
          prm.delta = *d;
          prm.y = cl - ck;
          try {
            const PairOfBodies f3 = make_pair(3, prm), f4 = make_pair(4, prm);
            if (trivial_associates(f3, transform_pair(x, t)) && trivial_associates(f4, transform_pair(y, t)))
              return FamilyMatch{t, std::nullopt, prm, role == 1};
          } catch (const Error&) {
          }
        }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Recovers (K,L) up to trivial associates from oracle access, or both pairs
/// of an exceptional family.
///
/// Every support edge e_m = a_m·ê_m + b_m·ê_m splits between K and −L with
/// {a_m, b_m} known from the edge slopes; the cone pairs at the support
/// vertices restrict which body owns which piece. All assignments meeting
/// the cone constraints and closing both boundaries are built and checked
/// against every oracle value seen plus `probes` seeded points.
inline ReconstructionResult assemble(const PolygonCovOracle& oracle, const AssembleOptions& opt = {}) {
  detail::RecordingOracle rec(oracle);
  const PolygonCovOracle view = rec.view();
  const ConvexPolygon& s = oracle.support_hint;
  const size_t n = s.size();

  const std::vector<EdgeRecovery> edges = recover_edge_pairs(view);
  std::vector<ConeRecoveryResult> cones;
  for (size_t i = 0; i < n; ++i) cones.push_back(recover_vertex_cones(view, s.vertex(i)));

  std::vector<Direction> dir;
  for (size_t m = 0; m < n; ++m) dir.emplace_back(s.edge(m));

  // Per-edge options (a_m, b_m).
  std::vector<std::vector<std::pair<Rational, Rational>>> options(n);
  bool swap_fixed = false;
  for (size_t m = 0; m < n; ++m) {
    const auto& lp = edges[m].lengths;
    options[m].push_back({lp.first, lp.second});
    if (lp.first != lp.second) {
      if (swap_fixed) options[m].push_back({lp.second, lp.first});
      swap_fixed = true;  // the global swap is the trivial-associate freedom
    }
  }

  std::vector<Rational> a(n), b(n);
  // Local consistency at support vertex i from the pieces of edges i−1, i.
  auto vertex_ok = [&](size_t i) {
    const size_t prev = (i + n - 1) % n;
    for (const auto& sol : cones[i].solutions)
      for (int o = 0; o < 2; ++o) {
        const PlanarCone& ck = o == 0 ? sol.first : sol.second;
        const PlanarCone& cm = o == 0 ? sol.second : sol.first;
        auto fits = [&](const PlanarCone& c, const Rational& here, const Rational& before) {
          return (sgn(here) > 0) == (c.lower() == dir[i]) && (sgn(before) > 0) == (c.upper() == -dir[prev]);
        };
        if (fits(ck, a[i], a[prev]) && fits(cm, b[i], b[prev])) return true;
      }
    return false;
  };
  auto body_cone = [&](const std::vector<Rational>& len, size_t i) {
    size_t nx = i, pv = (i + n - 1) % n;
    while (sgn(len[nx]) == 0) nx = (nx + 1) % n;
    while (sgn(len[pv]) == 0) pv = (pv + n - 1) % n;
    return PlanarCone::pointed(dir[nx], -dir[pv]);
  };
  auto full_ok = [&] {
    auto count = [&](const std::vector<Rational>& len) {
      return std::count_if(len.begin(), len.end(), [](const Rational& v) { return sgn(v) > 0; });
    };
    if (count(a) < 3 || count(b) < 3) return false;
    Point2 close(0, 0);
    for (size_t m = 0; m < n; ++m) close = close + a[m] * dir[m].vec();
    if (!close.is_zero()) return false;
    for (size_t i = 0; i < n; ++i) {
      if (!vertex_ok(i)) return false;
      ConeSolution here(body_cone(a, i), body_cone(b, i));
      if (std::none_of(cones[i].solutions.begin(), cones[i].solutions.end(),
                       [&](const ConeSolution& c) { return c == here; }))
        return false;
    }
    return true;
  };

  std::vector<PairOfBodies> assemblies;
  std::function<void(size_t)> dfs = [&](size_t m) {
    if (m == n) {
      if (!full_ok()) return;
      std::vector<Point2> kv, mv;
      Point2 pk = s.vertex(0), pm(0, 0);
      for (size_t j = 0; j < n; ++j) {
        if (sgn(a[j]) > 0) {
          kv.push_back(pk);
          pk = pk + a[j] * dir[j].vec();
        }
        if (sgn(b[j]) > 0) {
          mv.push_back(pm);
          pm = pm + b[j] * dir[j].vec();
        }
      }
      try {
        ConvexPolygon k = validate_polygon(kv), mm = validate_polygon(mv);
        assemblies.push_back({k, reflect(mm)});
      } catch (const Error&) {
      }
      return;
    }
    for (const auto& [x, y] : options[m]) {
      a[m] = x;
      b[m] = y;
      if (m >= 1 && !vertex_ok(m)) continue;
      dfs(m + 1);
    }
  };
  dfs(0);

  // Verification probes: support vertices, edge midpoints and seeded points
  // of a box slightly larger than the support.
  std::vector<Point2> probes;
  for (size_t i = 0; i < n; ++i) {
    probes.push_back(s.vertex(i));
    probes.push_back(midpoint(s.vertex(i), s.vertex(i + 1)));
  }
  BoundingBox box = bounding_box(s);
  const Point2 pad = (box.hi - box.lo) / Rational(8);
  box.lo = box.lo - pad;
  box.hi = box.hi + pad;
  std::mt19937_64 rng(opt.seed);
  for (size_t i = 0; i < opt.probes; ++i) probes.push_back(detail::random_point_in(box, rng));
  for (const auto& p : probes) rec(p);
  const std::vector<std::pair<Point2, Rational>> observed(rec.seen().begin(), rec.seen().end());

  ReconstructionResult res;
  res.assemblies_tested = assemblies.size();
  std::vector<PairOfBodies> classes;
  for (const auto& cand : assemblies) {
    const CrossCovariogram g(cand.first, cand.second);
    bool ok = true;
    for (const auto& [p, v] : observed)
      if (g(p) != v) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (std::none_of(classes.begin(), classes.end(),
                     [&](const PairOfBodies& c) { return trivial_associates(c, cand).has_value(); }))
      classes.push_back(cand);
  }
  res.oracle_queries = rec.seen().size();

  if (classes.empty()) throw Error(ErrorKind::AssemblyFailed, "no assembly reproduces the oracle");
  if (classes.size() == 1) {
    res.pairs = classes;
    return res;
  }
  if (classes.size() == 2) {
    if (auto f = detail::match_family12(classes[0], classes[1])) {
      res.kind = ReconstructionResult::Kind::ExceptionalFamily12;
      res.params12 = f->p12;
      res.transform = f->t;
      res.pairs = f->swapped ? std::vector<PairOfBodies>{classes[1], classes[0]} : classes;
      return res;
    }
    if (auto f = detail::match_family34(classes[0], classes[1])) {
      res.kind = ReconstructionResult::Kind::ExceptionalFamily34;
      res.params34 = f->p34;
      res.transform = f->t;
      res.pairs = f->swapped ? std::vector<PairOfBodies>{classes[1], classes[0]} : classes;
      return res;
    }
  }
  throw Error(ErrorKind::AssemblyFailed,
              std::to_string(classes.size()) + " non-associated assemblies outside the classified families");
}

/// Support-edge labels relative to the first reconstructed pair: the K/L
/// naming is fixed only up to the global swap of trivial associates.
inline std::vector<EdgeLabel> decompose_support_edges(const PolygonCovOracle& oracle, const AssembleOptions& opt = {}) {
  const ReconstructionResult r = assemble(oracle, opt);
  return edge_labels(r.pairs[0].first, r.pairs[0].second);
}

}  // namespace crosscov
