#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace crosscov;

namespace {

ConvexPolygon square() { return validate_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
ConvexPolygon tri() { return validate_polygon({{0, 0}, {1, 0}, {0, 1}}); }

PairOfBodies minus_second(const PairOfBodies& p) { return {p.first, reflect(p.second)}; }

const EdgeRecovery& edge_with_normal(const std::vector<EdgeRecovery>& es, const Direction& u) {
  for (const auto& e : es)
    if (e.normal == u) return e;
  throw std::runtime_error("no edge with that normal");
}

// Cones of K and −L at the unique vertex decomposition of q.
ConeSolution forward_cones(const ConvexPolygon& k, const ConvexPolygon& l, const Point2& q) {
  const ConvexPolygon m = reflect(l);
  for (size_t i = 0; i < k.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j)
      if (k.vertex(i) + m.vertex(j) == q) return {vertex_support_cone(k, i), vertex_support_cone(m, j)};
  throw std::runtime_error("not a support vertex");
}

bool contains(const std::vector<ConeSolution>& v, const ConeSolution& s) {
  return std::any_of(v.begin(), v.end(), [&](const ConeSolution& t) { return t == s; });
}

void expect_reproduces(const PairOfBodies& p, const PolygonCovOracle& o, oracle::Rng& rng, int probes) {
  const CrossCovariogram g(p.first, p.second);
  const BoundingBox box = bounding_box(o.support_hint);
  for (int i = 0; i < probes; ++i) {
    const Point2 x = oracle::random_point(rng, 1, 9) + detail::random_point_in(box, rng);
    ASSERT_EQ(g(x), o.eval(x));
  }
}

Parall34Params draw34(oracle::Rng& rng) {
  for (;;) {
    Parall34Params p;
    p.alpha = oracle::positive_rational(rng);
    p.beta = oracle::positive_rational(rng);
    p.gamma = oracle::positive_rational(rng);
    p.delta = oracle::positive_rational(rng);
    if (oracle::uniform(rng, 0, 1)) p.m = oracle::random_rational(rng, -2, 2, 3);
    p.y = oracle::random_point(rng, 3, 4);
    try {
      check_parall34(p);
      return p;
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST(EdgePairs, Examples) {
  const auto sq = recover_edge_pairs(PolygonCovOracle::from_pair(square(), square()));
  EXPECT_EQ(edge_with_normal(sq, Direction(0, -1)).lengths, LengthPair(1, 1));
  EXPECT_EQ(sq.size(), 4u);
  const auto st = recover_edge_pairs(PolygonCovOracle::from_pair(square(), tri()));
  EXPECT_EQ(edge_with_normal(st, Direction(0, 1)).lengths, LengthPair(1, 1));
  EXPECT_EQ(edge_with_normal(st, Direction(-1, -1)).lengths, LengthPair(0, 1));
}

TEST(EdgePairs, AgreeWithForwardLengths) {
  oracle::Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    const auto k = oracle::random_polygon_in(rng, 3, 7, 8, 1 + i % 3), l = oracle::random_polygon_in(rng, 3, 7, 8, 2);
    for (const auto& e : recover_edge_pairs(PolygonCovOracle::from_pair(k, l))) {
      EXPECT_EQ(e.lengths, edge_length_pair(k, l, e.normal));
      EXPECT_EQ(e.lengths.first + e.lengths.second, e.total);
    }
  }
}

TEST(EdgePairs, NonQuadraticOracleRejected) {
  auto o = PolygonCovOracle::from_pair(square(), square());
  const auto base = o.eval;
  o.eval = [base](const Point2& x) -> Rational {
    const Rational v = base(x);
    return v * v * v;
  };
  try {
    recover_edge_pairs(o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OracleInconsistent);
  }
}

TEST(VertexCones, SquareCorner) {
  const auto r = recover_vertex_cones(PolygonCovOracle::from_pair(square(), square()), Point2(-1, -1));
  ASSERT_EQ(r.kind, ConeRecoveryResult::Kind::Unique);
  ASSERT_EQ(r.solutions.size(), 1u);
  const PlanarCone quarter = PlanarCone::spanned(Point2(1, 0), Point2(0, 1));
  EXPECT_EQ(r.solutions[0], ConeSolution(quarter, quarter));
  EXPECT_THROW(recover_vertex_cones(PolygonCovOracle::from_pair(square(), square()), Point2(0, -1)), Error);
}

TEST(VertexCones, FirstFamilyAllAmbiguous) {
  const auto p = make_pair(1, Parall12Params{});
  const auto o = PolygonCovOracle::from_pair(p.first, p.second);
  for (size_t i = 0; i < o.support_hint.size(); ++i) {
    const auto r = recover_vertex_cones(o, o.support_hint.vertex(i));
    EXPECT_EQ(r.kind, ConeRecoveryResult::Kind::Ambiguous) << i;
    EXPECT_TRUE(contains(r.solutions, forward_cones(p.first, p.second, o.support_hint.vertex(i))));
  }
}

TEST(VertexCones, MatchForwardCones) {
  oracle::Rng rng(52);
  for (int i = 0; i < 25; ++i) {
    const auto k = oracle::random_polygon_in(rng, 5, 5, 9, 2), l = oracle::random_polygon_in(rng, 3, 3, 9, 3);
    const auto o = PolygonCovOracle::from_pair(k, l);
    for (size_t v = 0; v < o.support_hint.size(); ++v) {
      const Point2 q = o.support_hint.vertex(v);
      const auto r = recover_vertex_cones(o, q);
      const ConeSolution expected = forward_cones(k, l, q);
      if (r.kind == ConeRecoveryResult::Kind::Unique) {
        ASSERT_EQ(r.solutions.size(), 1u);
        EXPECT_EQ(r.solutions[0], expected);
      } else {
        EXPECT_TRUE(contains(r.solutions, expected));
      }
    }
  }
}

TEST(Decompose, Examples) {
  for (const auto l : decompose_support_edges(PolygonCovOracle::from_pair(square(), square())))
    EXPECT_EQ(l, EdgeLabel::Parallel);

  const auto o = PolygonCovOracle::from_pair(square(), tri());
  const auto labels = decompose_support_edges(o);
  const auto fwd = edge_labels(square(), tri());
  auto swapped = fwd;
  for (auto& l : swapped)
    if (l != EdgeLabel::Parallel) l = l == EdgeLabel::KEdge ? EdgeLabel::LEdge : EdgeLabel::KEdge;
  EXPECT_TRUE(labels == fwd || labels == swapped);

  // The support edge with normal (1,1) comes from the hypotenuse only.
  const auto edges = recover_edge_pairs(o);
  for (size_t m = 0; m < edges.size(); ++m) {
    EXPECT_EQ(labels[m] == EdgeLabel::Parallel, sgn(edges[m].lengths.first) > 0);
    if (edges[m].normal == Direction(-1, -1)) {
      EXPECT_NE(labels[m], EdgeLabel::Parallel);
    }
  }
}

TEST(Assemble, SquaresUnique) {
  const auto o = PolygonCovOracle::from_pair(square(), square());
  const auto r = assemble(o);
  EXPECT_EQ(r.kind, ReconstructionResult::Kind::Unique);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_TRUE(trivial_associates(r.pairs[0], {square(), square()}).has_value());
  EXPECT_GT(r.oracle_queries, 0u);
}

TEST(Assemble, FirstFamily) {
  const PairOfBodies hidden = make_pair(1, Parall12Params{});
  const auto o = PolygonCovOracle::from_pair(hidden.first, hidden.second);
  const auto r = assemble(o);
  ASSERT_EQ(r.kind, ReconstructionResult::Kind::ExceptionalFamily12);
  ASSERT_EQ(r.pairs.size(), 2u);
  const PairOfBodies other = make_pair(2, Parall12Params{});
  const bool direct = trivial_associates(r.pairs[0], hidden) && trivial_associates(r.pairs[1], other);
  const bool flipped = trivial_associates(r.pairs[1], hidden) && trivial_associates(r.pairs[0], other);
  EXPECT_TRUE(direct || flipped);
  EXPECT_FALSE(trivial_associates(r.pairs[0], r.pairs[1]).has_value());
  EXPECT_FALSE(synisothetic(minus_second(r.pairs[0]), minus_second(r.pairs[1])));
  ASSERT_TRUE(r.params12.has_value());
  ASSERT_TRUE(r.transform.has_value());
  oracle::Rng rng(53);
  for (const auto& p : r.pairs) expect_reproduces(p, o, rng, 200);
}

TEST(Assemble, FirstFamilyRandomParameters) {
  oracle::Rng rng(54);
  for (int i = 0; i < 6; ++i) {
    Parall12Params prm;
    prm.alpha = oracle::positive_rational(rng);
    prm.beta = oracle::positive_rational(rng);
    prm.gamma = oracle::positive_rational(rng);
    prm.delta = oracle::positive_rational(rng);
    prm.y = oracle::random_point(rng, 3, 4);
    const Matrix2 t = oracle::random_linear_map(rng);
    const auto h = make_pair(1 + i % 2, prm);
    const PairOfBodies hidden{transform(h.first, t), transform(h.second, t)};
    const auto o = PolygonCovOracle::from_pair(hidden.first, hidden.second);
    const auto r = assemble(o, {200, static_cast<uint64_t>(i)});
    ASSERT_EQ(r.kind, ReconstructionResult::Kind::ExceptionalFamily12);
    EXPECT_TRUE(trivial_associates(r.pairs[0], hidden) || trivial_associates(r.pairs[1], hidden));
    EXPECT_FALSE(trivial_associates(r.pairs[0], r.pairs[1]).has_value());
    for (const auto& p : r.pairs) expect_reproduces(p, o, rng, 50);
  }
}

TEST(Assemble, SecondFamily) {
  oracle::Rng rng(55);
  for (int i = 0; i < 8; ++i) {
    const auto prm = draw34(rng);
    const auto h = make_pair(3 + i % 2, prm);
    const Matrix2 t = i < 4 ? Matrix2::identity() : oracle::random_linear_map(rng);
    const PairOfBodies hidden{transform(h.first, t), transform(h.second, t)};
    const auto o = PolygonCovOracle::from_pair(hidden.first, hidden.second);
    const auto r = assemble(o, {200, static_cast<uint64_t>(i)});
    ASSERT_EQ(r.kind, ReconstructionResult::Kind::ExceptionalFamily34) << i;
    ASSERT_EQ(r.pairs.size(), 2u);
    EXPECT_TRUE(trivial_associates(r.pairs[0], hidden) || trivial_associates(r.pairs[1], hidden));
    EXPECT_FALSE(trivial_associates(r.pairs[0], r.pairs[1]).has_value());
    EXPECT_TRUE(synisothetic(minus_second(r.pairs[0]), minus_second(r.pairs[1])));
    ASSERT_TRUE(r.params34.has_value());
    EXPECT_NO_THROW(check_parall34(*r.params34));
    for (const auto& p : r.pairs) expect_reproduces(p, o, rng, 50);
  }
}

TEST(Assemble, RandomRoundTrips) {
  oracle::Rng rng(56);
  for (int i = 0; i < 20; ++i) {
    const PairOfBodies hidden{oracle::random_polygon_in(rng, 3, 9, 10, 1 + i % 4), oracle::random_polygon_in(rng, 3, 9, 10, 3)};
    const auto o = PolygonCovOracle::from_pair(hidden.first, hidden.second);
    const auto r = assemble(o, {300, static_cast<uint64_t>(i)});
    ASSERT_EQ(r.kind, ReconstructionResult::Kind::Unique) << i;
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_TRUE(trivial_associates(r.pairs[0], hidden).has_value()) << i;
  }
}

TEST(Assemble, CorruptedOracleNeverAnswersSilently) {
  oracle::Rng rng(57);
  const PairOfBodies hidden{oracle::random_polygon_in(rng, 5, 5, 8, 2), oracle::random_polygon_in(rng, 4, 4, 8, 1)};
  const auto clean = PolygonCovOracle::from_pair(hidden.first, hidden.second);
  std::vector<Point2> queried;
  auto logging = clean;
  logging.eval = [&](const Point2& x) {
    queried.push_back(x);
    return clean.eval(x);
  };
  const AssembleOptions opt{200, 3};
  ASSERT_EQ(assemble(logging, opt).kind, ReconstructionResult::Kind::Unique);
  ASSERT_GE(queried.size(), 20u);
  for (int c = 0; c < 20; ++c) {
    const Point2 bad = queried[(c * 7919) % queried.size()];
    auto corrupt = clean;
    corrupt.eval = [&, bad](const Point2& x) -> Rational { return x == bad ? clean.eval(x) + make_rational(1, 1000) : clean.eval(x); };
    try {
      assemble(corrupt, opt);
      ADD_FAILURE() << "corruption " << c << " went unnoticed";
    } catch (const Error& e) {
      EXPECT_TRUE(e.kind() == ErrorKind::OracleInconsistent || e.kind() == ErrorKind::AssemblyFailed) << e.what();
    }
  }
}
