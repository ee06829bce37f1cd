#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace crosscov;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

PairOfBodies minus_second(const PairOfBodies& p) { return {p.first, reflect(p.second)}; }

ConvexPolygon hull_of_segment_sum(const Point2& a, const Point2& b, const Point2& shift = Point2(0, 0)) {
  std::vector<Point2> pts;
  for (const Point2& u : {a, -a})
    for (const Point2& v : {b, -b}) pts.push_back(shift + u + v);
  return validate_polygon(oracle::gift_wrap(pts));
}

Parall12Params draw12(oracle::Rng& rng) {
  Parall12Params p;
  p.alpha = oracle::positive_rational(rng);
  p.beta = oracle::positive_rational(rng);
  p.gamma = oracle::positive_rational(rng);
  p.delta = oracle::positive_rational(rng);
  p.y = oracle::random_point(rng, 3, 4);
  return p;
}

Parall34Params draw34(oracle::Rng& rng, bool zero_m) {
  for (;;) {
    Parall34Params p;
    p.alpha = oracle::positive_rational(rng);
    p.beta = oracle::positive_rational(rng);
    p.gamma = oracle::positive_rational(rng);
    p.delta = oracle::positive_rational(rng);
    p.m = zero_m ? Rational(0) : oracle::random_rational(rng, -2, 2, 3);
    p.y = oracle::random_point(rng, 3, 4);
    try {
      check_parall34(p);
      return p;
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST(MakePair, FirstFamilyExamples) {
  const auto p = make_pair(1, Parall12Params{});
  EXPECT_EQ(p.first, hull_of_segment_sum(Point2(1, 0), Point2(1, 1)));
  EXPECT_EQ(p.second, hull_of_segment_sum(Point2(0, 1), Point2(-1, 1)));
  const auto p2 = make_pair(2, Parall12Params{});
  EXPECT_EQ(p2.first, hull_of_segment_sum(Point2(1, 0), Point2(-1, 1)));
  EXPECT_EQ(p2.second, hull_of_segment_sum(Point2(1, 1), Point2(0, 1)));
  Parall12Params bad;
  bad.gamma = 0;
  EXPECT_THROW(make_pair(1, bad), Error);
  EXPECT_THROW(make_pair(3, Parall12Params{}), Error);
}

TEST(MakePair, SecondFamilyExamples) {
  // The stated example has beta = delta with m = 0, which the admissibility
  // rule excludes; the generator still builds the rectangles.
  Parall34Params p;
  p.alpha = 1;
  p.beta = 1;
  p.gamma = 2;
  p.delta = 1;
  const auto r = family34_bodies(3, p);
  EXPECT_EQ(r.first, validate_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}));
  EXPECT_EQ(r.second, validate_polygon({{-2, -1}, {2, -1}, {2, 1}, {-2, 1}}));
  try {
    make_pair(3, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadParams);
  }
  Parall34Params eq;
  eq.alpha = eq.gamma = 1;
  try {
    make_pair(4, eq);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadParams);
  }
  Parall34Params sheared;
  sheared.beta = sheared.delta = 1;
  sheared.m = q(1, 2);
  EXPECT_NO_THROW(make_pair(4, sheared));
}

TEST(MakePair, AreaProductIdentity) {
  oracle::Rng rng(41);
  for (int i = 0; i < 25; ++i) {
    const auto p = draw12(rng);
    const auto a = make_pair(1, p), b = make_pair(2, p);
    EXPECT_EQ(area(a.first) * area(a.second), area(b.first) * area(b.second));
  }
}

TEST(Verify, PaperExamples) {
  EXPECT_TRUE(verify_equal_covariogram(make_pair(1, Parall12Params{}), make_pair(2, Parall12Params{}), 1000, 7).equal);
  EXPECT_TRUE(verify_equal_covariogram(make_pair(3, Parall34Params{}), make_pair(4, Parall34Params{}), 1000, 7).equal);
  Parall12Params bumped;
  bumped.alpha = 2;
  const auto r = verify_equal_covariogram(make_pair(1, Parall12Params{}), make_pair(1, bumped), 100, 7);
  ASSERT_FALSE(r.equal);
  ASSERT_TRUE(r.witness.has_value());
  const auto a = make_pair(1, Parall12Params{}), b = make_pair(1, bumped);
  EXPECT_EQ(r.first_value, eval(a.first, a.second, *r.witness).value);
  EXPECT_EQ(r.second_value, eval(b.first, b.second, *r.witness).value);
  EXPECT_NE(r.first_value, r.second_value);
}

TEST(Verify, DetectsSmallPerturbationInsideACell) {
  // Same support, different bodies: only interior probes can tell.
  const auto k = validate_polygon({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const auto l1 = validate_polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  const auto l2 = validate_polygon({{0, 0}, {2, 0}, {2, 2}, {1, 3}, {0, 2}});
  const auto r = verify_equal_covariogram({k, l1}, {k, l2}, 0, 1);
  EXPECT_FALSE(r.equal);
}

TEST(FamilyInvariants, FirstFamily) {
  oracle::Rng rng(42);
  for (int i = 0; i < 8; ++i) {
    const auto p = draw12(rng);
    const auto a = make_pair(1, p), b = make_pair(2, p);
    EXPECT_TRUE(verify_equal_covariogram(a, b, 300, i).equal);
    EXPECT_FALSE(trivial_associates(a, b).has_value());
    EXPECT_FALSE(synisothetic(minus_second(a), minus_second(b)));
  }
}

TEST(FamilyInvariants, SecondFamily) {
  oracle::Rng rng(43);
  for (int i = 0; i < 8; ++i) {
    const auto p = draw34(rng, i % 2 == 0);
    const auto a = make_pair(3, p), b = make_pair(4, p);
    EXPECT_TRUE(verify_equal_covariogram(a, b, 300, i).equal);
    EXPECT_FALSE(trivial_associates(a, b).has_value());
    EXPECT_TRUE(synisothetic(minus_second(a), minus_second(b)));
  }
}

TEST(FamilyInvariants, AffineStability) {
  oracle::Rng rng(44);
  auto map = [](const PairOfBodies& p, const Matrix2& t) { return PairOfBodies{transform(p.first, t), transform(p.second, t)}; };
  for (int i = 0; i < 4; ++i) {
    const Matrix2 t = oracle::random_linear_map(rng);
    const auto p12 = draw12(rng);
    const auto a = map(make_pair(1, p12), t), b = map(make_pair(2, p12), t);
    EXPECT_TRUE(verify_equal_covariogram(a, b, 200, i).equal);
    EXPECT_FALSE(trivial_associates(a, b).has_value());
    EXPECT_FALSE(synisothetic(minus_second(a), minus_second(b)));
    const auto p34 = draw34(rng, false);
    const auto c = map(make_pair(3, p34), t), d = map(make_pair(4, p34), t);
    EXPECT_TRUE(verify_equal_covariogram(c, d, 200, i).equal);
    EXPECT_FALSE(trivial_associates(c, d).has_value());
    EXPECT_TRUE(synisothetic(minus_second(c), minus_second(d)));
  }
}
