#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "monsterkit/rational.hpp"

using namespace monsterkit;

TEST(Rational, ParseAndFormatRoundTrip) {
  for (const char* s : {"0", "7", "-3/4", "22/7", "-1"})
    EXPECT_EQ(format_rational(parse_rational(s)), s);
  EXPECT_EQ(format_rational(parse_rational("6/8")), "3/4");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1.5"), std::invalid_argument);
}

TEST(Mat2, InverseAndDeterminant) {
  Mat2 g(2, 1, 1, 1);
  EXPECT_EQ(g * g.inverse(), Mat2::identity());
  EXPECT_EQ((g * g).det(), g.det() * g.det());
  EXPECT_THROW(Mat2(1, 2, 2, 4).inverse(), std::domain_error);
}

TEST(Mat2, Contracting) {
  EXPECT_TRUE(is_contracting(Mat2::diag(Rational(1, 2), Rational(1, 2))));
  EXPECT_FALSE(is_contracting(Mat2::identity()));
  EXPECT_FALSE(is_contracting(Mat2::diag(2, Rational(1, 2))));
  EXPECT_FALSE(is_contracting(Mat2(1, 1, 0, 1)));
  EXPECT_TRUE(is_contracting(Mat2(Rational(1, 2), Rational(1, 4), 0, Rational(1, 2))));
  // shear with tiny diagonal still has a large singular value
  EXPECT_FALSE(is_contracting(Mat2(Rational(1, 10), 2, 0, Rational(1, 10))));
}

TEST(Mat2, ContractingMatchesSingularValueBound) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-6, 6);
  for (int i = 0; i < 500; ++i) {
    Mat2 g(Rational(num(rng), 4), Rational(num(rng), 4), Rational(num(rng), 4), Rational(num(rng), 4));
    double a = to_double(g.a), b = to_double(g.b), c = to_double(g.c), d = to_double(g.d);
    double t = a * a + b * b + c * c + d * d, det = a * d - b * c;
    double smax = std::sqrt((t + std::sqrt(std::max(0.0, t * t - 4 * det * det))) / 2);
    if (std::abs(smax - 1) < 1e-9) continue;
    EXPECT_EQ(is_contracting(g), smax < 1) << g;
  }
}

TEST(Geometry, SegmentPredicates) {
  Segment s{{0, 0}, {2, 0}}, t{{1, -1}, {1, 1}}, u{{3, 0}, {4, 0}};
  EXPECT_TRUE(segments_intersect(s, t));
  EXPECT_FALSE(segments_intersect(s, u));
  EXPECT_EQ(segment_dist2(s, u), 1);
  EXPECT_EQ(point_segment_dist2({1, 2}, s), 4);
  EXPECT_TRUE(sqrt_sum_at_least(1, 1, 4));
  EXPECT_FALSE(sqrt_sum_at_least(1, 1, Rational(41, 10)));
  EXPECT_TRUE(sqrt_sum_at_least(0, Rational(1, 2), Rational(1, 2)));
}
