#include <gtest/gtest.h>

#include "monsterkit/flat_kernel.hpp"

using namespace monsterkit;

namespace {

Rational q(int a, int b = 1) { return Rational(a, b); }

/// One plane with l1 = [3,4] and l2 = [7,8] on the x-axis, glued.
SurfaceComplex two_slits(Rational R = 10) {
  SurfaceComplex c(R);
  int s = c.add_plane(Mat2::identity(), "E");
  int a = c.add_mark(s, {3, 0}, {4, 0}, "l1", "L", 1);
  int b = c.add_mark(s, {7, 0}, {8, 0}, "l2", "L", 2);
  c.glue(a, b);
  return c;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Config;
}

}  // namespace

TEST(GlueMarks, CreatesTwoFourPiPoints) {
  auto c = two_slits();
  auto sing = singularities(c);
  ASSERT_EQ(sing.size(), 2u);
  for (const auto& s : sing) EXPECT_EQ(s.order, 2);
  EXPECT_EQ(sing[0].points, (std::vector<SurfacePoint>{{0, {3, 0}}, {0, {7, 0}}}));
}

TEST(GlueMarks, VerticalMarks) {
  SurfaceComplex c(10);
  int s = c.add_plane(Mat2::identity(), "E");
  int a = c.add_mark(s, {0, 1}, {0, 2}, "", "T", 1);
  int b = c.add_mark(s, {3, 1}, {3, 2}, "", "T", 2);
  c.glue(a, b);
  EXPECT_EQ(c.holonomy(a), Vec2(0, 1));
  EXPECT_EQ(c.holonomy(b), Vec2(0, 1));
  EXPECT_FALSE(c.gluings[0].reversed);
}

TEST(GlueMarks, Preconditions) {
  SurfaceComplex c(10);
  int s = c.add_plane(Mat2::identity(), "E");
  int l1 = c.add_mark(s, {3, 0}, {4, 0}, "", "L", 1);
  int m = c.add_mark(s, {0, 0}, {0, 1}, "", "M", 1);
  int longer = c.add_mark(s, {5, 2}, {7, 2}, "", "X", 1);
  int cross_l1 = c.add_mark(s, {7, 3}, {8, 3}, "", "X", 2);
  int over = c.add_mark(s, {7 / 2, 0}, {9 / 2, 0}, "", "X", 3);
  EXPECT_EQ(code_of([&] { glue_marks(c, l1, m); }), ErrorCode::NotParallel);
  EXPECT_EQ(code_of([&] { glue_marks(c, l1, longer); }), ErrorCode::UnequalLength);
  EXPECT_EQ(code_of([&] { glue_marks(c, l1, over); }), ErrorCode::Overlapping);
  c.glue(l1, cross_l1);
  EXPECT_EQ(code_of([&] { glue_marks(c, l1, over); }), ErrorCode::AlreadyGlued);
  int touching = c.add_mark(s, {4, 0}, {5, 0}, "", "X", 4);
  int far = c.add_mark(s, {-5, -5}, {-4, -5}, "", "X", 5);
  EXPECT_EQ(code_of([&] { glue_marks(c, touching, far); }), ErrorCode::Overlapping);
  EXPECT_EQ(code_of([&] { c.add_mark(s, {9, 0}, {11, 0}, "", "X", 6); }), ErrorCode::WindowTooSmall);
}

TEST(GlueMarks, AngleExcessGrowsByTwo) {
  SurfaceComplex c(40);
  int s = c.add_plane(Mat2::identity(), "E");
  std::vector<int> ids;
  for (int i = 0; i < 8; ++i) ids.push_back(c.add_mark(s, {4 * i, 0}, {4 * i + 1, 0}, "", "L", i));
  for (int i = 0; i < 8; i += 2) {
    int before = angle_excess(c);
    c.glue(ids[i], ids[i + 1]);
    EXPECT_EQ(angle_excess(c), before + 2);
  }
}

TEST(ConeAngle, Examples) {
  auto c = two_slits();
  EXPECT_EQ(cone_angle(c, {0, {3, 0}}), 2);
  EXPECT_EQ(cone_angle(c, {0, {8, 0}}), 2);
  EXPECT_EQ(cone_angle(c, {0, {1, 1}}), 1);

  SurfaceComplex d(10);
  int f0 = d.add_cover(Mat2::identity(), "Et");
  int t1 = d.add_mark(f0, {0, 1}, {0, 2}, "", "t1", 1);
  int t2 = d.add_mark(f0, {0, -1}, {0, -2}, "", "t2", 1);
  d.glue(t1, t2);
  EXPECT_TRUE(d.gluings[0].reversed);
  EXPECT_EQ(cone_angle(d, {f0, {0, 0}}), 3);
  EXPECT_EQ(cone_angle(d, {f0, {0, 1}}), 2);
  EXPECT_EQ(cone_angle(d, {f0, {0, -2}}), 2);
}

TEST(TraceRay, HorizontalRayAboveSlitsLeavesWindow) {
  auto c = two_slits(8);
  auto tr = trace_ray(c, {0, {0, 1}}, {1, 0}, 10);
  EXPECT_EQ(tr.status, TraceStatus::WindowExit);
  EXPECT_EQ(tr.crossings, 0);
  EXPECT_EQ(tr.end.x, Vec2(8, 1));
}

TEST(TraceRay, CrossesIntoPartnerSlit) {
  auto c = two_slits();
  auto tr = trace_ray(c, {0, {q(7, 2), 1}}, {0, -1}, 3);
  ASSERT_EQ(tr.crossings, 1);
  // by hand: reach (7/2, 0) on l1 at parameter 1, continue from (15/2, 0) downwards
  ASSERT_EQ(tr.steps.size(), 1u);
  EXPECT_EQ(tr.steps[0].to, Vec2(q(7, 2), 0));
  EXPECT_EQ(tr.end.x, Vec2(q(15, 2), 0));
  EXPECT_EQ(tr.t_end, 1);
  EXPECT_EQ(tr.status, TraceStatus::MaxLength);
}

TEST(TraceRay, HitsConePointExactly) {
  auto c = two_slits();
  auto tr = trace_ray(c, {0, {0, 1}}, {3, -1}, 4);
  EXPECT_EQ(tr.status, TraceStatus::HitSingularity);
  EXPECT_EQ(tr.end.x, Vec2(3, 0));
  EXPECT_EQ(tr.t_end, 1);
}

TEST(TraceRay, ReversibleAcrossGluing) {
  auto c = two_slits();
  Vec2 d{q(1, 3), -1};
  SurfacePoint start{0, {q(7, 2), q(1, 2)}};
  auto fwd = trace_ray(c, start, d, 3);
  ASSERT_EQ(fwd.crossings, 1);
  EXPECT_EQ(fwd.steps[0].to, Vec2(q(11, 3), 0));
  EXPECT_EQ(fwd.end.x, Vec2(q(23, 3), 0));
  Point after = fwd.end.x + q(1, 2) * d;
  EXPECT_EQ(after, Vec2(q(47, 6), -q(1, 2)));
  auto back = trace_ray(c, {0, after}, -d, 3);
  ASSERT_EQ(back.crossings, 1);
  EXPECT_EQ(back.end.x, Vec2(q(11, 3), 0));
  EXPECT_EQ(back.end.x + q(1, 2) * (-d), start.x);
  EXPECT_THROW(trace_ray(c, {0, {q(7, 2), 0}}, d, 1), Error);
}

TEST(TraceRay, BranchCutCyclesFolds) {
  SurfaceComplex c(4);
  int f0 = c.add_cover(Mat2::identity(), "Et");
  auto up = trace_ray(c, {f0, {1, 0}}, {0, 1}, 10);
  EXPECT_EQ(up.crossings, 1);
  EXPECT_EQ(c.sheets[up.end.sheet].fold_index, 1);
  auto right = trace_ray(c, {f0, {-1, q(1, 2)}}, {1, 0}, 10);
  EXPECT_EQ(c.sheets[right.end.sheet].fold_index, 2);
  auto centre = trace_ray(c, {f0 + 1, {-1, -1}}, {1, 1}, 10);
  EXPECT_EQ(centre.status, TraceStatus::HitSingularity);
  EXPECT_EQ(centre.end.x, Vec2(0, 0));
}

TEST(SaddleConnections, SlitEdgeHasUnitHolonomy) {
  auto c = two_slits();
  auto sing = singularities(c);
  auto sc = enumerate_saddle_connections(c, 0, 1);
  std::set<Vec2> hol;
  for (const auto& s : sc) hol.insert(s.holonomy);
  EXPECT_EQ(hol, (std::set<Vec2>{{1, 0}}));
  auto back = enumerate_saddle_connections(c, 1, 1);
  std::set<Vec2> hb;
  for (const auto& s : back) hb.insert(s.holonomy);
  EXPECT_EQ(hb, (std::set<Vec2>{{-1, 0}}));
}

TEST(SaddleConnections, SymmetricUnderReversal) {
  auto c = two_slits(20);
  auto sing = singularities(c);
  std::set<std::tuple<int, int, Vec2>> all;
  for (const auto& s : sing)
    for (const auto& x : enumerate_saddle_connections(c, s.id, 5)) all.insert({s.id, x.target, x.holonomy});
  EXPECT_FALSE(all.empty());
  for (const auto& [a, b, v] : all) EXPECT_TRUE(all.count({b, a, -v})) << a << "->" << b << " " << v;
}

TEST(SaddleConnections, WindowTooSmallIsReported) {
  auto c = two_slits(9);
  EXPECT_EQ(code_of([&] { enumerate_saddle_connections(c, 0, 8); }), ErrorCode::WindowTooSmall);
}

TEST(FamilyDistance, Examples) {
  SurfaceComplex c(10);
  int s = c.add_plane(Mat2::identity(), "E");
  c.add_mark(s, {0, 0}, {1, 0}, "", "A", 1);
  c.add_mark(s, {2, 1}, {3, 1}, "", "B", 1);
  auto d = family_distance(c, "A", "B");
  EXPECT_TRUE(d.at_least(1));
  EXPECT_FALSE(d.at_least(Rational(21, 10)));
  EXPECT_FALSE(family_distance(c, "A", "A").at_least(Rational(1, 100)));
  EXPECT_EQ(code_of([&] { family_distance(c, "A", "none"); }), ErrorCode::EmptyFamily);
}

TEST(TransformSurface, ActionAndHolonomy) {
  auto c = two_slits();
  EXPECT_TRUE(isomorphic(transform_surface(c, Mat2::identity()), c).equal);
  auto t = transform_surface(c, Mat2::diag(2, q(1, 2)));
  EXPECT_EQ(t.holonomy(0), Vec2(2, 0));
  EXPECT_EQ(code_of([&] { transform_surface(c, Mat2(1, 0, 0, -1)); }), ErrorCode::NonPositiveDeterminant);
  Mat2 g(1, 2, 0, 3), h(2, 0, 1, 1);
  auto lhs = transform_surface(transform_surface(c, g), h);
  auto rhs = transform_surface(c, h * g);
  EXPECT_TRUE(isomorphic(lhs, rhs).equal);
  EXPECT_FALSE(isomorphic(transform_surface(c, g), c).equal);
  // singularities are intrinsic
  EXPECT_EQ(singularities(lhs).size(), singularities(c).size());
}

TEST(Isomorphic, TranslationAndWitness) {
  auto c = two_slits();
  SurfaceComplex shifted(10);
  int s = shifted.add_plane(Mat2::identity(), "E");
  int a = shifted.add_mark(s, {1, 2}, {2, 2}, "l1", "L", 1);
  int b = shifted.add_mark(s, {5, 2}, {6, 2}, "l2", "L", 2);
  shifted.glue(a, b);
  EXPECT_TRUE(isomorphic(c, shifted).equal);
  SurfaceComplex other(10);
  int t = other.add_plane(Mat2::identity(), "E");
  other.add_mark(t, {3, 0}, {4, 0}, "l1", "L", 1);
  other.add_mark(t, {7, 0}, {8, 0}, "l2", "L", 2);
  auto r = isomorphic(c, other);
  EXPECT_FALSE(r.equal);
  EXPECT_FALSE(r.witness.empty());
}
