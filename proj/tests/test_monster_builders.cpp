#include <gtest/gtest.h>

#include <map>
#include <set>

#include "monsterkit/monster_builders.hpp"

using namespace monsterkit;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

BuilderParams params(int n, Rational R = 64, unsigned depth = 3, TheoremMode mode = TheoremMode::TPP_P) {
  BuilderParams p;
  p.mark_count = n;
  p.window_radius = R;
  p.tree_depth = depth;
  p.mode = mode;
  return p;
}

Mat2 hyp() { return Mat2::diag(2, q(1, 2)); }

std::vector<Mat2> z_gens() { return {hyp(), hyp().inverse()}; }

std::set<Vec2> slit_holonomies(const SurfaceComplex& c) {
  std::set<Vec2> out;
  for (const auto& m : c.marks) out.insert(c.holonomy(m));
  return out;
}

std::map<int, int> order_histogram(const SurfaceComplex& c) {
  std::map<int, int> h;
  for (const auto& s : singularities(c)) ++h[s.order];
  return h;
}

int find_mark(const SurfaceComplex& c, const std::string& fam, int i, int piece = -1) {
  for (const auto& m : c.marks)
    if (m.family == fam && m.index == i && (piece < 0 || c.sheets[m.sheet].piece == piece)) return m.id;
  return -1;
}

}  // namespace

TEST(BuildSP, CoordinatesAndGluings) {
  auto c = build_S_P(params(4));
  std::vector<std::pair<Point, Point>> ls;
  for (const auto& m : c.marks)
    if (m.family == "L") ls.push_back({m.p, m.q});
  ASSERT_EQ(ls.size(), 4u);
  for (int i = 1; i <= 4; ++i) {
    EXPECT_EQ(ls[i - 1].first, Vec2(4 * i - 1, 0));
    EXPECT_EQ(ls[i - 1].second, Vec2(4 * i, 0));
  }
  ASSERT_EQ(c.gluings.size(), 2u);
  EXPECT_EQ(c.partner(find_mark(c, "L", 1)), find_mark(c, "L", 2));
  EXPECT_EQ(c.partner(find_mark(c, "L", 3)), find_mark(c, "L", 4));
  for (int i = 1; i <= 4; ++i) {
    int m = find_mark(c, "M", i);
    EXPECT_EQ(c.marks[m].p, Vec2(4 * i - 3, 0));
    EXPECT_FALSE(c.is_glued(m));
  }
}

TEST(BuildSP, SingularitiesAndHolonomies) {
  for (int n = 1; n <= 7; ++n) {
    auto c = build_S_P(params(n));
    auto h = order_histogram(c);
    int count = 2 * (n / 2);
    if (count == 0) EXPECT_TRUE(h.empty());
    else EXPECT_EQ(h, (std::map<int, int>{{2, count}}));
    for (const auto& v : slit_holonomies(c)) EXPECT_TRUE(v == Vec2(1, 0) || v == Vec2(-1, 0));
  }
}

TEST(BuildSP, WindowTooSmall) {
  EXPECT_THROW(build_S_P(params(8, 20)), Error);
  try {
    build_S_P(params(8, 20));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowTooSmall);
  }
}

TEST(BuildSP, InvariantUnderParabolics) {
  auto c = build_S_P(params(6));
  for (auto [t, s] : std::vector<std::pair<Rational, Rational>>{{3, 2}, {-1, 1}, {q(1, 2), 5}, {0, q(1, 3)}}) {
    Mat2 p(1, t, 0, s);
    auto img = normalize(transform_surface(c, p));
    auto r = isomorphic(normalize(c), img);
    EXPECT_TRUE(r.equal) << p << " " << r.witness;
  }
  Mat2 rot(0, -1, 1, 0);
  EXPECT_FALSE(isomorphic(normalize(c), normalize(transform_surface(c, rot))).equal);
}

TEST(BuildSPprime, CoordinatesAndSymmetry) {
  auto c = build_S_Pprime(params(2));
  int lm = find_mark(c, "L-", 1);
  EXPECT_EQ(c.marks[lm].p, Vec2(-3, 0));
  EXPECT_EQ(c.marks[lm].q, Vec2(-4, 0));
  EXPECT_EQ(c.marks[find_mark(c, "M-", 2)].p, Vec2(-5, 0));
  EXPECT_FALSE(c.is_glued(find_mark(c, "M+", 1)));
  EXPECT_FALSE(c.is_glued(find_mark(c, "M-", 1)));

  auto neg = normalize(transform_surface(c, Mat2(-1, 0, 0, -1)));
  std::map<std::string, std::string> swap{{"M+", "M-"}, {"M-", "M+"}, {"L+", "L-"}, {"L-", "L+"}};
  for (auto& m : neg.marks) m.family = swap.at(m.family);
  neg.meta = c.meta;
  auto r = isomorphic(c, neg);
  EXPECT_TRUE(r.equal) << r.witness;
}

TEST(BuildSPprime, DoublesSingularities) {
  for (int n : {2, 3, 6}) {
    auto a = singularities(build_S_P(params(n)));
    auto b = singularities(build_S_Pprime(params(n)));
    EXPECT_EQ(b.size(), 2 * a.size());
  }
}

TEST(BuildSPprime, NotIsomorphicToSP) {
  auto a = build_S_P(params(4));
  auto b = build_S_Pprime(params(4));
  EXPECT_FALSE(isomorphic(a, b).equal);
}

TEST(BuildGenusZero, FreeMarksOnly) {
  auto c = build_genus_zero_P(params(3));
  EXPECT_TRUE(singularities(c).empty());
  EXPECT_EQ(c.marks.size(), 3u);
  for (const auto& m : c.marks) EXPECT_FALSE(c.is_glued(m.id));
  for (const auto& v : slit_holonomies(c)) EXPECT_TRUE(v == Vec2(1, 0) || v == Vec2(-1, 0));
}

TEST(BuildBuffer, Coordinates) {
  auto c = build_buffer(Mat2::identity(), Mat2::identity(), params(2));
  ASSERT_EQ(c.sheets.size(), 2u);
  EXPECT_EQ(c.marks[find_mark(c, "Mc^1", 1)].p, Vec2(4, 0));
  EXPECT_EQ(c.marks[find_mark(c, "Mc^1", 2)].q, Vec2(9, 0));
  EXPECT_EQ(c.marks[find_mark(c, "L1^1", 1)].p, Vec2(6, 0));
  EXPECT_EQ(c.marks[find_mark(c, "L2^1", 1)].p, Vec2(0, 3));
  EXPECT_EQ(c.marks[find_mark(c, "L2^1", 2)].q, Vec2(1, 5));
  EXPECT_EQ(c.marks[find_mark(c, "hMc^-1", 2)].p, Vec2(0, 4));
  EXPECT_EQ(c.gluings.size(), 2u);
  auto h = order_histogram(c);
  EXPECT_EQ(h, (std::map<int, int>{{2, 4}}));
}

TEST(BuildBuffer, SeparationBound) {
  std::vector<Mat2> gs{Mat2::identity(), hyp(), hyp() * hyp() * hyp(), hyp().inverse() * hyp().inverse(),
                       Mat2(1, 1, 0, 1), Mat2(1, -3, 0, 1), Mat2(-1, 0, 0, -1)};
  for (const auto& g : gs) {
    auto c = build_buffer(hyp(), g, params(3));
    auto d = family_distance(c, "Mc^1", "hMc^-1");
    EXPECT_TRUE(d.at_least(q(1, 2))) << g << " " << d.approx();
  }
}

TEST(BuildBuffer, Preconditions) {
  EXPECT_THROW(build_buffer(Mat2(0, 1, 1, 0), Mat2::identity(), params(2)), Error);
  EXPECT_THROW(build_buffer(Mat2::identity(), Mat2(1, 0, 0, -1), params(2)), Error);
}

TEST(BuildDecorated, SingleMarkerPoint) {
  auto c = build_decorated(z_gens(), params(2));
  auto h = order_histogram(c);
  EXPECT_EQ(h[3], 1);
  for (const auto& [o, n] : h) EXPECT_TRUE(o == 2 || o == 3);
  int fold0 = -1;
  for (const auto& s : c.sheets)
    if (s.kind == SheetKind::BranchedCoverFold && s.fold_index == 0) fold0 = s.id;
  int t1 = find_mark(c, "t", 1), t2 = find_mark(c, "t", 2);
  EXPECT_EQ(c.marks[t1].sheet, fold0);
  EXPECT_EQ(c.marks[t2].sheet, fold0);
  EXPECT_EQ(c.partner(t1), t2);
  EXPECT_EQ(c.marks[t1].p, Vec2(0, 1));
  EXPECT_EQ(c.marks[t2].q, Vec2(0, -2));
  EXPECT_EQ(c.marks[find_mark(c, "Mt^0", 1)].sheet, fold0);
}

TEST(BuildDecorated, MarkerFrame) {
  auto c = build_decorated(z_gens(), params(2));
  auto sing = singularities(c);
  int marker = -1;
  for (const auto& s : sing)
    if (s.order == 3) marker = s.id;
  ASSERT_GE(marker, 0);
  auto sc = enumerate_saddle_connections(c, marker, 2);
  EXPECT_FALSE(sc.empty());
  std::set<Vec2> frame{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& x : sc) EXPECT_TRUE(frame.count(x.holonomy)) << x.holonomy;
}

TEST(BuildDecorated, GreedyRowsAreSeparated) {
  std::vector<Mat2> H{hyp(), hyp().inverse(), Mat2(1, 1, 0, 1), Mat2(1, -1, 0, 1), Mat2(-1, 0, 0, -1)};
  auto c = build_decorated(H, params(3));
  std::vector<int> plane;
  for (const auto& m : c.marks)
    if (m.sheet == 0) plane.push_back(m.id);
  for (std::size_t a = 0; a < plane.size(); ++a)
    for (std::size_t b = a + 1; b < plane.size(); ++b) {
      const auto& x = c.marks[plane[a]];
      const auto& y = c.marks[plane[b]];
      if (x.family.rfind("M^-", 0) == 0 || y.family.rfind("M^-", 0) == 0)
        EXPECT_GE(segment_dist2(x.segment(), y.segment()), 1) << c.describe(x.id) << " " << c.describe(y.id);
    }
  for (std::size_t j = 1; j <= 5; ++j) {
    auto a = c.marks[find_mark(c, "M^-" + std::to_string(j), 1)];
    EXPECT_GT(a.p.x, 0);
    EXPECT_LT(a.p.y, 0);
    Mat2 hi = H[j - 1].inverse();
    EXPECT_EQ(a.q - a.p, Vec2(hi.a, hi.c));
  }
}

TEST(BuildDecorated, PlacementFailureAndInverseClosure) {
  try {
    build_decorated(z_gens(), params(2, 10));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::PlacementFailure || e.code() == ErrorCode::WindowTooSmall);
  }
  try {
    build_decorated({hyp()}, params(2));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGroup);
  }
}

TEST(ElementaryPiece, SingletonIsOneMonster) {
  auto e = build_elementary_piece(EndsSpec::singleton(), {}, params(4, 64, 4));
  EXPECT_EQ(e.family.rays.size(), 1u);
  EXPECT_EQ(e.complex.sheets.size(), 1u);
  EXPECT_TRUE(e.cross_gluings.empty());
  EXPECT_EQ(e.free_families, std::vector<std::string>{"M"});
}

TEST(ElementaryPiece, CantorCrossGluingCount) {
  auto e = build_elementary_piece(EndsSpec::cantor(), z_gens(), params(4, 64, 3, TheoremMode::TAF));
  EXPECT_EQ(e.ray_sheet.size(), e.family.rays.size());
  std::map<Word, int> on;
  for (const auto& r : e.family.rays)
    for (const auto& v : r.vertices) ++on[v];
  std::size_t expected = 0;
  for (const auto& [v, k] : on) expected += k - 1;
  EXPECT_EQ(e.cross_gluings.size(), expected);
  for (const auto& [a, b] : e.cross_gluings) {
    EXPECT_NE(e.complex.sheets[e.complex.marks[a].sheet].piece, e.complex.sheets[e.complex.marks[b].sheet].piece);
    EXPECT_EQ(e.complex.marks[a].label, e.complex.marks[b].label);
  }
  EXPECT_EQ(order_histogram(e.complex)[3], 1);
}

TEST(ElementaryPiece, SpineCarriesDecoration) {
  auto p = params(4, 64, 5, TheoremMode::TAN);
  p.k = 1;
  auto e = build_elementary_piece(EndsSpec::omega_power(1, 1), z_gens(), p);
  ASSERT_TRUE(e.distinguished);
  std::vector<Word> spine{"0", "00", "000", "0000", "00000"};
  EXPECT_EQ(e.family.rays[*e.distinguished].vertices, spine);
  EXPECT_EQ(e.complex.sheets[e.marker_fold].piece, int(*e.distinguished));
  p.k = 2;
  EXPECT_THROW(build_elementary_piece(EndsSpec::omega_power(1, 1), z_gens(), p), Error);
}

TEST(ElementaryPiece, FreeFamilyLedger) {
  auto e = build_elementary_piece(EndsSpec::cantor_plus_discrete(EndsSpec::kInfinite), z_gens(),
                                  params(3, 64, 4, TheoremMode::TNN));
  std::set<std::string> unglued;
  for (const auto& m : e.complex.marks)
    if (!e.complex.is_glued(m.id)) unglued.insert(m.family);
  EXPECT_EQ(unglued, (std::set<std::string>{"hMc^-1", "hMc^-2", "M^-1", "M^-2"}));
  EXPECT_EQ(std::set<std::string>(e.free_families.begin(), e.free_families.end()), unglued);

  auto t = build_elementary_piece(EndsSpec::cantor(), {}, params(6, 64, 3, TheoremMode::TPP_P));
  EXPECT_EQ(t.free_families, std::vector<std::string>{"M"});
}

TEST(ElementaryPiece, TppInvariantUnderP) {
  for (auto mode : {TheoremMode::TPP_P, TheoremMode::GenusZero}) {
    auto e = build_elementary_piece(EndsSpec::cantor(), {}, params(4, 64, 3, mode));
    for (const auto& p : {Mat2(1, 2, 0, 1), Mat2(1, q(-1, 3), 0, 4), Mat2(1, 0, 0, q(1, 2))}) {
      auto r = isomorphic(normalize(e.complex), normalize(transform_surface(e.complex, p)));
      EXPECT_TRUE(r.equal) << p << " " << r.witness;
    }
  }
}

TEST(ElementaryPiece, TruncationCoherence) {
  auto small = build_elementary_piece(EndsSpec::omega_power(2, 1), {}, params(3, 32, 3));
  auto big = build_elementary_piece(EndsSpec::omega_power(2, 1), {}, params(5, 64, 3));
  std::set<std::tuple<int, std::string, int, Vec2, Vec2, std::string>> in_big;
  for (const auto& m : big.complex.marks)
    in_big.insert({big.complex.sheets[m.sheet].piece, m.family, m.index, m.p, m.q, m.label});
  for (const auto& m : small.complex.marks)
    EXPECT_TRUE(in_big.count({small.complex.sheets[m.sheet].piece, m.family, m.index, m.p, m.q, m.label}))
        << small.complex.describe(m.id);
}

TEST(ElementaryPiece, PprimeUsesCentralFamilies) {
  auto e = build_elementary_piece(EndsSpec::cantor(), {}, params(4, 64, 3, TheoremMode::TPP_Pprime));
  for (const auto& m : e.complex.marks) EXPECT_TRUE(m.family.back() == '+' || m.family.back() == '-');
  EXPECT_FALSE(e.cross_gluings.empty());
}
