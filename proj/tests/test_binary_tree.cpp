#include <gtest/gtest.h>

#include "monsterkit/binary_tree.hpp"
#include "tree_oracle.hpp"

using namespace monsterkit;

namespace {

std::vector<oracle::Path> paths_of(const RayFamily& f) {
  std::vector<oracle::Path> out;
  for (const auto& r : f.rays) out.push_back(r.vertices);
  return out;
}

std::vector<EndsSpec> supported_specs() {
  return {EndsSpec::cantor(), EndsSpec::omega_power(1), EndsSpec::omega_power(2), EndsSpec::omega_power(3),
          EndsSpec::cantor_plus_discrete(), EndsSpec::singleton(), EndsSpec::finite(3),
          EndsSpec::omega_power(2, 2)};
}

}  // namespace

TEST(BuildTree, FullTreeForCantor) {
  auto t = build_tree(EndsSpec::cantor(), 3);
  EXPECT_EQ(t.vertices.size(), 14u);
  EXPECT_EQ(t.edges.size(), 13u);
  EXPECT_EQ(t.edges.front(), std::make_pair(Word("0"), Word("1")));
}

TEST(BuildTree, SingletonIsOnePathPlusRootEdge) {
  auto t = build_tree(EndsSpec::singleton(), 4);
  EXPECT_EQ(t.vertices, (std::set<Word>{"0", "00", "000", "0000", "1"}));
}

TEST(BuildTree, OmegaPlusOneHasOneSpine) {
  auto t = build_tree(EndsSpec::omega_power(1), 5);
  // branching vertices must form one descending chain; all other vertices
  // have at most one child, so the branch set accumulates at a single point
  std::vector<Word> branching;
  for (const auto& v : t.vertices)
    if (t.children(v).size() == 2) branching.push_back(v);
  ASSERT_EQ(branching.size(), 4u);
  std::sort(branching.begin(), branching.end(), shortlex_less);
  for (std::size_t i = 1; i < branching.size(); ++i)
    EXPECT_EQ(branching[i].substr(0, i), branching[i - 1]);
  EXPECT_EQ(t.prefix.frontier.size(), 6u);  // spine plus one side ray per branching, root included
}

TEST(DecomposePaths, FullTreeMatchesClosedForm) {
  for (unsigned d = 1; d <= 6; ++d) {
    auto f = decompose_paths(build_tree(EndsSpec::cantor(), d));
    auto got = paths_of(f);
    EXPECT_EQ(std::set<oracle::Path>(got.begin(), got.end()), oracle::full_tree_family(d)) << d;
  }
}

TEST(DecomposePaths, SingletonIsOneRay) {
  auto f = decompose_paths(build_tree(EndsSpec::singleton(), 5));
  ASSERT_EQ(f.rays.size(), 1u);
  EXPECT_EQ(f.rays[0].vertices, (std::vector<Word>{"1", "0", "00", "000", "0000", "00000"}));
  EXPECT_EQ(f.rays[0].turns(), "^0000");
}

TEST(DecomposePaths, OmegaPlusOneSideBranches) {
  auto t = build_tree(EndsSpec::omega_power(1), 6);
  auto f = decompose_paths(t);
  std::size_t side = 0;
  for (const auto& v : t.vertices) side += t.children(v).size() == 2;
  EXPECT_EQ(f.rays.size(), side + 1 + 1);  // the root vertex (1) starts a side branch of its own
  EXPECT_LE(oracle::max_pairwise_overlap(paths_of(f)), 1u);
}

TEST(DecomposePaths, CoverageAndOverlapUpToDepth12) {
  for (const auto& s : supported_specs())
    for (unsigned d = 1; d <= 12; ++d) {
      auto t = build_tree(s, d);
      auto f = decompose_paths(t);
      auto p = paths_of(f);
      EXPECT_EQ(oracle::covered(p), t.vertices) << s.str() << " " << d;
      EXPECT_LE(oracle::max_pairwise_overlap(p), 1u) << s.str() << " " << d;
      for (const auto& r : p) EXPECT_TRUE(oracle::is_tree_path(r));
    }
}

TEST(DecomposePaths, CoherentUnderDeepening) {
  for (const auto& s : supported_specs()) {
    auto small = decompose_paths(build_tree(s, 5));
    auto big = decompose_paths(build_tree(s, 9));
    for (const auto& r : small.rays) {
      bool found = false;
      for (const auto& q : big.rays)
        if (q.origin == r.origin && std::equal(r.vertices.begin(), r.vertices.end(), q.vertices.begin()))
          found = true;
      EXPECT_TRUE(found) << s.str() << " ray from " << r.origin;
    }
  }
}

TEST(DecomposePaths, CountableRaysMatchVisibleEnds) {
  for (const auto& s : {EndsSpec::omega_power(1), EndsSpec::omega_power(2), EndsSpec::finite(4)})
    for (unsigned d = 2; d <= 10; ++d) {
      auto t = build_tree(s, d);
      auto f = decompose_paths(t);
      std::size_t ends = t.prefix.frontier.size();
      std::size_t rays_reaching = 0;
      for (const auto& r : f.rays) rays_reaching += r.last().size() == d;
      EXPECT_EQ(rays_reaching, ends) << s.str() << " " << d;
    }
}

TEST(SelectPath, Examples) {
  auto spine = select_distinguished_path(decompose_paths(build_tree(EndsSpec::omega_power(1), 6)), PathMode::CB_top);
  EXPECT_EQ(spine.last(), "000000");
  EXPECT_EQ(spine.origin, "0");

  auto bnd = select_distinguished_path(decompose_paths(build_tree(EndsSpec::cantor_plus_discrete(), 6)),
                                       PathMode::BoundaryOfU);
  EXPECT_EQ(bnd.last(), "000000");

  auto first = select_distinguished_path(decompose_paths(build_tree(EndsSpec::cantor(), 4)), PathMode::First);
  EXPECT_EQ(first.vertices, (std::vector<Word>{"0", "1", "11", "111", "1111"}));
}

TEST(SelectPath, CbTopStableUnderDeepening) {
  for (unsigned k = 1; k <= 3; ++k) {
    auto s = EndsSpec::omega_power(k);
    auto r5 = select_distinguished_path(decompose_paths(build_tree(s, 5)), PathMode::CB_top);
    for (unsigned d = 6; d <= 11; ++d) {
      auto r = select_distinguished_path(decompose_paths(build_tree(s, d)), PathMode::CB_top);
      EXPECT_EQ(r.origin, r5.origin);
      EXPECT_TRUE(std::equal(r5.vertices.begin(), r5.vertices.end(), r.vertices.begin()));
    }
  }
}

TEST(SelectPath, ModeMismatch) {
  auto cantor = decompose_paths(build_tree(EndsSpec::cantor(), 3));
  auto ord = decompose_paths(build_tree(EndsSpec::omega_power(1, 2), 3));
  for (auto [f, m] : {std::pair{&cantor, PathMode::CB_top}, std::pair{&cantor, PathMode::BoundaryOfU},
                      std::pair{&ord, PathMode::CB_top}, std::pair{&ord, PathMode::BoundaryOfU}}) {
    try {
      select_distinguished_path(*f, m);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ModeSpecMismatch);
    }
  }
}

TEST(TreeEnds, RoundTrips) {
  EXPECT_EQ(tree_ends(build_tree(EndsSpec::cantor(), 4)), EndsSpec::cantor());
  EXPECT_EQ(canonical_class(tree_ends(build_tree(EndsSpec::omega_power(2), 6))).str(), "CountableRank(2,1)");
  EXPECT_EQ(tree_ends(build_tree(EndsSpec::singleton(), 3)), EndsSpec::singleton());
  EXPECT_EQ(tree_ends(build_tree(EndsSpec::cantor_plus_discrete(), 5)), EndsSpec::cantor_plus_discrete());
}

TEST(DescendingPaths, OnePerFrontierVertex) {
  auto t = build_tree(EndsSpec::cantor(), 3);
  auto d = descending_paths(t);
  EXPECT_EQ(d.size(), 8u);
  for (const auto& p : d)
    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_EQ(p[i].substr(0, i), p[i - 1]);
}
