#include "kdq/graph.hpp"
#include "kdq/star.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace kdq;

namespace {
std::vector<std::string> keys_of(const std::vector<AdmissibleGraph>& gs) {
  std::vector<std::string> out;
  for (const auto& g : gs) out.push_back(g.key().text);
  return out;
}
}  // namespace

TEST(GraphKey, ParsesAndPrintsBitExactly) {
  for (auto key : {"2;2;g1,2;g1,g2", "1;2;g2,g1", "1;0;", "3;2;2,3;g1;1,g2", "2;1;;1,g1"}) {
    auto g = AdmissibleGraph::parse(key);
    EXPECT_EQ(g.key().text, key);
    EXPECT_EQ(canonical_key(g).text, key);
  }
  auto g = AdmissibleGraph::parse("2;2;g1,2;g1,g2");
  EXPECT_EQ(g.n(), 2u);
  EXPECT_EQ(g.m(), 2u);
  EXPECT_EQ(g.edge_count(), 4u);
  ASSERT_EQ(g.star(0).size(), 2u);
  EXPECT_EQ(g.star(0)[0], Vertex::ground(0));
  EXPECT_EQ(g.star(0)[1], Vertex::aerial(1));
}

TEST(GraphKey, RejectsInvalidGraphs) {
  EXPECT_THROW(AdmissibleGraph::parse("1;1;1"), GraphError);         // loop
  EXPECT_THROW(AdmissibleGraph::parse("1;2;g1,g1"), GraphError);     // repeated edge
  EXPECT_THROW(AdmissibleGraph::parse("1;2;g3"), GraphError);        // out of range
  EXPECT_THROW(AdmissibleGraph::parse("2;1;3;g1"), GraphError);      // out of range
  EXPECT_THROW(AdmissibleGraph::parse("1;2"), GraphError);           // missing star
  EXPECT_THROW(AdmissibleGraph::parse("1;2;g1;g2"), GraphError);     // too many stars
  EXPECT_THROW(AdmissibleGraph::parse("x;2;g1"), GraphError);
  EXPECT_THROW(AdmissibleGraph::parse("1;2;g0"), GraphError);
  EXPECT_THROW(AdmissibleGraph::parse("1;2;g1,,g2"), GraphError);
}

TEST(Enumerate, SmallCasesByHand) {
  EXPECT_EQ(keys_of(enumerate_graphs(1, 1, 1)), std::vector<std::string>{"1;1;g1"});
  EXPECT_EQ(keys_of(enumerate_graphs(1, 2, 2)), (std::vector<std::string>{"1;2;g1,g2", "1;2;g2,g1"}));
  EXPECT_TRUE(enumerate_graphs(1, 0, 1).empty());
  EXPECT_TRUE(enumerate_graphs(0, 2, 0).empty());
}

TEST(Enumerate, MatchesBruteForceForSmallSizes) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 0; m <= 2; ++m) {
      if (2 * n + m < 2) continue;
      const std::size_t E = 2 * n + m - 2;
      auto graphs = keys_of(enumerate_graphs(n, m, E));
      auto oracle = oracle::graphs_by_edge_lists(n, m, E);
      std::set<std::string> seen(graphs.begin(), graphs.end());
      EXPECT_EQ(seen.size(), graphs.size()) << "duplicates for n=" << n << " m=" << m;
      EXPECT_EQ(seen, oracle) << "n=" << n << " m=" << m;
    }
}

TEST(Enumerate, CountsFromFallingFactorials) {
  // Each first-type vertex picks an ordered list of distinct targets among the n+m−1 others;
  // the count is Σ over star sizes (s₁..s_n) summing to E of ∏ (n+m−1)!/(n+m−1−s_k)!.
  // For n=2, m=2, E=4 with 3 targets each: (1,3),(3,1),(2,2) → 3·6 + 6·3 + 6·6 = 72.
  EXPECT_EQ(enumerate_graphs(2, 2, 4).size(), 72u);
  // n=3, m=2, E=6, 4 targets each: sizes with s_k ≤ 4 summing to 6.
  std::size_t expected = 0;
  const std::size_t perms[5] = {1, 4, 12, 24, 24};
  for (std::size_t a = 0; a <= 4; ++a)
    for (std::size_t b = 0; b <= 4; ++b)
      if (a + b <= 6 && 6 - a - b <= 4) expected += perms[a] * perms[b] * perms[6 - a - b];
  EXPECT_EQ(enumerate_graphs(3, 2, 6).size(), expected);
}

TEST(Enumerate, SortedAndDeterministic) {
  auto a = enumerate_graphs(2, 2, 4), b = enumerate_graphs(2, 2, 4);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
}

TEST(GraphFilters, RestrictedMeansForestAmongFirstTypeVertices) {
  EXPECT_TRUE(is_restricted(AdmissibleGraph::parse("1;2;g1,g2")));
  EXPECT_TRUE(is_restricted(AdmissibleGraph::parse("2;2;2,g1;g1,g2")));
  // 1 → 2 and 2 → 1 form a cycle of the underlying undirected multigraph.
  EXPECT_FALSE(is_restricted(AdmissibleGraph::parse("2;2;2,g1;1,g2")));
  // An unoriented triangle.
  EXPECT_FALSE(is_restricted(AdmissibleGraph::parse("3;2;2,3;3,g1;g1,g2")));
  EXPECT_TRUE(is_restricted(AdmissibleGraph::parse("3;2;2,g1;3,g1;g1,g2")));
}

TEST(GraphFilters, LinearAndGroundReach) {
  EXPECT_TRUE(linear_nonzero(AdmissibleGraph::parse("2;2;2,g1;1,g2")));
  EXPECT_FALSE(linear_nonzero(AdmissibleGraph::parse("3;2;g1,g2;1,g1;1,g2")));
  EXPECT_TRUE(grounds_all_reached(AdmissibleGraph::parse("2;2;2,g1;1,g2")));
  EXPECT_FALSE(grounds_all_reached(AdmissibleGraph::parse("2;2;2,g1;1,g1")));
}

TEST(GraphFilters, StarFactorialFactor) {
  EXPECT_EQ(star_factorial_factor(AdmissibleGraph::parse("1;3;g1,g2,g3")), Rational(1, 6));
  EXPECT_EQ(star_factorial_factor(AdmissibleGraph::parse("2;2;2,g1;1,g2")), Rational(1, 4));
  EXPECT_EQ(star_factorial_factor(AdmissibleGraph::parse("1;0;")), Rational(1));
}

TEST(StarGraphs, OrderTwoCounts) {
  // n=2, m=2, both stars of size 2 over 3 targets: 6·6 = 36 graphs. A first-type vertex can
  // only be hit by the other one, so the linear filter removes nothing. Missing g1 (or g2)
  // leaves 2·2 = 4 graphs each: 36 − 8 = 28. Cyclic graphs (1→2 and 2→1): 4·4 = 16, of which
  // 8 miss a ground vertex, so 8 cyclic remain: 28 − 8 = 20 restricted.
  EXPECT_EQ(star_graphs(1, Variant::full).size(), 2u);
  EXPECT_EQ(star_graphs(1, Variant::restricted).size(), 2u);
  EXPECT_EQ(star_graphs(2, Variant::full).size(), 28u);
  EXPECT_EQ(star_graphs(2, Variant::restricted).size(), 20u);
}

TEST(StarGraphs, RestrictedIsSubsetOfFull) {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto full = keys_of(star_graphs(n, Variant::full));
    auto restricted = keys_of(star_graphs(n, Variant::restricted));
    std::set<std::string> rs(restricted.begin(), restricted.end());
    std::set<std::string> fs(full.begin(), full.end());
    for (const auto& k : restricted) EXPECT_TRUE(fs.count(k)) << k;
    for (const auto& k : full) EXPECT_EQ(is_restricted(AdmissibleGraph::parse(k)), rs.count(k) == 1) << k;
  }
}
