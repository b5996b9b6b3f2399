#include <gtest/gtest.h>

#include <numeric>

#include "matchfame/viewing_graph.hpp"
#include "oracles.hpp"

namespace matchfame {
namespace {

ViewingGraph Complete(Index n, Index m) {
  std::vector<std::pair<Edge, PartialPermutation>> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      edges.emplace_back(Edge{i, j}, PartialPermutation::Identity(m, m));
    }
  }
  return ViewingGraph(std::vector<Index>(static_cast<std::size_t>(n), m), std::move(edges));
}

ViewingGraph FromEdges(Index n, const std::vector<Edge>& list, Index m = 1) {
  std::vector<std::pair<Edge, PartialPermutation>> edges;
  for (const Edge& e : list) edges.emplace_back(e, PartialPermutation::Identity(m, m));
  return ViewingGraph(std::vector<Index>(static_cast<std::size_t>(n), m), std::move(edges));
}

TEST(ViewingGraph, CanonicalizesOrientation) {
  const auto block = PartialPermutation::FromEntries(3, 2, {{2, 0}});
  ViewingGraph g({2, 3}, {{Edge{1, 0}, block}});
  ASSERT_EQ(g.num_edges(), 1);
  EXPECT_EQ(g.edge(0), (Edge{0, 1}));
  EXPECT_EQ(g.block(0), transpose(block));
  EXPECT_EQ(g.oriented_block(1, 0), block);
  EXPECT_EQ(g.match_map(1, 0)[2], 0);
  EXPECT_EQ(g.match_map(0, 1)[0], 2);
  EXPECT_EQ(g.total_keypoints(), 5);
}

TEST(ViewingGraph, RejectsBadInput) {
  const auto id = PartialPermutation::Identity(2, 2);
  EXPECT_THROW(ViewingGraph({2, 2}, {{Edge{0, 0}, id}}), DataError);
  EXPECT_THROW(ViewingGraph({2, 2}, {{Edge{0, 1}, id}, {Edge{1, 0}, id}}), DataError);
  EXPECT_THROW(ViewingGraph({2, 3}, {{Edge{0, 1}, id}}), DataError);
  EXPECT_THROW(ViewingGraph({2, 2}, {{Edge{0, 2}, id}}), DataError);
}

TEST(CoNeighborhood, Examples) {
  EXPECT_EQ(co_neighborhood(Complete(3, 1), 0, 1), std::vector<Index>{2});
  EXPECT_TRUE(co_neighborhood(FromEdges(3, {{0, 1}, {1, 2}}), 0, 1).empty());
  EXPECT_EQ(co_neighborhood(Complete(5, 1), 1, 3), (std::vector<Index>{0, 2, 4}));
  EXPECT_THROW(co_neighborhood(FromEdges(3, {{0, 1}}), 0, 2), DataError);
}

TEST(CoNeighborhood, Symmetric) {
  std::mt19937_64 rng(3);
  const auto g = oracle::RandomGraph(12, 0.5, 3, 0.8, rng);
  for (const Edge& e : g.edges()) {
    EXPECT_EQ(co_neighborhood(g, e.i, e.j), co_neighborhood(g, e.j, e.i));
  }
}

TEST(MinimumSpanningTree, Triangle) {
  const auto g = Complete(3, 1);
  const auto tree = minimum_spanning_tree(g, {0.1, 0.9, 0.2});  // 01, 02, 12
  EXPECT_EQ(tree.edges, (std::vector<EdgeId>{0, 2}));
  EXPECT_EQ(tree.root, 0);
  EXPECT_DOUBLE_EQ(tree.total_weight, 0.30000000000000004);
  ASSERT_EQ(tree.arcs.size(), 2u);
  EXPECT_EQ(tree.arcs[0], (std::pair<Index, Index>{0, 1}));
  EXPECT_EQ(tree.arcs[1], (std::pair<Index, Index>{1, 2}));
}

TEST(MinimumSpanningTree, RootPrefersLargerKeypointCount) {
  ViewingGraph g({1, 3}, {{Edge{0, 1}, PartialPermutation(1, 3)}});
  EXPECT_EQ(minimum_spanning_tree(g, {0.0}).root, 1);
}

TEST(MinimumSpanningTree, TreeInputIsItself) {
  const auto g = FromEdges(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
  const auto tree = minimum_spanning_tree(g, {0.5, 0.1, 0.4, 0.2});
  auto edges = tree.edges;
  std::sort(edges.begin(), edges.end());
  EXPECT_EQ(edges, (std::vector<EdgeId>{0, 1, 2, 3}));
}

TEST(MinimumSpanningTree, DisconnectedNamesComponents) {
  const auto g = FromEdges(4, {{0, 1}, {2, 3}});
  try {
    minimum_spanning_tree(g, {0.0, 0.0});
    FAIL();
  } catch (const DataError& ex) {
    EXPECT_NE(std::string(ex.what()).find("{0,1} {2,3}"), std::string::npos);
  }
}

TEST(MinimumSpanningTree, TiesBrokenLexicographically) {
  const auto g = Complete(4, 1);
  const auto tree = minimum_spanning_tree(g, EdgeWeights(6, 1.0));
  // Kruskal over (0,1) (0,2) (0,3) ... accepts the star at 0.
  EXPECT_EQ(tree.edges, (std::vector<EdgeId>{0, 1, 2}));
}

// Exhaustive minimum over all (n-1)-edge subsets that form a spanning tree.
double BruteForceMst(const ViewingGraph& g, const EdgeWeights& w) {
  const Index n = g.num_nodes();
  const auto m = static_cast<std::size_t>(g.num_edges());
  std::vector<char> pick(m, 0);
  std::fill(pick.end() - (n - 1), pick.end(), 1);
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Index x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    bool acyclic = true;
    double total = 0.0;
    for (std::size_t e = 0; e < m && acyclic; ++e) {
      if (!pick[e]) continue;
      const Index a = find(g.edge(static_cast<EdgeId>(e)).i);
      const Index b = find(g.edge(static_cast<EdgeId>(e)).j);
      if (a == b) acyclic = false;
      parent[a] = b;
      total += w[e];
    }
    if (acyclic) best = std::min(best, total);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

TEST(MinimumSpanningTree, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    // Path plus random chords keeps the edge count small enough to enumerate.
    std::vector<Edge> list;
    for (Index i = 0; i + 1 < 8; ++i) list.push_back({i, i + 1});
    std::bernoulli_distribution coin(0.25);
    for (Index i = 0; i < 8; ++i) {
      for (Index j = i + 2; j < 8; ++j) {
        if (coin(rng)) list.push_back({i, j});
      }
    }
    const auto g = FromEdges(8, list);
    EdgeWeights w(static_cast<std::size_t>(g.num_edges()));
    for (double& x : w) x = std::round(weight(rng) * 8.0) / 8.0;  // force ties
    const auto tree = minimum_spanning_tree(g, w);
    EXPECT_EQ(tree.edges.size(), 7u);
    EXPECT_DOUBLE_EQ(tree.total_weight, BruteForceMst(g, w));

    // Star at node 0 is a spanning tree whenever node 0 touches everyone; the
    // weaker check is against every star that exists.
    for (Index c = 0; c < 8; ++c) {
      if (static_cast<Index>(g.neighbors(c).size()) != 7) continue;
      double star = 0.0;
      for (const Neighbor& nb : g.neighbors(c)) star += w[nb.edge];
      EXPECT_LE(tree.total_weight, star + 1e-12);
    }
  }
}

TEST(MinimumSpanningTree, InvariantUnderInputEdgeOrder) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::vector<std::pair<Edge, double>> list;
  for (Index i = 0; i < 9; ++i) {
    for (Index j = i + 1; j < 9; ++j) list.push_back({{i, j}, std::round(weight(rng) * 4) / 4});
  }
  std::vector<std::pair<Index, Index>> reference;
  for (int shuffle = 0; shuffle < 5; ++shuffle) {
    std::shuffle(list.begin(), list.end(), rng);
    std::vector<std::pair<Edge, PartialPermutation>> edges;
    for (const auto& [e, w] : list) {
      // Alternate orientation as well.
      const Edge oriented = shuffle % 2 ? Edge{e.j, e.i} : e;
      edges.emplace_back(oriented, PartialPermutation::Identity(1, 1));
    }
    ViewingGraph g(std::vector<Index>(9, 1), std::move(edges));
    EdgeWeights w(static_cast<std::size_t>(g.num_edges()));
    for (const auto& [e, x] : list) w[g.find_edge(e.i, e.j)] = x;
    const auto arcs = minimum_spanning_tree(g, w).arcs;
    if (shuffle == 0) reference = arcs;
    EXPECT_EQ(arcs, reference);
  }
}

TEST(MinimumSpanningTree, RejectsBadWeights) {
  const auto g = Complete(3, 1);
  EXPECT_THROW(minimum_spanning_tree(g, {0.1, -1.0, 0.2}), DataError);
  EXPECT_THROW(minimum_spanning_tree(g, {0.1, 0.2}), DataError);
}

}  // namespace
}  // namespace matchfame
