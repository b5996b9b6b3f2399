#include <gtest/gtest.h>

#include <cmath>

#include "matchfame/synth.hpp"
#include "oracles.hpp"

namespace matchfame {
namespace {

SynthConfig Config(Index n, Index m, CorruptionModel model, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.model = model;
  cfg.seed = seed;
  return cfg;
}

void ExpectWellFormed(const SynthInstance& inst) {
  const ViewingGraph& g = inst.graph;
  ASSERT_EQ(inst.truth.size(), static_cast<std::size_t>(g.num_nodes()));
  for (Index i = 0; i < g.num_nodes(); ++i) {
    EXPECT_EQ(inst.truth[i].rows(), g.keypoint_count(i));
    EXPECT_EQ(inst.truth[i].nnz(), static_cast<std::size_t>(g.keypoint_count(i)));
    EXPECT_EQ(inst.keypoints[i].size(), static_cast<std::size_t>(g.keypoint_count(i)));
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    EXPECT_EQ(inst.truth_blocks[e],
              compose(inst.truth[edge.i], transpose(inst.truth[edge.j])));
    EXPECT_TRUE(oracle::IsPartialPermutation(oracle::Dense(g.block(e))));
    EXPECT_EQ(inst.bad[e] != 0, g.block(e) != inst.truth_blocks[e]);
  }
}

TEST(Generate, NoCorruptionMeansNoBadEdges) {
  const auto inst = generate(Config(30, 10, UcmModel{0.0}, 1));
  ExpectWellFormed(inst);
  EXPECT_EQ(inst.num_bad(), 0u);
  EXPECT_GT(inst.graph.num_edges(), 0);
}

TEST(Generate, FullInclusionGivesFullPermutations) {
  auto cfg = Config(12, 7, UcmModel{0.5}, 2);
  cfg.p_include = 1.0;
  const auto inst = generate(cfg);
  ExpectWellFormed(inst);
  for (Index i = 0; i < inst.graph.num_nodes(); ++i) EXPECT_EQ(inst.graph.keypoint_count(i), 7);
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) EXPECT_EQ(inst.graph.block(e).nnz(), 7u);
}

TEST(Generate, Deterministic) {
  const auto cfg = Config(25, 8, LbcModel{4}, 99);
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_EQ(a.bad, b.bad);
  ASSERT_EQ(a.graph.num_edges(), b.graph.num_edges());
  for (EdgeId e = 0; e < a.graph.num_edges(); ++e) EXPECT_EQ(a.graph.block(e), b.graph.block(e));
  const auto c = generate(Config(25, 8, LbcModel{4}, 100));
  EXPECT_NE(a.truth, c.truth);
}

TEST(Generate, UcmBadFractionMatchesRate) {
  std::size_t bad = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = generate(Config(20, 20, UcmModel{0.6}, seed));
    bad += inst.num_bad();
    total += static_cast<std::size_t>(inst.graph.num_edges());
  }
  const double rate = static_cast<double>(bad) / static_cast<double>(total);
  const double half_width = 2.576 * std::sqrt(0.6 * 0.4 / static_cast<double>(total));
  EXPECT_NEAR(rate, 0.6, half_width);
}

TEST(Generate, LocalCorruptionTouchesSeeds) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (const CorruptionModel& model : {CorruptionModel{LbcModel{5}}, CorruptionModel{LacModel{5}}}) {
      const auto inst = generate(Config(40, 10, model, seed));
      ExpectWellFormed(inst);
      EXPECT_EQ(inst.seed_nodes.size(), 5u);
      EXPECT_GT(inst.num_bad(), 0u);
      for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) {
        if (!inst.bad[e]) continue;
        const Edge& edge = inst.graph.edge(e);
        const bool touches = std::find(inst.seed_nodes.begin(), inst.seed_nodes.end(), edge.i) !=
                                 inst.seed_nodes.end() ||
                             std::find(inst.seed_nodes.begin(), inst.seed_nodes.end(), edge.j) !=
                                 inst.seed_nodes.end();
        EXPECT_TRUE(touches);
      }
    }
  }
}

TEST(Generate, RejectsBadConfig) {
  auto cfg = Config(10, 5, UcmModel{1.5}, 0);
  EXPECT_THROW(generate(cfg), std::invalid_argument);
  cfg = Config(10, 5, LbcModel{11}, 0);
  EXPECT_THROW(generate(cfg), std::invalid_argument);
  cfg = Config(10, 5, UcmModel{0.1}, 0);
  cfg.p = 0.0;
  EXPECT_THROW(generate(cfg), DataError);  // never connected
}

TEST(Corruption, UcmWithoutSelectionIsIdentity) {
  const auto clean = generate(Config(10, 5, UcmModel{0.0}, 3));
  std::vector<PartialPermutation> blocks;
  std::vector<Edge> edges(clean.graph.edges().begin(), clean.graph.edges().end());
  for (EdgeId e = 0; e < clean.graph.num_edges(); ++e) blocks.push_back(PartialPermutation::Identity(5, 5));
  const auto out = corrupt_ucm(blocks, edges, 5, 0.0, 3);
  EXPECT_EQ(out.blocks, blocks);
  for (auto s : out.selected) EXPECT_EQ(s, 0);
}

TEST(Corruption, ThreeCycleMovesExactlyThreeColumns) {
  const auto q = three_cycle_identity(5, {4, 0, 2});
  const Eigen::MatrixXd diff = oracle::Dense(q) - Eigen::MatrixXd::Identity(5, 5);
  int moved = 0;
  for (Index c = 0; c < 5; ++c) moved += diff.col(c).cwiseAbs().sum() > 0 ? 1 : 0;
  EXPECT_EQ(moved, 3);
  EXPECT_EQ(q.nnz(), 5u);
}

TEST(Corruption, LbcRejectionFrequency) {
  // Single edge (0, 1) selected with probability 1. The candidate
  // P_0 P_1^T is kept only when it shares at most one match with the truth,
  // so an output sharing two or more must come from the uniform fallback.
  const Index m = 20;
  const std::vector<Edge> edges{{0, 1}};
  const std::vector<PartialPermutation> truth{PartialPermutation::Identity(m, m)};
  int high = 0;
  const int draws = 1000;
  for (int s = 0; s < draws; ++s) {
    const auto out = corrupt_lbc(truth, edges, 2, m, LbcModel{1, 1.0}, static_cast<std::uint64_t>(s));
    ASSERT_EQ(out.selected[0], 1);
    ASSERT_EQ(out.blocks[0].nnz(), static_cast<std::size_t>(m));
    const double overlap = oracle::Dense(out.blocks[0]).cwiseProduct(oracle::Dense(truth[0])).sum();
    high += overlap > 1.0 ? 1 : 0;
  }
  // P(random permutation of 20 has >= 2 fixed points) =: r. The output has
  // overlap > 1 only if the candidate was rejected and the fallback also has
  // >= 2 fixed points: probability r^2.
  double p0 = 0.0, fact = 1.0;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) fact *= k;
    p0 += (k % 2 ? -1.0 : 1.0) / fact;
  }
  double p1 = 0.0;
  fact = 1.0;
  for (int k = 0; k <= m - 1; ++k) {
    if (k > 0) fact *= k;
    p1 += (k % 2 ? -1.0 : 1.0) / fact;
  }
  const double r = 1.0 - p0 - p1;
  const double expected = r * r;
  const double sd = std::sqrt(expected * (1 - expected) / draws);
  EXPECT_NEAR(static_cast<double>(high) / draws, expected, 3.3 * sd);
}

TEST(Corruption, LacBlocksAreNearIdentityTimesTruth) {
  auto cfg = Config(30, 8, LacModel{1, 1.0}, 4);
  cfg.p_include = 1.0;
  const auto inst = generate(cfg);
  ASSERT_EQ(inst.seed_nodes.size(), 1u);
  const Index c = inst.seed_nodes[0];
  const ViewingGraph& g = inst.graph;
  int checked = 0;
  for (const Neighbor& nb : g.neighbors(c)) {
    ASSERT_TRUE(inst.bad[nb.edge]);
    // X_cj = Q P_j^T, so X_cj P_j = Q moves exactly three rows off the diagonal.
    const auto q = compose(g.oriented_block(c, nb.node), inst.truth[nb.node]);
    const Eigen::MatrixXd diff = oracle::Dense(q) - Eigen::MatrixXd::Identity(8, 8);
    int moved = 0;
    for (Index r = 0; r < 8; ++r) moved += diff.row(r).cwiseAbs().sum() > 0 ? 1 : 0;
    EXPECT_EQ(moved, 3);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

}  // namespace
}  // namespace matchfame
