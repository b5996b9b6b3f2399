#include <gtest/gtest.h>

#include "matchfame/spectral.hpp"
#include "fixtures.hpp"

namespace matchfame {
namespace {

TEST(Spectral, RecoversCleanInstance) {
  const auto inst = fixtures::Clean(10, 5, 1.0, 1.0, 3);
  const auto r = spectral_baseline(inst.graph, 5);
  EXPECT_TRUE(r.converged);
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) {
    EXPECT_EQ(r.matches[e], inst.graph.block(e)) << "edge " << e;
  }
}

TEST(Spectral, OrthonormalDescending) {
  SynthConfig cfg;
  cfg.n = 12;
  cfg.m = 6;
  cfg.model = UcmModel{0.3};
  cfg.seed = 5;
  const auto inst = generate(cfg);
  const auto r = spectral_baseline(inst.graph, 6);
  const Eigen::MatrixXd gram = r.eigenvectors.transpose() * r.eigenvectors;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(),
            1e-6);
  for (Eigen::Index k = 1; k < r.ritz_values.size(); ++k) {
    EXPECT_GE(r.ritz_values[k - 1], r.ritz_values[k] - 1e-12);
  }
  for (const auto& block : r.assignment.blocks) {
    EXPECT_LE(block.nnz(), static_cast<std::size_t>(block.rows()));
  }
}

TEST(Spectral, EdgeCases) {
  const auto inst = fixtures::Clean(4, 3, 1.0, 1.0, 1);
  EXPECT_THROW(spectral_baseline(inst.graph, 0), std::invalid_argument);
  const ViewingGraph empty({0, 0}, {{Edge{0, 1}, PartialPermutation(0, 0)}});
  const auto r = spectral_baseline(empty, 2);
  EXPECT_EQ(r.matches.size(), 1u);
  EXPECT_TRUE(r.matches[0].empty());
}

TEST(Spectral, SeededDeterminism) {
  const auto inst = fixtures::Clean(8, 4, 0.8, 0.8, 2);
  const auto a = spectral_baseline(inst.graph, 4);
  const auto b = spectral_baseline(inst.graph, 4);
  EXPECT_EQ(a.assignment, b.assignment);
}

}  // namespace
}  // namespace matchfame
