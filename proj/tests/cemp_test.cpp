#include <gtest/gtest.h>

#include "matchfame/cemp.hpp"
#include "matchfame/eval.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace matchfame {
namespace {

// Two edges: edge 0 with the given d values, edge 1 empty.
InconsistencyMap Manual(const std::vector<double>& d) {
  std::vector<CycleTerm> terms;
  for (std::size_t k = 0; k < d.size(); ++k) {
    terms.push_back({static_cast<Index>(k + 2), 1, 1, d[k]});
  }
  return InconsistencyMap({0, d.size(), d.size()}, std::move(terms), {d.size(), 3});
}

TEST(BetaSchedule, DefaultIsCappedGeometric) {
  const auto b = BetaSchedule::Default();
  EXPECT_DOUBLE_EQ(b(0), 1.0);
  EXPECT_DOUBLE_EQ(b(1), 1.2);
  EXPECT_DOUBLE_EQ(b(24), 40.0);
  EXPECT_FALSE(b.is_geometric());
  const auto g = BetaSchedule::Geometric(20.0, 1.1);
  EXPECT_TRUE(g.is_geometric());
  EXPECT_DOUBLE_EQ(g(2), 20.0 * 1.1 * 1.1);
}

TEST(CempConfig, Validates) {
  CempConfig cfg;
  cfg.schedule.beta0 = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.iterations = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(CempInit, Examples) {
  EXPECT_EQ(cemp_init(Manual({0, 0, 0})).values[0], 0.0);
  const auto s = cemp_init(Manual({0.2, 0.4}));
  EXPECT_DOUBLE_EQ(s.values[0], 0.3);
  EXPECT_EQ(s.unverifiable[0], 0);
  EXPECT_EQ(s.values[1], 1.0);
  EXPECT_EQ(s.unverifiable[1], 1);
}

TEST(CempIterate, ConstantInconsistencyIsFixed) {
  const auto d = Manual({0.35, 0.35, 0.35});
  CorruptionEstimates s{{0.1, 0.9}, {0, 0}};
  for (double beta : {0.0, 1.0, 50.0, 1e6}) {
    EXPECT_DOUBLE_EQ(cemp_iterate(d, s, beta).values[0], 0.35);
  }
}

TEST(CempIterate, ZeroBetaReducesToInit) {
  std::mt19937_64 rng(2);
  const auto g = oracle::RandomGraph(15, 0.6, 5, 0.8, rng);
  const auto d = all_inconsistencies(g);
  const auto init = cemp_init(d);
  CorruptionEstimates s = init;
  for (double& v : s.values) v = std::uniform_real_distribution<double>(0, 1)(rng);
  const auto next = cemp_iterate(d, s, 0.0);
  for (std::size_t e = 0; e < init.size(); ++e) {
    if (init.unverifiable[e]) continue;
    EXPECT_NEAR(next.values[e], init.values[e], 1e-15);
  }
  CempConfig cfg;
  cfg.schedule = {1e-300, 1.0, 1e-300};
  cfg.iterations = 5;
  const auto out = cemp_partial(d, cfg);
  for (std::size_t e = 0; e < init.size(); ++e) EXPECT_NEAR(out.values[e], init.values[e], 1e-14);
}

TEST(CempPartial, MatchesDenseRecurrence) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::mt19937_64 rng(seed);
    const auto g = oracle::RandomGraph(seed == 1 ? 5 : 20, 0.5, 6, 0.75, rng);
    CempConfig cfg;
    std::vector<double> betas;
    for (int t = 0; t < cfg.iterations; ++t) betas.push_back(cfg.schedule(t));
    const auto dense = oracle::DenseCemp(g, cfg.iterations, betas);
    std::vector<CorruptionEstimates> history;
    cemp_partial(g, cfg, &history);
    ASSERT_EQ(history.size(), dense.size());
    for (std::size_t t = 0; t < history.size(); ++t) {
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        EXPECT_NEAR(history[t].values[e], dense[t][e], 1e-12) << "t=" << t << " e=" << e;
      }
    }
  }
}

TEST(CempPartial, UcmInstanceMatchesDense) {
  SynthConfig sc;
  sc.n = 20;
  sc.m = 8;
  sc.model = UcmModel{0.3};
  sc.seed = 4;
  const auto inst = generate(sc);
  CempConfig cfg;
  std::vector<double> betas;
  for (int t = 0; t < cfg.iterations; ++t) betas.push_back(cfg.schedule(t));
  const auto dense = oracle::DenseCemp(inst.graph, cfg.iterations, betas).back();
  const auto s = cemp_partial(inst.graph, cfg);
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) EXPECT_NEAR(s.values[e], dense[e], 1e-12);
}

TEST(CempPartial, ConvexCombinationBounds) {
  std::mt19937_64 rng(6);
  const auto g = oracle::RandomGraph(18, 0.5, 5, 0.7, rng);
  const auto d = all_inconsistencies(g);
  std::vector<CorruptionEstimates> history;
  cemp_partial(d, CempConfig{}, &history);
  for (const auto& s : history) {
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (s.unverifiable[e]) {
        EXPECT_EQ(s.values[e], 1.0);
        continue;
      }
      double lo = 1.0, hi = 0.0;
      for (const CycleTerm& t : d.cycles(e)) {
        lo = std::min(lo, t.d);
        hi = std::max(hi, t.d);
      }
      EXPECT_GE(s.values[e], lo - 1e-15);
      EXPECT_LE(s.values[e], hi + 1e-15);
    }
  }
}

TEST(CempIterate, CycleOrderDoesNotMatter) {
  std::mt19937_64 rng(10);
  const auto g = oracle::RandomGraph(16, 0.6, 5, 0.8, rng);
  const auto d = all_inconsistencies(g);
  // Rebuild the map with every edge's cycle list reversed.
  std::vector<std::size_t> offsets{0};
  std::vector<CycleTerm> terms;
  std::vector<std::size_t> co;
  for (EdgeId e = 0; e < d.num_edges(); ++e) {
    const auto c = d.cycles(e);
    terms.insert(terms.end(), c.rbegin(), c.rend());
    offsets.push_back(terms.size());
    co.push_back(d.co_neighbor_count(e));
  }
  const InconsistencyMap reversed(offsets, terms, co);
  const auto s = cemp_init(d);
  const auto a = cemp_iterate(d, s, 3.0);
  const auto b = cemp_iterate(reversed, s, 3.0);
  for (EdgeId e = 0; e < d.num_edges(); ++e) EXPECT_NEAR(a.values[e], b.values[e], 1e-14);
}

TEST(CempPartial, DeterministicAcrossThreadsAndModes) {
  std::mt19937_64 rng(12);
  const auto g = oracle::RandomGraph(30, 0.5, 6, 0.8, rng);
  CempConfig one;
  CempConfig many;
  many.exec.threads = 4;
  EXPECT_EQ(cemp_partial(g, one).values, cemp_partial(g, many).values);
  CempConfig pairwise;
  pairwise.exec = {4, ReductionMode::kPairwise};
  const auto p1 = cemp_partial(g, pairwise).values;
  pairwise.exec.threads = 1;
  EXPECT_EQ(p1, cemp_partial(g, pairwise).values);
  const auto ordered = cemp_partial(g, one).values;
  for (std::size_t e = 0; e < p1.size(); ++e) EXPECT_NEAR(p1[e], ordered[e], 1e-12);
}

TEST(CempPartial, ConsistentGraphGivesZero) {
  const auto inst = fixtures::Clean(20, 6, 0.5, 0.8, 2);
  for (double v : cemp_partial(inst.graph, CempConfig{}).values) EXPECT_EQ(v, 0.0);
}

TEST(CempPartial, TheoremInstanceSeparates) {
  const auto inst = fixtures::TheoremInstance();
  CempConfig cfg;
  cfg.schedule = BetaSchedule::Geometric(20.0, 1.1);
  const auto s = cemp_partial(inst.graph, cfg);
  const double bound = 1.0 / (2.0 * 20.0 * std::pow(1.1, cfg.iterations));
  double max_good = 0.0;
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) {
    if (!inst.bad[e]) max_good = std::max(max_good, s.values[e]);
  }
  EXPECT_LE(max_good, bound);
  const auto star = corruption_levels_star(inst);
  const auto report = theorem_quantities(inst);
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) {
    if (inst.bad[e]) {
      EXPECT_GE(s.values[e], report.p_v / (3 * std::numbers::e) * (1 - report.lambda) *
                                 star.values[e]);
    }
  }
}

}  // namespace
}  // namespace matchfame
