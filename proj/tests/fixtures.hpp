#pragma once

#include "matchfame/synth.hpp"

namespace fixtures {

using namespace matchfame;

inline SynthInstance Clean(Index n, Index m, double p, double p_include, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.p = p;
  cfg.p_include = p_include;
  cfg.model = UcmModel{0.0};
  cfg.seed = seed;
  return generate(cfg);
}

// Complete graph on 60 nodes, m = 3, every keypoint kept, exactly one edge
// replaced by a wrong full permutation.
inline SynthInstance TheoremInstance(std::uint64_t seed = 1) {
  const SynthInstance clean = Clean(60, 3, 1.0, 1.0, seed);
  const PartialPermutation shift = three_cycle_identity(3, {0, 1, 2});
  const EdgeId e = clean.graph.find_edge(7, 31);
  const std::pair<EdgeId, PartialPermutation> bad{e, compose(clean.graph.block(e), shift)};
  return with_replaced_blocks(clean, std::span(&bad, 1));
}

}  // namespace fixtures
