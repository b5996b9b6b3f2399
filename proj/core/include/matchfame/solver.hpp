#pragma once

#include <cstdint>
#include <vector>

#include "matchfame/cemp.hpp"
#include "matchfame/parallel.hpp"
#include "matchfame/partial_permutation.hpp"
#include "matchfame/viewing_graph.hpp"

namespace matchfame {

enum class FillMode {
  kZeroColumn,  // one entry per all-zero column of the stacked assignment
  kZeroRow,     // one entry per all-zero row (denser, for noisy data)
};

enum class ProjectionKind {
  kGreedy,     // thresholded greedy matching, any shape
  kHungarian,  // exact assignment, square blocks only (full permutations)
};

struct SolverConfig {
  double gamma = 4.0;        // PPM edge weight exp(-gamma * s_hat)
  int max_iterations = 60;   // t0
  double mhat_factor = 2.0;  // m_hat = factor * ceil(M / n)
  double theta = 0.0;        // projection threshold (entries must exceed it)
  FillMode fill = FillMode::kZeroColumn;
  bool normalize_weights = true;
  ProjectionKind projection = ProjectionKind::kGreedy;
  std::uint64_t seed = 0;
  ExecutionOptions exec;

  void validate() const;
};

// Image-to-universe matches: blocks[i] is P_i with shape m_i x universe_size.
struct AbsoluteAssignment {
  Index universe_size = 0;
  std::vector<PartialPermutation> blocks;

  friend bool operator==(const AbsoluteAssignment&,
                         const AbsoluteAssignment&) = default;
};

// ceil(factor * ceil(M / n)).
Index estimate_universe_size(const ViewingGraph& g, double factor);

// w_ij = exp(-gamma * s_hat_ij).
EdgeWeights ppm_weights(const CorruptionEstimates& s_hat, double gamma);

// MST on the weights s_hat, identity-like root block, propagation
// P_child = Proj(X_child,parent P_parent) from the root outwards, then the
// configured zero-column / zero-row fill. The fill is driven by a counter RNG
// seeded with cfg.seed: a zero column goes to the lowest empty row of a
// uniformly drawn node that still has one; a zero row takes a uniformly drawn
// column unused within its block.
AbsoluteAssignment mst_initialize(const ViewingGraph& g,
                                  const CorruptionEstimates& s_hat,
                                  const SolverConfig& cfg, Index universe_size);
AbsoluteAssignment mst_initialize(const ViewingGraph& g,
                                  const CorruptionEstimates& s_hat,
                                  const SolverConfig& cfg);

// sum_j w~_ij X_ij P_j for one node, w~ normalized over N_i when
// cfg.normalize_weights. Zero-weight neighbors contribute nothing.
SparseNonnegMatrix ppm_accumulate(const ViewingGraph& g, const EdgeWeights& w,
                                  const AbsoluteAssignment& p, Index node,
                                  const SolverConfig& cfg);

// One Jacobi-style weighted PPM sweep: every node is recomputed from the old
// state. Nodes without neighbors (or with all-zero weights) keep their block.
AbsoluteAssignment weighted_ppm_step(const ViewingGraph& g, const EdgeWeights& w,
                                     const AbsoluteAssignment& p,
                                     const SolverConfig& cfg);

struct PpmRun {
  AbsoluteAssignment assignment;
  int iterations = 0;
  bool converged = false;  // stopped because P^(t) == P^(t-1)
};

// Iterates weighted_ppm_step until t0 sweeps or no change.
PpmRun run_weighted_ppm(const ViewingGraph& g, const EdgeWeights& w,
                        AbsoluteAssignment init, const SolverConfig& cfg);

// Unweighted PPM: w_ij = 1 with mean normalization, same stopping rule.
PpmRun ppm_baseline(const ViewingGraph& g, AbsoluteAssignment init,
                    const SolverConfig& cfg);

// Z_ij = P_i P_j^T for every edge, in edge order.
std::vector<PartialPermutation> relative_matches(const ViewingGraph& g,
                                                 const AbsoluteAssignment& p);

struct PhaseTimes {
  double cemp_ms = 0.0;
  double init_ms = 0.0;
  double ppm_ms = 0.0;
};

struct SolverResult {
  CorruptionEstimates s_hat;
  AbsoluteAssignment assignment;
  std::vector<PartialPermutation> matches;  // Z per edge
  int iterations = 0;
  bool converged = false;
  PhaseTimes times;
};

// CEMP-Partial, MST initialization, weighted PPM.
SolverResult match_fame(const ViewingGraph& g, const CempConfig& cemp_cfg,
                        const SolverConfig& cfg);

// Same pipeline with CEMP skipped (all s_hat = 0, so uniform weights and a
// lexicographic spanning tree) and unweighted PPM.
SolverResult ppm_pipeline(const ViewingGraph& g, const SolverConfig& cfg);

}  // namespace matchfame
