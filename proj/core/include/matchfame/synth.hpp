#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "matchfame/partial_permutation.hpp"
#include "matchfame/rng.hpp"
#include "matchfame/viewing_graph.hpp"

namespace matchfame {

// Uniform corruption: each edge independently with probability q gets a
// uniformly random full permutation.
struct UcmModel {
  double q = 0.0;
};

// Local biased corruption around n_c seed nodes. Bad blocks are
// P^c_i P^c_j^T for random node permutations P^c (cycle consistent among
// themselves), rejected in favor of a uniform permutation when they agree
// with the truth in more than one position.
struct LbcModel {
  Index seeds = 0;  // n_c
  double edge_prob = 0.9;
};

// Local adversarial corruption: a selected edge (c, j) around seed c gets
// Q P_j^T where Q is the identity with 3 columns cycled.
struct LacModel {
  Index seeds = 0;  // n_c
  double edge_prob = 0.6;
};

using CorruptionModel = std::variant<UcmModel, LbcModel, LacModel>;

std::string model_name(const CorruptionModel& model);

struct SynthConfig {
  Index n = 100;
  Index m = 20;
  double p = 0.5;          // edge probability of G(n, p)
  double p_include = 0.8;  // keypoint inclusion probability
  CorruptionModel model = UcmModel{};
  std::uint64_t seed = 0;

  void validate() const;
};

// Full-size (m x m) relative blocks for every edge, plus the nodes used as
// corruption seeds (LBC/LAC only).
struct FullBlocks {
  std::vector<PartialPermutation> blocks;
  std::vector<std::uint8_t> selected;
  std::vector<Index> seed_nodes;
};

// A synthetic or hand-built instance with ground truth.
struct SynthInstance {
  ViewingGraph graph;
  Index universe_size = 0;                   // m
  std::vector<PartialPermutation> truth;     // P*_i, m_i x m
  std::vector<PartialPermutation> truth_blocks;  // X*_ij = P*_i P*_j^T per edge
  std::vector<std::uint8_t> bad;             // 1 iff X_ij != X*_ij
  std::vector<std::vector<Index>> keypoints; // h(I_i), universe index per keypoint
  std::vector<Index> seed_nodes;

  std::size_t num_bad() const;
  // h: universe index of keypoint r of image i.
  Index universe_of(Index i, Index r) const;
};

// Instance from explicit ground truth and observed blocks. Labels are derived
// by comparing each block with P*_i P*_j^T.
SynthInstance make_instance(Index universe_size,
                            std::vector<PartialPermutation> truth,
                            std::vector<std::pair<Edge, PartialPermutation>> observed);

// Copy of `inst` with some observed blocks replaced (edge ids of inst.graph,
// blocks in canonical i < j orientation); labels are recomputed.
SynthInstance with_replaced_blocks(
    const SynthInstance& inst,
    std::span<const std::pair<EdgeId, PartialPermutation>> replacements);

// Full pipeline: G(n, p) (resampled up to 100 times until connected), random
// full ground truth, corruption, keypoint subsampling and restriction.
SynthInstance generate(const SynthConfig& cfg);

// Corruption models on full m x m blocks. `full_perm[i][r]` is the universe
// index of row r of node i's full block; `edges` in canonical order. Only
// selected edges are modified.
FullBlocks corrupt_ucm(std::span<const PartialPermutation> x_full,
                       std::span<const Edge> edges, Index m, double q,
                       std::uint64_t seed);
FullBlocks corrupt_lbc(std::span<const PartialPermutation> x_full,
                       std::span<const Edge> edges, Index n, Index m,
                       const LbcModel& model, std::uint64_t seed);
FullBlocks corrupt_lac(std::span<const PartialPermutation> x_full,
                       std::span<const Edge> edges,
                       std::span<const std::vector<Index>> full_perm, Index n,
                       Index m, const LacModel& model, std::uint64_t seed);

// Identity m x m with the columns at `cols` (3 distinct indices) cycled
// c0 -> c1 -> c2 -> c0.
PartialPermutation three_cycle_identity(Index m, const std::array<Index, 3>& cols);

}  // namespace matchfame
