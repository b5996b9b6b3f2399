#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "matchfame/cemp.hpp"
#include "matchfame/synth.hpp"

namespace matchfame {

// Precision/recall of predicted matches on the bad edges, restricted to the
// observed match positions.
//   true_positive = sum_{E_b} |X* & X & Z|
//   predicted     = sum_{E_b} |Z & X|
//   relevant      = sum_{E_b} |X* & X|
// An empty denominator yields 1 and sets the matching flag.
struct MatchMetrics {
  double precision = 1.0;
  double recall = 1.0;
  std::size_t true_positive = 0;
  std::size_t predicted = 0;
  std::size_t relevant = 0;
  bool precision_by_convention = false;
  bool recall_by_convention = false;
};

MatchMetrics precision_recall(const SynthInstance& inst,
                              std::span<const PartialPermutation> z);

// s*_ij = (bad universe points) / |h(I_i) u h(I_j)|. A point seen by both
// images is good iff its two keypoints are matched to each other; a point seen
// by one image is good iff that keypoint is unmatched. 0 when the union is
// empty.
CorruptionEstimates corruption_levels_star(const SynthInstance& inst);

// Good cycles of edge ij: k in N_ij with ik and jk both good.
std::vector<Index> good_cycles(const SynthInstance& inst, EdgeId e);

// True when every keypoint of i has a match in k through X_ik and every
// keypoint of j has one through X_jk.
bool cycle_verifies(const ViewingGraph& g, Index i, Index j, Index k);

struct TheoremReport {
  double lambda = 0.0;  // 1 - min_ij |G_ij| / |N_ij| over edges with N_ij != {}
  double p_v = 1.0;     // min_ij fraction of verifying good cycles, G_ij != {}
  Index m = 0;          // universe size used in the bounds
  double lambda_bound = 0.0;  // 1 + a - sqrt(a (2 + a)), a = 3em / p_v
  double r_upper = 0.0;       // (1 - lambda)^2 p_v / (6 e m lambda)
  double beta0_upper = 0.0;   // 1 / (2 lambda)
  bool feasible = false;      // p_v > 0 and lambda < lambda_bound
  std::vector<std::string> warnings;
};

TheoremReport theorem_quantities(const SynthInstance& inst);

enum class SeparationStatus { kPass, kFail, kHypothesesUnmet };

std::string to_string(SeparationStatus status);

struct SeparationResult {
  SeparationStatus status = SeparationStatus::kHypothesesUnmet;
  std::string reason;
  // Smallest slack of s_ij^(t) <= 1/(2 beta_0 r^t) over good edges and t >= 1
  // (negative means violated).
  double good_margin = 0.0;
  // Smallest slack of s_ij^(t) >= (p_v / 3e)(1 - lambda) s*_ij over bad edges.
  double bad_margin = 0.0;
  double max_good_s = 0.0;  // max over good edges and t >= 1
  // min over bad edges and t >= 1 of s_ij^(t) / ((p_v / 3e)(1 - lambda) s*_ij).
  double min_bad_bound_ratio = 0.0;
  int violations = 0;
};

// Checks both separation bounds on every iterate s^(1) .. s^(T) of `history`
// (as produced by cemp_partial, history[0] = s^(0)). Requires a geometric
// schedule with beta0 and r inside the admissible ranges of `report`;
// otherwise the status is kHypothesesUnmet.
SeparationResult separation_check(std::span<const CorruptionEstimates> history,
                                  const SynthInstance& inst,
                                  const TheoremReport& report,
                                  const CempConfig& cfg);

struct LemmaViolation {
  int lemma = 0;  // 1 or 2
  EdgeId edge = 0;
  Index k = -1;   // cycle node for lemma 1, -1 for lemma 2
  double lhs = 0.0;
  double rhs = 0.0;
};

// Lemma 1: for good ij and informative k in N_ij, d_ijk <= m (s*_ik + s*_jk).
// Lemma 2: for ij with G_ij != {}, (1/3) p_ij s*_ij <= mean_{k in G_ij} d_ijk,
// with p_ij the edge's own verifying fraction and uninformative cycles
// counted as d = 0.
struct LemmaReport {
  std::size_t lemma1_checked = 0;
  std::size_t lemma2_checked = 0;
  std::vector<LemmaViolation> violations;
};

LemmaReport lemma_suite(const SynthInstance& inst);

// Z_ij Z_jk <= Z_ik for every triangle (all three rotations). Returns the
// number of violating triangles.
std::size_t count_inconsistent_triangles(const ViewingGraph& g,
                                         std::span<const PartialPermutation> z);

}  // namespace matchfame
