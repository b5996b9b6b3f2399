#pragma once

#include <optional>
#include <span>
#include <vector>

#include "matchfame/parallel.hpp"
#include "matchfame/partial_permutation.hpp"
#include "matchfame/viewing_graph.hpp"

namespace matchfame {

// Match counts of the 3-cycle ijk.
//   n_i     = nnz(X_ki X_ij)   keypoints of i matched into both j and k
//   n_j     = nnz(X_kj X_ji)
//   n_k     = nnz(X_ik X_kj)
//   n_delta = tr(X_ij X_jk X_ki) closed triangles of matches
struct CycleStats {
  std::size_t n_i = 0;
  std::size_t n_j = 0;
  std::size_t n_k = 0;
  std::size_t n_delta = 0;

  friend bool operator==(const CycleStats&, const CycleStats&) = default;
};

// Shapes must chain as m_i x m_j, m_j x m_k, m_k x m_i.
CycleStats cycle_stats(const PartialPermutation& x_ij,
                       const PartialPermutation& x_jk,
                       const PartialPermutation& x_ki);

// 1 - 3 n_delta / (n_i + n_j + n_k), or nullopt when the denominator is zero
// (the cycle carries no match evidence).
std::optional<double> inconsistency(const CycleStats& stats);

// Same quantities through the graph's precomputed row maps.
CycleStats cycle_stats(const ViewingGraph& g, Index i, Index j, Index k);

struct CycleTerm {
  Index k = 0;
  EdgeId edge_ik = 0;
  EdgeId edge_jk = 0;
  double d = 0.0;
};

// d_ijk for every edge ij and every informative k in N_ij, stored per edge in
// ascending k (CSR layout).
class InconsistencyMap {
 public:
  InconsistencyMap() = default;
  InconsistencyMap(std::vector<std::size_t> offsets,
                   std::vector<CycleTerm> terms,
                   std::vector<std::size_t> co_neighbors)
      : offsets_(std::move(offsets)),
        terms_(std::move(terms)),
        co_neighbors_(std::move(co_neighbors)) {}

  EdgeId num_edges() const {
    return offsets_.empty() ? 0 : static_cast<EdgeId>(offsets_.size() - 1);
  }
  std::span<const CycleTerm> cycles(EdgeId e) const {
    return std::span<const CycleTerm>(terms_).subspan(
        offsets_[e], offsets_[e + 1] - offsets_[e]);
  }
  // |N_ij| including uninformative cycles.
  std::size_t co_neighbor_count(EdgeId e) const { return co_neighbors_[e]; }
  std::size_t total_terms() const { return terms_.size(); }

  std::optional<double> value(EdgeId e, Index k) const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<CycleTerm> terms_;
  std::vector<std::size_t> co_neighbors_;
};

InconsistencyMap all_inconsistencies(const ViewingGraph& g, int threads = 1);

}  // namespace matchfame
