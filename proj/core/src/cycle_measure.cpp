#include "matchfame/cycle_measure.hpp"

#include <algorithm>

namespace matchfame {
namespace {

std::size_t ComposedNnz(std::span<const Index> first,
                        std::span<const Index> second) {
  std::size_t count = 0;
  for (Index v : first) {
    if (v >= 0 && second[v] >= 0) ++count;
  }
  return count;
}

}  // namespace

CycleStats cycle_stats(const PartialPermutation& x_ij,
                       const PartialPermutation& x_jk,
                       const PartialPermutation& x_ki) {
  if (x_ij.cols() != x_jk.rows() || x_jk.cols() != x_ki.rows() ||
      x_ki.cols() != x_ij.rows()) {
    throw DataError("cycle_stats: blocks do not chain around the cycle");
  }
  CycleStats s;
  s.n_i = product_nnz(x_ki, x_ij);
  // X_kj X_ji = (X_ij X_jk)^T and X_ik X_kj = (X_jk X_ki)^T; nnz is
  // transpose invariant, so no reverse blocks are needed.
  s.n_j = product_nnz(x_ij, x_jk);
  s.n_k = product_nnz(x_jk, x_ki);
  s.n_delta = trace_product3(x_ij, x_jk, x_ki);
  return s;
}

std::optional<double> inconsistency(const CycleStats& stats) {
  const std::size_t denom = stats.n_i + stats.n_j + stats.n_k;
  if (denom == 0) return std::nullopt;
  return 1.0 - 3.0 * static_cast<double>(stats.n_delta) /
                   static_cast<double>(denom);
}

CycleStats cycle_stats(const ViewingGraph& g, Index i, Index j, Index k) {
  const auto ij = g.match_map(i, j);
  const auto ji = g.match_map(j, i);
  const auto jk = g.match_map(j, k);
  const auto kj = g.match_map(k, j);
  const auto ki = g.match_map(k, i);
  const auto ik = g.match_map(i, k);
  CycleStats s;
  s.n_i = ComposedNnz(ki, ij);
  s.n_j = ComposedNnz(kj, ji);
  s.n_k = ComposedNnz(ik, kj);
  for (std::size_t r = 0; r < ij.size(); ++r) {
    const Index v = ij[r];
    if (v < 0) continue;
    const Index w = jk[v];
    if (w >= 0 && ki[w] == static_cast<Index>(r)) ++s.n_delta;
  }
  return s;
}

std::optional<double> InconsistencyMap::value(EdgeId e, Index k) const {
  const auto terms = cycles(e);
  auto it = std::lower_bound(
      terms.begin(), terms.end(), k,
      [](const CycleTerm& t, Index node) { return t.k < node; });
  if (it != terms.end() && it->k == k) return it->d;
  return std::nullopt;
}

InconsistencyMap all_inconsistencies(const ViewingGraph& g, int threads) {
  const auto num_edges = static_cast<std::size_t>(g.num_edges());
  std::vector<std::vector<CycleTerm>> per_edge(num_edges);
  std::vector<std::size_t> co_neighbors(num_edges, 0);

  ParallelFor(num_edges, threads, [&](std::size_t e) {
    const Edge& edge = g.edge(static_cast<EdgeId>(e));
    auto a = g.neighbors(edge.i);
    auto b = g.neighbors(edge.j);
    std::size_t x = 0, y = 0;
    while (x < a.size() && y < b.size()) {
      if (a[x].node < b[y].node) {
        ++x;
      } else if (b[y].node < a[x].node) {
        ++y;
      } else {
        const Index k = a[x].node;
        ++co_neighbors[e];
        const auto d = inconsistency(cycle_stats(g, edge.i, edge.j, k));
        if (d) per_edge[e].push_back({k, a[x].edge, b[y].edge, *d});
        ++x;
        ++y;
      }
    }
  });

  std::vector<std::size_t> offsets(num_edges + 1, 0);
  for (std::size_t e = 0; e < num_edges; ++e) {
    offsets[e + 1] = offsets[e] + per_edge[e].size();
  }
  std::vector<CycleTerm> terms;
  terms.reserve(offsets.back());
  for (auto& list : per_edge) terms.insert(terms.end(), list.begin(), list.end());
  return InconsistencyMap(std::move(offsets), std::move(terms),
                          std::move(co_neighbors));
}

}  // namespace matchfame
