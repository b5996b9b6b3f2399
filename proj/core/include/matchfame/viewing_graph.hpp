#pragma once

#include <span>
#include <utility>
#include <vector>

#include "matchfame/partial_permutation.hpp"
#include "matchfame/types.hpp"

namespace matchfame {

struct Edge {
  Index i = 0;  // always i < j
  Index j = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Index node = 0;
  EdgeId edge = 0;
};

// One scalar per edge, aligned with ViewingGraph edge order.
using EdgeWeights = std::vector<double>;

// Images as nodes, observed keypoint matches X_ij as edge blocks. Edges are
// stored once with i < j; X_ji is the transpose of the stored block.
// Immutable after construction.
class ViewingGraph {
 public:
  ViewingGraph() = default;

  // `edges` may list either orientation; a block given for (j, i) with j > i
  // must have shape m_j x m_i and is transposed into canonical form. Throws
  // DataError on self loops, duplicate edges or shape mismatches.
  ViewingGraph(std::vector<Index> keypoint_counts,
               std::vector<std::pair<Edge, PartialPermutation>> edges);

  Index num_nodes() const { return static_cast<Index>(keypoint_counts_.size()); }
  EdgeId num_edges() const { return static_cast<EdgeId>(edges_.size()); }
  Index keypoint_count(Index i) const { return keypoint_counts_[i]; }
  std::span<const Index> keypoint_counts() const { return keypoint_counts_; }
  // M, the total keypoint count.
  long long total_keypoints() const { return total_keypoints_; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  // X_ij for the canonical orientation i < j.
  const PartialPermutation& block(EdgeId e) const { return blocks_[e]; }

  // X_ij for either orientation (transposed copy when i > j).
  PartialPermutation oriented_block(Index i, Index j) const;

  // Row map of X_ij: for keypoint r of image i, the matched keypoint of
  // image j or -1. Valid for both orientations of an existing edge.
  std::span<const Index> match_map(Index i, Index j) const;
  std::span<const Index> match_map(EdgeId e, bool forward) const {
    return forward ? forward_maps_[e] : backward_maps_[e];
  }

  // Neighbors of i sorted by node index.
  std::span<const Neighbor> neighbors(Index i) const { return adjacency_[i]; }

  // Edge id of {i, j} or -1.
  EdgeId find_edge(Index i, Index j) const;

 private:
  std::vector<Index> keypoint_counts_;
  long long total_keypoints_ = 0;
  std::vector<Edge> edges_;
  std::vector<PartialPermutation> blocks_;
  std::vector<std::vector<Index>> forward_maps_;
  std::vector<std::vector<Index>> backward_maps_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

// N_ij: nodes adjacent to both i and j, ascending. Throws DataError when
// {i, j} is not an edge.
std::vector<Index> co_neighborhood(const ViewingGraph& g, Index i, Index j);

// Rooted spanning tree. `arcs` are (parent, child) pairs in breadth-first
// order from the root, children visited in ascending node order.
struct SpanningTree {
  Index root = 0;
  std::vector<std::pair<Index, Index>> arcs;
  std::vector<EdgeId> edges;  // tree edges in Kruskal acceptance order
  double total_weight = 0.0;
};

// Connected components, each sorted, ordered by smallest member.
std::vector<std::vector<Index>> connected_components(const ViewingGraph& g);

// Kruskal's MST with ties broken by (weight, min(i,j), max(i,j)). The root is
// the endpoint of the lightest tree edge with the larger keypoint count
// (smaller index on equal counts). Throws DataError naming the components if
// the graph is disconnected, or if a weight is negative or non-finite.
SpanningTree minimum_spanning_tree(const ViewingGraph& g, const EdgeWeights& w);

}  // namespace matchfame
