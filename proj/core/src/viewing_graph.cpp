#include "matchfame/viewing_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>

namespace matchfame {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<Index> parent_;
  std::vector<Index> size_;
};

}  // namespace

ViewingGraph::ViewingGraph(
    std::vector<Index> keypoint_counts,
    std::vector<std::pair<Edge, PartialPermutation>> edges)
    : keypoint_counts_(std::move(keypoint_counts)) {
  const Index n = num_nodes();
  for (Index i = 0; i < n; ++i) {
    if (keypoint_counts_[i] < 0) {
      throw DataError("ViewingGraph: negative keypoint count at node " +
                      std::to_string(i));
    }
    total_keypoints_ += keypoint_counts_[i];
  }

  for (auto& [e, block] : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
      throw DataError("ViewingGraph: edge endpoint out of range");
    }
    if (e.i == e.j) {
      throw DataError("ViewingGraph: self loop at node " + std::to_string(e.i));
    }
    if (e.i > e.j) {
      block = transpose(block);
      std::swap(e.i, e.j);
    }
    if (block.rows() != keypoint_counts_[e.i] ||
        block.cols() != keypoint_counts_[e.j]) {
      throw DataError("ViewingGraph: block for edge (" + std::to_string(e.i) +
                      "," + std::to_string(e.j) + ") has shape " +
                      std::to_string(block.rows()) + "x" +
                      std::to_string(block.cols()) + ", expected " +
                      std::to_string(keypoint_counts_[e.i]) + "x" +
                      std::to_string(keypoint_counts_[e.j]));
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k - 1].first == edges[k].first) {
      throw DataError("ViewingGraph: duplicate edge (" +
                      std::to_string(edges[k].first.i) + "," +
                      std::to_string(edges[k].first.j) + ")");
    }
  }

  edges_.reserve(edges.size());
  blocks_.reserve(edges.size());
  adjacency_.assign(static_cast<std::size_t>(n), {});
  for (auto& [e, block] : edges) {
    const auto id = static_cast<EdgeId>(edges_.size());
    adjacency_[e.i].push_back({e.j, id});
    adjacency_[e.j].push_back({e.i, id});
    forward_maps_.push_back(block.row_map());
    backward_maps_.push_back(transpose(block).row_map());
    edges_.push_back(e);
    blocks_.push_back(std::move(block));
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
}

EdgeId ViewingGraph::find_edge(Index i, Index j) const {
  if (i < 0 || j < 0 || i >= num_nodes() || j >= num_nodes()) return -1;
  const auto& adj = adjacency_[i];
  auto it = std::lower_bound(
      adj.begin(), adj.end(), j,
      [](const Neighbor& nb, Index node) { return nb.node < node; });
  if (it != adj.end() && it->node == j) return it->edge;
  return -1;
}

PartialPermutation ViewingGraph::oriented_block(Index i, Index j) const {
  const EdgeId e = find_edge(i, j);
  if (e < 0) {
    throw DataError("oriented_block: no edge (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
  }
  return i < j ? blocks_[e] : transpose(blocks_[e]);
}

std::span<const Index> ViewingGraph::match_map(Index i, Index j) const {
  const EdgeId e = find_edge(i, j);
  if (e < 0) {
    throw DataError("match_map: no edge (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
  }
  return match_map(e, i < j);
}

std::vector<Index> co_neighborhood(const ViewingGraph& g, Index i, Index j) {
  if (g.find_edge(i, j) < 0) {
    throw DataError("co_neighborhood: (" + std::to_string(i) + "," +
                    std::to_string(j) + ") is not an edge");
  }
  std::vector<Index> out;
  auto a = g.neighbors(i);
  auto b = g.neighbors(j);
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x].node < b[y].node) {
      ++x;
    } else if (b[y].node < a[x].node) {
      ++y;
    } else {
      out.push_back(a[x].node);
      ++x;
      ++y;
    }
  }
  return out;
}

std::vector<std::vector<Index>> connected_components(const ViewingGraph& g) {
  DisjointSets sets(g.num_nodes());
  for (const Edge& e : g.edges()) sets.unite(e.i, e.j);
  std::vector<std::vector<Index>> components;
  std::vector<Index> slot(static_cast<std::size_t>(g.num_nodes()), -1);
  for (Index v = 0; v < g.num_nodes(); ++v) {
    const Index r = sets.find(v);
    if (slot[r] < 0) {
      slot[r] = static_cast<Index>(components.size());
      components.emplace_back();
    }
    components[slot[r]].push_back(v);
  }
  return components;
}

SpanningTree minimum_spanning_tree(const ViewingGraph& g, const EdgeWeights& w) {
  const Index n = g.num_nodes();
  if (static_cast<EdgeId>(w.size()) != g.num_edges()) {
    throw DataError("minimum_spanning_tree: weight count does not match edges");
  }
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) {
      throw DataError("minimum_spanning_tree: weights must be finite and >= 0");
    }
  }
  SpanningTree tree;
  if (n == 0) return tree;

  const auto components = connected_components(g);
  if (components.size() > 1) {
    std::ostringstream msg;
    msg << "minimum_spanning_tree: graph is disconnected into "
        << components.size() << " components:";
    for (const auto& c : components) {
      msg << " {";
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (k > 0) msg << ",";
        if (k == 8 && c.size() > 9) {
          msg << "... " << c.size() << " nodes";
          break;
        }
        msg << c[k];
      }
      msg << "}";
    }
    throw DataError(msg.str());
  }

  // Edges are already sorted by (i, j) with i < j, so a stable sort on weight
  // yields the (weight, min, max) order.
  std::vector<EdgeId> order(static_cast<std::size_t>(g.num_edges()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&w](EdgeId a, EdgeId b) { return w[a] < w[b]; });

  DisjointSets sets(n);
  for (EdgeId e : order) {
    const Edge& edge = g.edge(e);
    if (sets.unite(edge.i, edge.j)) {
      tree.edges.push_back(e);
      tree.total_weight += w[e];
      if (static_cast<Index>(tree.edges.size()) == n - 1) break;
    }
  }

  if (!tree.edges.empty()) {
    const Edge& lightest = g.edge(tree.edges.front());
    tree.root = g.keypoint_count(lightest.j) > g.keypoint_count(lightest.i)
                    ? lightest.j
                    : lightest.i;
  }

  std::vector<std::vector<Index>> children(static_cast<std::size_t>(n));
  for (EdgeId e : tree.edges) {
    children[g.edge(e).i].push_back(g.edge(e).j);
    children[g.edge(e).j].push_back(g.edge(e).i);
  }
  for (auto& c : children) std::sort(c.begin(), c.end());

  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::queue<Index> frontier;
  frontier.push(tree.root);
  visited[tree.root] = 1;
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    for (Index v : children[u]) {
      if (visited[v]) continue;
      visited[v] = 1;
      tree.arcs.emplace_back(u, v);
      frontier.push(v);
    }
  }
  return tree;
}

}  // namespace matchfame
