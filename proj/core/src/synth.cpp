#include "matchfame/synth.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace matchfame {
namespace {

// Stream identifiers for the counter RNG.
enum Stream : std::uint64_t {
  kGraph = 1,
  kTruth = 2,
  kKeep = 3,
  kUcmSelect = 4,
  kUniformPerm = 5,
  kSeedNodes = 6,
  kSeedSelect = 7,
  kNodePerm = 8,
  kLacColumns = 9,
};

PartialPermutation PermutationMatrix(std::span<const Index> perm) {
  return PartialPermutation::FromRowMap(static_cast<Index>(perm.size()), perm);
}

PartialPermutation RandomFullPermutation(Index m, CounterRng rng) {
  const auto perm = rng.permutation(m);
  return PermutationMatrix(perm);
}

std::vector<Index> SampleSeedNodes(Index n, Index count, std::uint64_t seed) {
  CounterRng rng(seed, {kSeedNodes});
  std::vector<Index> nodes(static_cast<std::size_t>(n));
  std::iota(nodes.begin(), nodes.end(), 0);
  for (Index k = 0; k < count; ++k) {
    const auto pick = static_cast<Index>(k + rng.below(static_cast<std::uint64_t>(n - k)));
    std::swap(nodes[k], nodes[pick]);
  }
  nodes.resize(static_cast<std::size_t>(count));
  return nodes;
}

// For each edge, the first seed (in sampling order) that selects it, or -1.
std::vector<Index> SelectAroundSeeds(std::span<const Edge> edges,
                                     std::span<const Index> seeds,
                                     double edge_prob, std::uint64_t seed) {
  std::vector<Index> chosen_by(edges.size(), -1);
  for (Index c : seeds) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const Edge& edge = edges[e];
      if (edge.i != c && edge.j != c) continue;
      if (chosen_by[e] >= 0) continue;
      CounterRng rng(seed, {kSeedSelect, static_cast<std::uint64_t>(c),
                            static_cast<std::uint64_t>(edge.i),
                            static_cast<std::uint64_t>(edge.j)});
      if (rng.bernoulli(edge_prob)) chosen_by[e] = c;
    }
  }
  return chosen_by;
}

bool IsConnected(Index n, std::span<const Edge> edges) {
  if (n <= 1) return true;
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index reached = 1;
  while (!stack.empty()) {
    const Index u = stack.back();
    stack.pop_back();
    for (Index v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

void Label(SynthInstance& inst) {
  const ViewingGraph& g = inst.graph;
  inst.truth_blocks.clear();
  inst.bad.assign(static_cast<std::size_t>(g.num_edges()), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    inst.truth_blocks.push_back(
        compose(inst.truth[edge.i], transpose(inst.truth[edge.j])));
    inst.bad[e] = g.block(e) == inst.truth_blocks.back() ? 0 : 1;
  }
}

}  // namespace

std::string model_name(const CorruptionModel& model) {
  switch (model.index()) {
    case 0:
      return "ucm";
    case 1:
      return "lbc";
    default:
      return "lac";
  }
}

void SynthConfig::validate() const {
  auto prob = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (n < 1) throw std::invalid_argument("synth: n must be >= 1");
  if (m < 0) throw std::invalid_argument("synth: m must be >= 0");
  if (!prob(p) || !prob(p_include)) {
    throw std::invalid_argument("synth: probabilities must be in [0, 1]");
  }
  std::visit(
      [this, &prob](const auto& mdl) {
        using T = std::decay_t<decltype(mdl)>;
        if constexpr (std::is_same_v<T, UcmModel>) {
          if (!prob(mdl.q)) throw std::invalid_argument("synth: q must be in [0, 1]");
        } else {
          if (mdl.seeds < 0 || mdl.seeds > n) {
            throw std::invalid_argument("synth: n_c must be in [0, n]");
          }
          if (!prob(mdl.edge_prob)) {
            throw std::invalid_argument("synth: edge probability must be in [0, 1]");
          }
          if constexpr (std::is_same_v<T, LacModel>) {
            if (mdl.seeds > 0 && m < 3) {
              throw std::invalid_argument("synth: LAC needs m >= 3");
            }
          }
        }
      },
      model);
}

std::size_t SynthInstance::num_bad() const {
  return static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
}

Index SynthInstance::universe_of(Index i, Index r) const {
  return truth[i].col_of(r).value_or(-1);
}

PartialPermutation three_cycle_identity(Index m, const std::array<Index, 3>& cols) {
  std::vector<Index> map(static_cast<std::size_t>(m));
  std::iota(map.begin(), map.end(), 0);
  map[cols[0]] = cols[1];
  map[cols[1]] = cols[2];
  map[cols[2]] = cols[0];
  return PermutationMatrix(map);
}

FullBlocks corrupt_ucm(std::span<const PartialPermutation> x_full,
                       std::span<const Edge> edges, Index m, double q,
                       std::uint64_t seed) {
  FullBlocks out;
  out.blocks.assign(x_full.begin(), x_full.end());
  out.selected.assign(edges.size(), 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto i = static_cast<std::uint64_t>(edges[e].i);
    const auto j = static_cast<std::uint64_t>(edges[e].j);
    CounterRng select(seed, {kUcmSelect, i, j});
    if (!select.bernoulli(q)) continue;
    out.selected[e] = 1;
    out.blocks[e] = RandomFullPermutation(m, CounterRng(seed, {kUniformPerm, i, j}));
  }
  return out;
}

FullBlocks corrupt_lbc(std::span<const PartialPermutation> x_full,
                       std::span<const Edge> edges, Index n, Index m,
                       const LbcModel& model, std::uint64_t seed) {
  FullBlocks out;
  out.blocks.assign(x_full.begin(), x_full.end());
  out.selected.assign(edges.size(), 0);
  out.seed_nodes = SampleSeedNodes(n, model.seeds, seed);
  const auto chosen_by = SelectAroundSeeds(edges, out.seed_nodes, model.edge_prob, seed);

  std::vector<PartialPermutation> node_perm;
  node_perm.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    node_perm.push_back(RandomFullPermutation(
        m, CounterRng(seed, {kNodePerm, static_cast<std::uint64_t>(i)})));
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (chosen_by[e] < 0) continue;
    out.selected[e] = 1;
    const Edge& edge = edges[e];
    PartialPermutation candidate =
        compose(node_perm[edge.i], transpose(node_perm[edge.j]));
    if (inner_product(candidate, x_full[e]) > 1) {
      candidate = RandomFullPermutation(
          m, CounterRng(seed, {kUniformPerm, static_cast<std::uint64_t>(edge.i),
                               static_cast<std::uint64_t>(edge.j)}));
    }
    out.blocks[e] = std::move(candidate);
  }
  return out;
}

FullBlocks corrupt_lac(std::span<const PartialPermutation> x_full,
                       std::span<const Edge> edges,
                       std::span<const std::vector<Index>> full_perm, Index n,
                       Index m, const LacModel& model, std::uint64_t seed) {
  FullBlocks out;
  out.blocks.assign(x_full.begin(), x_full.end());
  out.selected.assign(edges.size(), 0);
  out.seed_nodes = SampleSeedNodes(n, model.seeds, seed);
  const auto chosen_by = SelectAroundSeeds(edges, out.seed_nodes, model.edge_prob, seed);

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Index c = chosen_by[e];
    if (c < 0) continue;
    out.selected[e] = 1;
    const Edge& edge = edges[e];
    const Index other = edge.i == c ? edge.j : edge.i;
    CounterRng rng(seed, {kLacColumns, static_cast<std::uint64_t>(edge.i),
                          static_cast<std::uint64_t>(edge.j)});
    // Three distinct columns in random order; cycling them in that order
    // covers both 3-cycle orientations.
    std::vector<Index> pool(static_cast<std::size_t>(m));
    std::iota(pool.begin(), pool.end(), 0);
    std::array<Index, 3> cols{};
    for (int k = 0; k < 3; ++k) {
      const auto pick = static_cast<std::size_t>(
          k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(m - k))));
      std::swap(pool[k], pool[pick]);
      cols[k] = pool[k];
    }
    const PartialPermutation q = three_cycle_identity(m, cols);
    const PartialPermutation p_other = PermutationMatrix(full_perm[other]);
    PartialPermutation block = compose(q, transpose(p_other));  // rows of c
    out.blocks[e] = edge.i == c ? std::move(block) : transpose(block);
  }
  return out;
}

SynthInstance make_instance(Index universe_size,
                            std::vector<PartialPermutation> truth,
                            std::vector<std::pair<Edge, PartialPermutation>> observed) {
  std::vector<Index> counts;
  counts.reserve(truth.size());
  for (const auto& t : truth) {
    if (t.cols() != universe_size) {
      throw DataError("make_instance: truth block width differs from universe size");
    }
    counts.push_back(t.rows());
  }
  SynthInstance inst;
  inst.universe_size = universe_size;
  inst.graph = ViewingGraph(std::move(counts), std::move(observed));
  inst.truth = std::move(truth);
  for (const auto& t : inst.truth) {
    std::vector<Index> universe;
    for (const Match& m : t.entries()) universe.push_back(m.col);
    inst.keypoints.push_back(std::move(universe));
  }
  Label(inst);
  return inst;
}

SynthInstance with_replaced_blocks(
    const SynthInstance& inst,
    std::span<const std::pair<EdgeId, PartialPermutation>> replacements) {
  const ViewingGraph& g = inst.graph;
  std::vector<std::pair<Edge, PartialPermutation>> edges;
  edges.reserve(static_cast<std::size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) edges.emplace_back(g.edge(e), g.block(e));
  for (const auto& [e, block] : replacements) {
    if (e < 0 || e >= g.num_edges()) throw DataError("with_replaced_blocks: bad edge id");
    edges[e].second = block;
  }
  SynthInstance out = inst;
  std::vector<Index> counts(g.keypoint_counts().begin(), g.keypoint_counts().end());
  out.graph = ViewingGraph(std::move(counts), std::move(edges));
  Label(out);
  return out;
}

SynthInstance generate(const SynthConfig& cfg) {
  cfg.validate();
  const Index n = cfg.n;
  const Index m = cfg.m;

  std::vector<Edge> edges;
  bool connected = false;
  for (std::uint64_t attempt = 0; attempt < 100 && !connected; ++attempt) {
    edges.clear();
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        CounterRng rng(cfg.seed, {kGraph, attempt, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(j)});
        if (rng.bernoulli(cfg.p)) edges.push_back({i, j});
      }
    }
    connected = IsConnected(n, edges);
  }
  if (!connected) {
    throw DataError("generate: G(n, p) sample disconnected after 100 attempts");
  }

  // sigma_i(r): universe index of row r of node i's full block.
  std::vector<std::vector<Index>> full_perm;
  std::vector<std::vector<Index>> inverse;
  for (Index i = 0; i < n; ++i) {
    full_perm.push_back(
        CounterRng(cfg.seed, {kTruth, static_cast<std::uint64_t>(i)}).permutation(m));
    std::vector<Index> inv(static_cast<std::size_t>(m));
    for (Index r = 0; r < m; ++r) inv[full_perm[i][r]] = r;
    inverse.push_back(std::move(inv));
  }
  std::vector<PartialPermutation> x_full;
  x_full.reserve(edges.size());
  for (const Edge& e : edges) {
    std::vector<Index> map(static_cast<std::size_t>(m));
    for (Index r = 0; r < m; ++r) map[r] = inverse[e.j][full_perm[e.i][r]];
    x_full.push_back(PermutationMatrix(map));
  }

  FullBlocks corrupted = std::visit(
      [&](const auto& mdl) -> FullBlocks {
        using T = std::decay_t<decltype(mdl)>;
        if constexpr (std::is_same_v<T, UcmModel>) {
          return corrupt_ucm(x_full, edges, m, mdl.q, cfg.seed);
        } else if constexpr (std::is_same_v<T, LbcModel>) {
          return corrupt_lbc(x_full, edges, n, m, mdl, cfg.seed);
        } else {
          return corrupt_lac(x_full, edges, full_perm, n, m, mdl, cfg.seed);
        }
      },
      cfg.model);

  SynthInstance inst;
  inst.universe_size = m;
  inst.seed_nodes = std::move(corrupted.seed_nodes);
  std::vector<std::vector<Index>> local(static_cast<std::size_t>(n));
  std::vector<Index> counts;
  for (Index i = 0; i < n; ++i) {
    CounterRng rng(cfg.seed, {kKeep, static_cast<std::uint64_t>(i)});
    std::vector<Index> kept;
    local[i].assign(static_cast<std::size_t>(m), -1);
    for (Index r = 0; r < m; ++r) {
      if (rng.bernoulli(cfg.p_include)) {
        local[i][r] = static_cast<Index>(kept.size());
        kept.push_back(r);
      }
    }
    std::vector<Index> truth_map;
    for (Index r : kept) truth_map.push_back(full_perm[i][r]);
    inst.truth.push_back(PartialPermutation::FromRowMap(m, truth_map));
    counts.push_back(static_cast<Index>(kept.size()));
    inst.keypoints.push_back(std::move(truth_map));
  }

  std::vector<std::pair<Edge, PartialPermutation>> observed;
  observed.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    std::vector<Match> entries;
    for (const Match& mt : corrupted.blocks[e].entries()) {
      const Index r = local[edge.i][mt.row];
      const Index c = local[edge.j][mt.col];
      if (r >= 0 && c >= 0) entries.push_back({r, c});
    }
    observed.emplace_back(edge, PartialPermutation::FromEntries(
                                    counts[edge.i], counts[edge.j], std::move(entries)));
  }
  inst.graph = ViewingGraph(std::move(counts), std::move(observed));
  Label(inst);
  return inst;
}

}  // namespace matchfame
