#include "matchfame/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "matchfame/projection.hpp"
#include "matchfame/rng.hpp"

namespace matchfame {
namespace {

constexpr std::uint64_t kFillStream = 0xF111;

double MillisecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

PartialPermutation Project(const SparseNonnegMatrix& a, const SolverConfig& cfg) {
  if (cfg.projection == ProjectionKind::kHungarian) return hungarian_project(a);
  return project_partial(a, cfg.theta);
}

void FillZeroColumns(AbsoluteAssignment& p, CounterRng& rng) {
  const Index width = p.universe_size;
  const auto n = static_cast<Index>(p.blocks.size());
  std::vector<char> col_used(static_cast<std::size_t>(width), 0);
  std::vector<std::vector<Index>> empty_rows(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto map = p.blocks[i].row_map();
    for (Index r = static_cast<Index>(map.size()) - 1; r >= 0; --r) {
      if (map[r] < 0) empty_rows[i].push_back(r);  // descending; pop_back = lowest
    }
    for (const Match& m : p.blocks[i].entries()) col_used[m.col] = 1;
  }
  std::vector<Index> candidates;
  for (Index i = 0; i < n; ++i) {
    if (!empty_rows[i].empty()) candidates.push_back(i);
  }
  std::vector<std::vector<Match>> added(static_cast<std::size_t>(n));
  for (Index c = 0; c < width && !candidates.empty(); ++c) {
    if (col_used[c]) continue;
    const std::size_t pick = rng.below(candidates.size());
    const Index node = candidates[pick];
    added[node].push_back({empty_rows[node].back(), c});
    empty_rows[node].pop_back();
    if (empty_rows[node].empty()) candidates.erase(candidates.begin() + pick);
  }
  for (Index i = 0; i < n; ++i) {
    if (added[i].empty()) continue;
    std::vector<Match> entries(p.blocks[i].entries().begin(),
                               p.blocks[i].entries().end());
    entries.insert(entries.end(), added[i].begin(), added[i].end());
    p.blocks[i] = PartialPermutation::FromEntries(p.blocks[i].rows(), width,
                                                  std::move(entries));
  }
}

void FillZeroRows(AbsoluteAssignment& p, CounterRng& rng) {
  const Index width = p.universe_size;
  for (auto& block : p.blocks) {
    std::vector<char> used(static_cast<std::size_t>(width), 0);
    for (const Match& m : block.entries()) used[m.col] = 1;
    std::vector<Index> free_cols;
    for (Index c = 0; c < width; ++c) {
      if (!used[c]) free_cols.push_back(c);
    }
    const auto map = block.row_map();
    std::vector<Match> entries(block.entries().begin(), block.entries().end());
    for (Index r = 0; r < block.rows() && !free_cols.empty(); ++r) {
      if (map[r] >= 0) continue;
      const std::size_t pick = rng.below(free_cols.size());
      entries.push_back({r, free_cols[pick]});
      free_cols.erase(free_cols.begin() + pick);
    }
    block = PartialPermutation::FromEntries(block.rows(), width, std::move(entries));
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(gamma >= 0.0)) throw std::invalid_argument("solver: gamma must be >= 0");
  if (max_iterations < 1) throw std::invalid_argument("solver: t0 must be >= 1");
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw std::invalid_argument("solver: theta must be in [0, 1)");
  }
  if (!(mhat_factor >= 1.0)) {
    throw std::invalid_argument("solver: mhat factor must be >= 1");
  }
}

Index estimate_universe_size(const ViewingGraph& g, double factor) {
  if (g.num_nodes() < 1) throw DataError("estimate_universe_size: empty graph");
  const long long n = g.num_nodes();
  const long long per_node = (g.total_keypoints() + n - 1) / n;
  return static_cast<Index>(std::ceil(factor * static_cast<double>(per_node)));
}

EdgeWeights ppm_weights(const CorruptionEstimates& s_hat, double gamma) {
  EdgeWeights w(s_hat.values.size());
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = std::exp(-gamma * s_hat.values[e]);
  return w;
}

AbsoluteAssignment mst_initialize(const ViewingGraph& g,
                                  const CorruptionEstimates& s_hat,
                                  const SolverConfig& cfg, Index universe_size) {
  cfg.validate();
  if (static_cast<EdgeId>(s_hat.size()) != g.num_edges()) {
    throw DataError("mst_initialize: estimate count does not match edges");
  }
  AbsoluteAssignment p;
  p.universe_size = universe_size;
  const Index n = g.num_nodes();
  if (n == 0) return p;
  p.blocks.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) p.blocks.emplace_back(g.keypoint_count(i), universe_size);

  const SpanningTree tree = minimum_spanning_tree(g, s_hat.values);
  p.blocks[tree.root] =
      PartialPermutation::Identity(g.keypoint_count(tree.root), universe_size);
  for (const auto& [parent, child] : tree.arcs) {
    const PartialPermutation local =
        compose(g.oriented_block(child, parent), p.blocks[parent]);
    p.blocks[child] = project_partial(SparseNonnegMatrix::FromPartialPermutation(local),
                                      cfg.theta);
  }

  CounterRng rng(cfg.seed, {kFillStream});
  if (cfg.fill == FillMode::kZeroColumn) {
    FillZeroColumns(p, rng);
  } else {
    FillZeroRows(p, rng);
  }
  return p;
}

AbsoluteAssignment mst_initialize(const ViewingGraph& g,
                                  const CorruptionEstimates& s_hat,
                                  const SolverConfig& cfg) {
  return mst_initialize(g, s_hat, cfg, estimate_universe_size(g, cfg.mhat_factor));
}

namespace {

SparseNonnegMatrix Accumulate(const ViewingGraph& g, const EdgeWeights& w,
                              const std::vector<std::vector<Index>>& p_maps,
                              Index universe_size, Index node,
                              const SolverConfig& cfg) {
  double total = 0.0;
  for (const Neighbor& nb : g.neighbors(node)) total += w[nb.edge];
  std::vector<WeightedEntry> triplets;
  if (total > 0.0) {
    for (const Neighbor& nb : g.neighbors(node)) {
      const double weight = cfg.normalize_weights ? w[nb.edge] / total : w[nb.edge];
      if (!(weight > 0.0)) continue;
      const auto x = g.match_map(nb.edge, node < nb.node);
      const auto& pj = p_maps[nb.node];
      for (std::size_t r = 0; r < x.size(); ++r) {
        if (x[r] < 0) continue;
        const Index u = pj[x[r]];
        if (u >= 0) triplets.push_back({static_cast<Index>(r), u, weight});
      }
    }
  }
  return SparseNonnegMatrix::FromTriplets(g.keypoint_count(node), universe_size,
                                          std::move(triplets));
}

std::vector<std::vector<Index>> RowMaps(const AbsoluteAssignment& p) {
  std::vector<std::vector<Index>> maps;
  maps.reserve(p.blocks.size());
  for (const auto& b : p.blocks) maps.push_back(b.row_map());
  return maps;
}

void CheckShapes(const ViewingGraph& g, const EdgeWeights& w,
                 const AbsoluteAssignment& p) {
  if (static_cast<Index>(p.blocks.size()) != g.num_nodes()) {
    throw DataError("PPM: assignment has wrong node count");
  }
  for (Index i = 0; i < g.num_nodes(); ++i) {
    if (p.blocks[i].rows() != g.keypoint_count(i) ||
        p.blocks[i].cols() != p.universe_size) {
      throw DataError("PPM: block " + std::to_string(i) + " has wrong shape");
    }
  }
  if (static_cast<EdgeId>(w.size()) != g.num_edges()) {
    throw DataError("PPM: weight count does not match edges");
  }
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) throw DataError("PPM: weights must be finite and >= 0");
  }
}

}  // namespace

SparseNonnegMatrix ppm_accumulate(const ViewingGraph& g, const EdgeWeights& w,
                                  const AbsoluteAssignment& p, Index node,
                                  const SolverConfig& cfg) {
  CheckShapes(g, w, p);
  return Accumulate(g, w, RowMaps(p), p.universe_size, node, cfg);
}

AbsoluteAssignment weighted_ppm_step(const ViewingGraph& g, const EdgeWeights& w,
                                     const AbsoluteAssignment& p,
                                     const SolverConfig& cfg) {
  CheckShapes(g, w, p);
  const auto maps = RowMaps(p);
  AbsoluteAssignment next = p;
  ParallelFor(static_cast<std::size_t>(g.num_nodes()), cfg.exec.threads,
              [&](std::size_t i) {
                const auto node = static_cast<Index>(i);
                double total = 0.0;
                for (const Neighbor& nb : g.neighbors(node)) total += w[nb.edge];
                if (!(total > 0.0)) return;
                next.blocks[i] =
                    Project(Accumulate(g, w, maps, p.universe_size, node, cfg), cfg);
              });
  return next;
}

PpmRun run_weighted_ppm(const ViewingGraph& g, const EdgeWeights& w,
                        AbsoluteAssignment init, const SolverConfig& cfg) {
  cfg.validate();
  PpmRun run;
  run.assignment = std::move(init);
  while (run.iterations < cfg.max_iterations) {
    AbsoluteAssignment next = weighted_ppm_step(g, w, run.assignment, cfg);
    ++run.iterations;
    const bool unchanged = next == run.assignment;
    run.assignment = std::move(next);
    if (unchanged) {
      run.converged = true;
      break;
    }
  }
  return run;
}

PpmRun ppm_baseline(const ViewingGraph& g, AbsoluteAssignment init,
                    const SolverConfig& cfg) {
  SolverConfig uniform = cfg;
  uniform.normalize_weights = true;
  return run_weighted_ppm(g, EdgeWeights(static_cast<std::size_t>(g.num_edges()), 1.0),
                          std::move(init), uniform);
}

std::vector<PartialPermutation> relative_matches(const ViewingGraph& g,
                                                 const AbsoluteAssignment& p) {
  std::vector<PartialPermutation> z;
  z.reserve(static_cast<std::size_t>(g.num_edges()));
  for (const Edge& e : g.edges()) {
    z.push_back(compose(p.blocks[e.i], transpose(p.blocks[e.j])));
  }
  return z;
}

SolverResult match_fame(const ViewingGraph& g, const CempConfig& cemp_cfg,
                        const SolverConfig& cfg) {
  cfg.validate();
  SolverResult result;
  auto start = std::chrono::steady_clock::now();
  result.s_hat = cemp_partial(g, cemp_cfg);
  result.times.cemp_ms = MillisecondsSince(start);

  start = std::chrono::steady_clock::now();
  AbsoluteAssignment init = mst_initialize(g, result.s_hat, cfg);
  result.times.init_ms = MillisecondsSince(start);

  start = std::chrono::steady_clock::now();
  PpmRun run = run_weighted_ppm(g, ppm_weights(result.s_hat, cfg.gamma),
                                std::move(init), cfg);
  result.assignment = std::move(run.assignment);
  result.iterations = run.iterations;
  result.converged = run.converged;
  result.matches = relative_matches(g, result.assignment);
  result.times.ppm_ms = MillisecondsSince(start);
  return result;
}

SolverResult ppm_pipeline(const ViewingGraph& g, const SolverConfig& cfg) {
  cfg.validate();
  SolverResult result;
  result.s_hat.values.assign(static_cast<std::size_t>(g.num_edges()), 0.0);
  result.s_hat.unverifiable.assign(static_cast<std::size_t>(g.num_edges()), 0);

  auto start = std::chrono::steady_clock::now();
  AbsoluteAssignment init = mst_initialize(g, result.s_hat, cfg);
  result.times.init_ms = MillisecondsSince(start);

  start = std::chrono::steady_clock::now();
  PpmRun run = ppm_baseline(g, std::move(init), cfg);
  result.assignment = std::move(run.assignment);
  result.iterations = run.iterations;
  result.converged = run.converged;
  result.matches = relative_matches(g, result.assignment);
  result.times.ppm_ms = MillisecondsSince(start);
  return result;
}

}  // namespace matchfame
