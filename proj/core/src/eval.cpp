#include "matchfame/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace matchfame {
namespace {

PartialPermutation Oriented(const ViewingGraph& g, std::span<const PartialPermutation> z,
                            Index i, Index j) {
  const EdgeId e = g.find_edge(i, j);
  return i < j ? z[e] : transpose(z[e]);
}

// Fraction of G_ij whose cycles verify every keypoint of i and j.
double VerifyingFraction(const SynthInstance& inst, EdgeId e,
                         std::span<const Index> good) {
  if (good.empty()) return 1.0;
  const Edge& edge = inst.graph.edge(e);
  std::size_t ok = 0;
  for (Index k : good) ok += cycle_verifies(inst.graph, edge.i, edge.j, k) ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(good.size());
}

}  // namespace

MatchMetrics precision_recall(const SynthInstance& inst,
                              std::span<const PartialPermutation> z) {
  const ViewingGraph& g = inst.graph;
  if (static_cast<EdgeId>(z.size()) != g.num_edges()) {
    throw DataError("precision_recall: prediction has " + std::to_string(z.size()) +
                    " edges, instance has " + std::to_string(g.num_edges()));
  }
  MatchMetrics out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const PartialPermutation& x = g.block(e);
    if (z[e].rows() != x.rows() || z[e].cols() != x.cols()) {
      throw DataError("precision_recall: shape mismatch on edge " + std::to_string(e));
    }
    if (!inst.bad[e]) continue;
    const PartialPermutation& truth = inst.truth_blocks[e];
    for (const Match& mt : x.entries()) {
      const bool in_truth = truth.contains(mt.row, mt.col);
      const bool in_pred = z[e].contains(mt.row, mt.col);
      out.relevant += in_truth ? 1 : 0;
      out.predicted += in_pred ? 1 : 0;
      out.true_positive += in_truth && in_pred ? 1 : 0;
    }
  }
  if (out.predicted == 0) {
    out.precision_by_convention = true;
  } else {
    out.precision = static_cast<double>(out.true_positive) / static_cast<double>(out.predicted);
  }
  if (out.relevant == 0) {
    out.recall_by_convention = true;
  } else {
    out.recall = static_cast<double>(out.true_positive) / static_cast<double>(out.relevant);
  }
  return out;
}

CorruptionEstimates corruption_levels_star(const SynthInstance& inst) {
  const ViewingGraph& g = inst.graph;
  CorruptionEstimates out;
  out.values.assign(static_cast<std::size_t>(g.num_edges()), 0.0);
  out.unverifiable.assign(static_cast<std::size_t>(g.num_edges()), 0);
  // Universe point -> keypoint, per image.
  std::vector<std::vector<Index>> inverse(static_cast<std::size_t>(g.num_nodes()));
  for (Index i = 0; i < g.num_nodes(); ++i) {
    inverse[i].assign(static_cast<std::size_t>(inst.universe_size), -1);
    for (const Match& mt : inst.truth[i].entries()) inverse[i][mt.col] = mt.row;
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    const auto fwd = g.match_map(e, true);
    const auto bwd = g.match_map(e, false);
    std::size_t total = 0;
    std::size_t bad = 0;
    for (Index u = 0; u < inst.universe_size; ++u) {
      const Index a = inverse[edge.i][u];
      const Index b = inverse[edge.j][u];
      if (a < 0 && b < 0) continue;
      ++total;
      bool good;
      if (a >= 0 && b >= 0) {
        good = fwd[a] == b;
      } else if (a >= 0) {
        good = fwd[a] < 0;
      } else {
        good = bwd[b] < 0;
      }
      bad += good ? 0 : 1;
    }
    if (total > 0) out.values[e] = static_cast<double>(bad) / static_cast<double>(total);
  }
  return out;
}

std::vector<Index> good_cycles(const SynthInstance& inst, EdgeId e) {
  const ViewingGraph& g = inst.graph;
  const Edge& edge = g.edge(e);
  std::vector<Index> out;
  for (Index k : co_neighborhood(g, edge.i, edge.j)) {
    if (!inst.bad[g.find_edge(edge.i, k)] && !inst.bad[g.find_edge(edge.j, k)]) {
      out.push_back(k);
    }
  }
  return out;
}

bool cycle_verifies(const ViewingGraph& g, Index i, Index j, Index k) {
  for (Index to : g.match_map(i, k)) {
    if (to < 0) return false;
  }
  for (Index to : g.match_map(j, k)) {
    if (to < 0) return false;
  }
  return true;
}

TheoremReport theorem_quantities(const SynthInstance& inst) {
  const ViewingGraph& g = inst.graph;
  TheoremReport report;
  report.m = inst.universe_size;
  double min_good_fraction = 1.0;
  std::size_t without_cycles = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    const auto neighborhood = co_neighborhood(g, edge.i, edge.j);
    if (neighborhood.empty()) {
      ++without_cycles;
      continue;
    }
    const auto good = good_cycles(inst, e);
    min_good_fraction = std::min(
        min_good_fraction,
        static_cast<double>(good.size()) / static_cast<double>(neighborhood.size()));
    if (!good.empty()) report.p_v = std::min(report.p_v, VerifyingFraction(inst, e, good));
  }
  if (without_cycles > 0) {
    std::ostringstream msg;
    msg << without_cycles << " edge(s) have no co-neighbors and were excluded from lambda";
    report.warnings.push_back(msg.str());
  }
  report.lambda = 1.0 - min_good_fraction;

  const double e = std::numbers::e;
  const double m = static_cast<double>(report.m);
  if (report.p_v > 0.0 && m > 0.0) {
    const double a = 3.0 * e * m / report.p_v;
    report.lambda_bound = 1.0 + a - std::sqrt(a * (2.0 + a));
    report.feasible = report.lambda < report.lambda_bound;
    report.r_upper = report.lambda > 0.0
                         ? (1.0 - report.lambda) * (1.0 - report.lambda) * report.p_v /
                               (6.0 * e * m * report.lambda)
                         : std::numeric_limits<double>::infinity();
  } else {
    report.warnings.push_back("p_v is zero; the separation hypotheses cannot hold");
  }
  report.beta0_upper = report.lambda > 0.0 ? 1.0 / (2.0 * report.lambda)
                                           : std::numeric_limits<double>::infinity();
  return report;
}

std::string to_string(SeparationStatus status) {
  switch (status) {
    case SeparationStatus::kPass:
      return "pass";
    case SeparationStatus::kFail:
      return "fail";
    default:
      return "hypotheses unmet";
  }
}

SeparationResult separation_check(std::span<const CorruptionEstimates> history,
                                  const SynthInstance& inst,
                                  const TheoremReport& report,
                                  const CempConfig& cfg) {
  SeparationResult out;
  const BetaSchedule& sched = cfg.schedule;
  if (!sched.is_geometric()) {
    out.reason = "beta schedule is capped, not geometric";
    return out;
  }
  if (!report.feasible) {
    out.reason = "lambda or p_v outside the admissible range";
    return out;
  }
  if (sched.beta0 > report.beta0_upper) {
    out.reason = "beta0 exceeds 1/(2 lambda)";
    return out;
  }
  if (!(sched.growth > 1.0 && sched.growth < report.r_upper)) {
    out.reason = "growth ratio outside (1, r_upper)";
    return out;
  }

  const ViewingGraph& g = inst.graph;
  const CorruptionEstimates star = corruption_levels_star(inst);
  const double factor = report.p_v / (3.0 * std::numbers::e) * (1.0 - report.lambda);
  out.good_margin = std::numeric_limits<double>::infinity();
  out.bad_margin = std::numeric_limits<double>::infinity();
  out.min_bad_bound_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t < history.size(); ++t) {
    const double good_bound =
        1.0 / (2.0 * sched.beta0 * std::pow(sched.growth, static_cast<double>(t)));
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const double s = history[t].values[e];
      if (!inst.bad[e]) {
        out.max_good_s = std::max(out.max_good_s, s);
        out.good_margin = std::min(out.good_margin, good_bound - s);
        if (s > good_bound) ++out.violations;
      } else {
        const double lower = factor * star.values[e];
        out.bad_margin = std::min(out.bad_margin, s - lower);
        if (lower > 0.0) out.min_bad_bound_ratio = std::min(out.min_bad_bound_ratio, s / lower);
        if (s < lower) ++out.violations;
      }
    }
  }
  out.status = out.violations == 0 ? SeparationStatus::kPass : SeparationStatus::kFail;
  return out;
}

LemmaReport lemma_suite(const SynthInstance& inst) {
  const ViewingGraph& g = inst.graph;
  const CorruptionEstimates star = corruption_levels_star(inst);
  const double m = static_cast<double>(inst.universe_size);
  LemmaReport report;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    if (!inst.bad[e]) {
      for (Index k : co_neighborhood(g, edge.i, edge.j)) {
        const auto d = inconsistency(cycle_stats(g, edge.i, edge.j, k));
        if (!d) continue;
        ++report.lemma1_checked;
        const double rhs =
            m * (star.values[g.find_edge(edge.i, k)] + star.values[g.find_edge(edge.j, k)]);
        if (*d > rhs) report.violations.push_back({1, e, k, *d, rhs});
      }
    }
    const auto good = good_cycles(inst, e);
    if (good.empty()) continue;
    ++report.lemma2_checked;
    double sum = 0.0;
    for (Index k : good) sum += inconsistency(cycle_stats(g, edge.i, edge.j, k)).value_or(0.0);
    const double mean = sum / static_cast<double>(good.size());
    const double lhs = VerifyingFraction(inst, e, good) * star.values[e] / 3.0;
    if (lhs > mean) report.violations.push_back({2, e, -1, lhs, mean});
  }
  return report;
}

std::size_t count_inconsistent_triangles(const ViewingGraph& g,
                                         std::span<const PartialPermutation> z) {
  if (static_cast<EdgeId>(z.size()) != g.num_edges()) {
    throw DataError("count_inconsistent_triangles: edge count mismatch");
  }
  std::size_t bad = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    for (Index k : co_neighborhood(g, edge.i, edge.j)) {
      if (k <= edge.j) continue;  // each triangle once, i < j < k
      const std::array<Index, 3> v{edge.i, edge.j, k};
      bool ok = true;
      for (int a = 0; a < 3 && ok; ++a) {
        for (int b = 0; b < 3 && ok; ++b) {
          if (a == b) continue;
          const int c = 3 - a - b;
          ok = entrywise_leq(compose(Oriented(g, z, v[a], v[b]), Oriented(g, z, v[b], v[c])),
                             Oriented(g, z, v[a], v[c]));
        }
      }
      bad += ok ? 0 : 1;
    }
  }
  return bad;
}

}  // namespace matchfame
