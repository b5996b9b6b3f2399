#include "matchfame/cemp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace matchfame {

double BetaSchedule::operator()(int t) const {
  return std::min(beta0 * std::pow(growth, t), cap);
}

void CempConfig::validate() const {
  if (iterations < 0) throw std::invalid_argument("CEMP: T must be >= 0");
  if (!(schedule.beta0 > 0.0)) throw std::invalid_argument("CEMP: beta0 must be > 0");
  if (!(schedule.growth >= 1.0)) {
    throw std::invalid_argument("CEMP: beta growth must be >= 1");
  }
  if (!(schedule.cap > 0.0)) throw std::invalid_argument("CEMP: beta cap must be > 0");
}

CorruptionEstimates cemp_init(const InconsistencyMap& d) {
  const auto num_edges = static_cast<std::size_t>(d.num_edges());
  CorruptionEstimates s;
  s.values.assign(num_edges, 1.0);
  s.unverifiable.assign(num_edges, 0);
  for (std::size_t e = 0; e < num_edges; ++e) {
    const auto cycles = d.cycles(static_cast<EdgeId>(e));
    if (cycles.empty()) {
      s.unverifiable[e] = 1;
      continue;
    }
    double sum = 0.0;
    for (const CycleTerm& c : cycles) sum += c.d;
    s.values[e] = sum / static_cast<double>(cycles.size());
  }
  return s;
}

CorruptionEstimates cemp_iterate(const InconsistencyMap& d,
                                 const CorruptionEstimates& s, double beta,
                                 const ExecutionOptions& exec) {
  if (!(beta >= 0.0)) throw std::invalid_argument("cemp_iterate: beta must be >= 0");
  const auto num_edges = static_cast<std::size_t>(d.num_edges());
  CorruptionEstimates next = s;

  ParallelFor(num_edges, exec.threads, [&](std::size_t e) {
    if (s.unverifiable[e]) return;
    const auto cycles = d.cycles(static_cast<EdgeId>(e));
    // Weights are shifted by the smallest exponent so that large beta cannot
    // underflow every weight at once; the ratio is unchanged.
    double min_exponent = std::numeric_limits<double>::infinity();
    for (const CycleTerm& c : cycles) {
      min_exponent = std::min(min_exponent, s.values[c.edge_ik] + s.values[c.edge_jk]);
    }
    thread_local std::vector<double> weights;
    thread_local std::vector<double> weighted;
    weights.resize(cycles.size());
    weighted.resize(cycles.size());
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      const double exponent =
          s.values[cycles[c].edge_ik] + s.values[cycles[c].edge_jk] - min_exponent;
      weights[c] = std::exp(-beta * exponent);
      weighted[c] = weights[c] * cycles[c].d;
    }
    const double z = Sum(weights, exec.reduction);
    next.values[e] = Sum(weighted, exec.reduction) / z;
  });
  return next;
}

CorruptionEstimates cemp_partial(const InconsistencyMap& d, const CempConfig& cfg,
                                 std::vector<CorruptionEstimates>* history) {
  cfg.validate();
  CorruptionEstimates s = cemp_init(d);
  if (history) {
    history->clear();
    history->push_back(s);
  }
  for (int t = 0; t < cfg.iterations; ++t) {
    s = cemp_iterate(d, s, cfg.schedule(t), cfg.exec);
    if (history) history->push_back(s);
  }
  return s;
}

CorruptionEstimates cemp_partial(const ViewingGraph& g, const CempConfig& cfg,
                                 std::vector<CorruptionEstimates>* history) {
  return cemp_partial(all_inconsistencies(g, cfg.exec.threads), cfg, history);
}

}  // namespace matchfame
