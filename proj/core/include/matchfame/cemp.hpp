#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "matchfame/cycle_measure.hpp"
#include "matchfame/parallel.hpp"
#include "matchfame/viewing_graph.hpp"

namespace matchfame {

// beta_t = min(beta0 * growth^t, cap). The default is min(1.2^t, 40); a
// geometric schedule without cap is what the separation guarantee assumes.
struct BetaSchedule {
  double beta0 = 1.0;
  double growth = 1.2;
  double cap = 40.0;

  static BetaSchedule Default() { return {}; }
  static BetaSchedule Geometric(double beta0, double ratio) {
    return {beta0, ratio, std::numeric_limits<double>::infinity()};
  }

  double operator()(int t) const;
  bool is_geometric() const { return cap == std::numeric_limits<double>::infinity(); }
};

struct CempConfig {
  int iterations = 25;  // T
  BetaSchedule schedule;
  ExecutionOptions exec;

  // Throws std::invalid_argument for T < 0, beta0 <= 0, growth < 1 or
  // cap <= 0 (the schedule must be positive and nondecreasing).
  void validate() const;
};

// Per-edge corruption level in [0, 1], aligned with ViewingGraph edge order.
// `unverifiable[e]` marks edges without a single informative cycle; their
// value is pinned to 1.
struct CorruptionEstimates {
  std::vector<double> values;
  std::vector<std::uint8_t> unverifiable;

  std::size_t size() const { return values.size(); }
};

// s^(0): plain mean of d_ijk over informative k.
CorruptionEstimates cemp_init(const InconsistencyMap& d);

// One reweighting pass with w_ijk = exp(-beta (s_ik + s_jk)). Reads `s`,
// returns a fresh estimate. Unverifiable edges are copied through.
CorruptionEstimates cemp_iterate(const InconsistencyMap& d,
                                 const CorruptionEstimates& s, double beta,
                                 const ExecutionOptions& exec = {});

// cemp_init followed by T passes with beta_0 .. beta_{T-1}. When `history`
// is non-null it receives s^(0) .. s^(T).
CorruptionEstimates cemp_partial(const ViewingGraph& g, const CempConfig& cfg,
                                 std::vector<CorruptionEstimates>* history = nullptr);

CorruptionEstimates cemp_partial(const InconsistencyMap& d, const CempConfig& cfg,
                                 std::vector<CorruptionEstimates>* history = nullptr);

}  // namespace matchfame
