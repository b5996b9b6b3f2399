#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matchfame/cemp.hpp"
#include "matchfame/solver.hpp"
#include "matchfame/synth.hpp"

namespace matchfame {

inline constexpr int kFormatVersion = 1;

// meta.json of a dataset directory.
struct DatasetMeta {
  int format_version = kFormatVersion;
  std::optional<Index> universe_size;  // m, when known
  std::vector<Index> keypoint_counts;
  std::vector<Edge> edges;  // canonical i < j, ascending
  std::string model;        // "ucm", "lbc", "lac" or empty
  std::map<std::string, double> model_params;
  std::optional<std::uint64_t> seed;
  std::optional<double> p;
  std::optional<double> p_include;
};

// On-disk dataset:
//   meta.json    DatasetMeta
//   obs.coo      "i j r c" per observed match, i < j, sorted
//   gt_abs.coo   "i r k" per ground-truth entry P*_i(r, k) = 1 (optional)
//   labels.tsv   "i j g|b" per edge (optional)
struct Dataset {
  DatasetMeta meta;
  ViewingGraph graph;
  std::optional<std::vector<PartialPermutation>> truth;
  std::optional<std::vector<std::uint8_t>> labels;  // 1 = bad, edge order
};

Dataset dataset_from_instance(const SynthInstance& inst, const SynthConfig& cfg);

// Requires ground truth; edge labels are recomputed and, when labels.tsv was
// present, must agree with it (DataError otherwise).
SynthInstance instance_from_dataset(const Dataset& data);

void write_dataset(const std::filesystem::path& dir, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& dir);

// Result files. Each line is newline-terminated with single-space separators.
//   s_hat.tsv       "i j value flag" (flag 1 = unverifiable)
//   matches.coo     "i j r c"
//   assignment.coo  "i r k"
void write_s_hat(const std::filesystem::path& file, const ViewingGraph& g,
                 const CorruptionEstimates& s);
CorruptionEstimates read_s_hat(const std::filesystem::path& file, const ViewingGraph& g);

void write_matches(const std::filesystem::path& file, const ViewingGraph& g,
                   std::span<const PartialPermutation> z);
std::vector<PartialPermutation> read_matches(const std::filesystem::path& file,
                                             const ViewingGraph& g);

void write_assignment(const std::filesystem::path& file, const AbsoluteAssignment& p);
AbsoluteAssignment read_assignment(const std::filesystem::path& file,
                                   std::span<const Index> keypoint_counts,
                                   Index universe_size);

// Whole-file helpers used by the writers; text is written verbatim.
void write_text(const std::filesystem::path& file, const std::string& text);
std::string read_text(const std::filesystem::path& file);

}  // namespace matchfame
