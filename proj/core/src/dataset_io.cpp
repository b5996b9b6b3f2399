#include "matchfame/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace matchfame {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Splits one line into exactly `count` space-separated fields.
std::vector<std::string_view> Fields(std::string_view line, std::size_t count,
                                     const fs::path& file, std::size_t lineno) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find(' ', pos);
    const std::size_t end = next == std::string_view::npos ? line.size() : next;
    out.push_back(line.substr(pos, end - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (out.size() != count || std::any_of(out.begin(), out.end(),
                                         [](std::string_view f) { return f.empty(); })) {
    throw DataError(file.string() + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(count) + " space-separated fields");
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view field, const fs::path& file, std::size_t lineno) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError(file.string() + ":" + std::to_string(lineno) + ": bad number '" +
                    std::string(field) + "'");
  }
  return value;
}

// Calls fn(fields, lineno) for every line. The file must be empty or end in
// a newline.
template <typename Fn>
void ForEachLine(const fs::path& file, std::size_t count, Fn&& fn) {
  const std::string text = read_text(file);
  if (!text.empty() && text.back() != '\n') {
    throw DataError(file.string() + ": missing final newline");
  }
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    ++lineno;
    fn(Fields(std::string_view(text).substr(pos, end - pos), count, file, lineno), lineno);
    pos = end + 1;
  }
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json MetaToJson(const DatasetMeta& meta) {
  json j;
  j["format_version"] = meta.format_version;
  j["n"] = meta.keypoint_counts.size();
  if (meta.universe_size) j["m"] = *meta.universe_size;
  j["keypoint_counts"] = meta.keypoint_counts;
  json edges = json::array();
  for (const Edge& e : meta.edges) edges.push_back({e.i, e.j});
  j["edges"] = std::move(edges);
  if (!meta.model.empty()) {
    j["model"] = {{"name", meta.model}, {"params", meta.model_params}};
  }
  if (meta.seed) j["seed"] = *meta.seed;
  if (meta.p) j["p"] = *meta.p;
  if (meta.p_include) j["p_include"] = *meta.p_include;
  return j;
}

DatasetMeta MetaFromJson(const json& j, const fs::path& file) {
  try {
    DatasetMeta meta;
    meta.format_version = j.at("format_version").get<int>();
    if (meta.format_version != kFormatVersion) {
      throw DataError(file.string() + ": unsupported format_version " +
                      std::to_string(meta.format_version));
    }
    meta.keypoint_counts = j.at("keypoint_counts").get<std::vector<Index>>();
    if (j.at("n").get<std::size_t>() != meta.keypoint_counts.size()) {
      throw DataError(file.string() + ": n disagrees with keypoint_counts");
    }
    if (j.contains("m")) meta.universe_size = j.at("m").get<Index>();
    for (const auto& e : j.at("edges")) {
      meta.edges.push_back({e.at(0).get<Index>(), e.at(1).get<Index>()});
    }
    if (j.contains("model")) {
      meta.model = j.at("model").at("name").get<std::string>();
      meta.model_params =
          j.at("model").at("params").get<std::map<std::string, double>>();
    }
    if (j.contains("seed")) meta.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("p")) meta.p = j.at("p").get<double>();
    if (j.contains("p_include")) meta.p_include = j.at("p_include").get<double>();
    return meta;
  } catch (const json::exception& ex) {
    throw DataError(file.string() + ": " + ex.what());
  }
}

}  // namespace

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + file.string() + " for writing");
  out << text;
  if (!out) throw DataError("write failed: " + file.string());
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Dataset dataset_from_instance(const SynthInstance& inst, const SynthConfig& cfg) {
  Dataset data;
  data.graph = inst.graph;
  data.truth = inst.truth;
  data.labels = inst.bad;
  DatasetMeta& meta = data.meta;
  meta.universe_size = inst.universe_size;
  meta.keypoint_counts.assign(inst.graph.keypoint_counts().begin(),
                              inst.graph.keypoint_counts().end());
  meta.edges.assign(inst.graph.edges().begin(), inst.graph.edges().end());
  meta.model = model_name(cfg.model);
  std::visit(
      [&meta](const auto& mdl) {
        using T = std::decay_t<decltype(mdl)>;
        if constexpr (std::is_same_v<T, UcmModel>) {
          meta.model_params["q"] = mdl.q;
        } else {
          meta.model_params["n_c"] = mdl.seeds;
          meta.model_params["edge_prob"] = mdl.edge_prob;
        }
      },
      cfg.model);
  meta.seed = cfg.seed;
  meta.p = cfg.p;
  meta.p_include = cfg.p_include;
  return data;
}

SynthInstance instance_from_dataset(const Dataset& data) {
  if (!data.truth) throw DataError("dataset has no ground truth (gt_abs.coo)");
  if (!data.meta.universe_size) throw DataError("dataset meta has no universe size m");
  std::vector<std::pair<Edge, PartialPermutation>> edges;
  for (EdgeId e = 0; e < data.graph.num_edges(); ++e) {
    edges.emplace_back(data.graph.edge(e), data.graph.block(e));
  }
  SynthInstance inst = make_instance(*data.meta.universe_size, *data.truth, std::move(edges));
  if (data.labels && *data.labels != inst.bad) {
    throw DataError("labels.tsv disagrees with the ground truth blocks");
  }
  return inst;
}

void write_dataset(const fs::path& dir, const Dataset& data) {
  fs::create_directories(dir);
  write_text(dir / "meta.json", MetaToJson(data.meta).dump(2) + "\n");
  write_matches(dir / "obs.coo", data.graph,
                [&] {
                  std::vector<PartialPermutation> blocks;
                  for (EdgeId e = 0; e < data.graph.num_edges(); ++e) {
                    blocks.push_back(data.graph.block(e));
                  }
                  return blocks;
                }());
  if (data.truth) {
    AbsoluteAssignment truth;
    truth.universe_size = data.meta.universe_size.value_or(0);
    truth.blocks = *data.truth;
    write_assignment(dir / "gt_abs.coo", truth);
  }
  if (data.labels) {
    std::string text;
    for (EdgeId e = 0; e < data.graph.num_edges(); ++e) {
      const Edge& edge = data.graph.edge(e);
      text += std::to_string(edge.i) + " " + std::to_string(edge.j) +
              ((*data.labels)[e] ? " b\n" : " g\n");
    }
    write_text(dir / "labels.tsv", text);
  }
}

Dataset read_dataset(const fs::path& dir) {
  Dataset data;
  const fs::path meta_file = dir / "meta.json";
  json j;
  try {
    j = json::parse(read_text(meta_file));
  } catch (const json::exception& ex) {
    throw DataError(meta_file.string() + ": " + ex.what());
  }
  data.meta = MetaFromJson(j, meta_file);
  const auto& counts = data.meta.keypoint_counts;
  const auto n = static_cast<Index>(counts.size());

  std::map<Edge, std::vector<Match>> entries;
  for (const Edge& e : data.meta.edges) {
    if (!(e.i < e.j)) throw DataError(meta_file.string() + ": edges must satisfy i < j");
    if (!entries.emplace(e, std::vector<Match>{}).second) {
      throw DataError(meta_file.string() + ": duplicate edge in census");
    }
  }
  const fs::path obs = dir / "obs.coo";
  ForEachLine(obs, 4, [&](const auto& f, std::size_t lineno) {
    const Edge e{ParseNumber<Index>(f[0], obs, lineno), ParseNumber<Index>(f[1], obs, lineno)};
    auto it = entries.find(e);
    if (it == entries.end()) {
      throw DataError(obs.string() + ":" + std::to_string(lineno) + ": edge (" +
                      std::to_string(e.i) + "," + std::to_string(e.j) +
                      ") missing from the meta edge census");
    }
    it->second.push_back(
        {ParseNumber<Index>(f[2], obs, lineno), ParseNumber<Index>(f[3], obs, lineno)});
  });
  std::vector<std::pair<Edge, PartialPermutation>> edges;
  for (auto& [e, list] : entries) {
    if (e.i < 0 || e.j >= n) throw DataError(meta_file.string() + ": edge out of range");
    edges.emplace_back(e, PartialPermutation::FromEntries(counts[e.i], counts[e.j],
                                                          std::move(list)));
  }
  data.graph = ViewingGraph(counts, std::move(edges));

  if (fs::exists(dir / "gt_abs.coo")) {
    if (!data.meta.universe_size) {
      throw DataError(meta_file.string() + ": gt_abs.coo present but m is missing");
    }
    data.truth = read_assignment(dir / "gt_abs.coo", counts, *data.meta.universe_size).blocks;
  }
  if (fs::exists(dir / "labels.tsv")) {
    const fs::path file = dir / "labels.tsv";
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(data.graph.num_edges()), 0);
    std::vector<char> seen(labels.size(), 0);
    ForEachLine(file, 3, [&](const auto& f, std::size_t lineno) {
      const EdgeId e = data.graph.find_edge(ParseNumber<Index>(f[0], file, lineno),
                                            ParseNumber<Index>(f[1], file, lineno));
      if (e < 0 || (f[2] != "g" && f[2] != "b")) {
        throw DataError(file.string() + ":" + std::to_string(lineno) + ": bad label line");
      }
      labels[e] = f[2] == "b" ? 1 : 0;
      seen[e] = 1;
    });
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw DataError(file.string() + ": not every edge is labeled");
    }
    data.labels = std::move(labels);
  }
  return data;
}

void write_s_hat(const fs::path& file, const ViewingGraph& g, const CorruptionEstimates& s) {
  if (static_cast<EdgeId>(s.size()) != g.num_edges()) {
    throw DataError("write_s_hat: estimate count does not match edges");
  }
  std::string text;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    text += std::to_string(edge.i) + " " + std::to_string(edge.j) + " " +
            FormatDouble(s.values[e]) + (s.unverifiable[e] ? " 1\n" : " 0\n");
  }
  write_text(file, text);
}

CorruptionEstimates read_s_hat(const fs::path& file, const ViewingGraph& g) {
  CorruptionEstimates s;
  s.values.assign(static_cast<std::size_t>(g.num_edges()), 0.0);
  s.unverifiable.assign(static_cast<std::size_t>(g.num_edges()), 0);
  std::vector<char> seen(s.values.size(), 0);
  ForEachLine(file, 4, [&](const auto& f, std::size_t lineno) {
    const EdgeId e = g.find_edge(ParseNumber<Index>(f[0], file, lineno),
                                 ParseNumber<Index>(f[1], file, lineno));
    if (e < 0) throw DataError(file.string() + ":" + std::to_string(lineno) + ": unknown edge");
    s.values[e] = ParseNumber<double>(f[2], file, lineno);
    s.unverifiable[e] = ParseNumber<int>(f[3], file, lineno) != 0 ? 1 : 0;
    seen[e] = 1;
  });
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw DataError(file.string() + ": not every edge has an estimate");
  }
  return s;
}

void write_matches(const fs::path& file, const ViewingGraph& g,
                   std::span<const PartialPermutation> z) {
  if (static_cast<EdgeId>(z.size()) != g.num_edges()) {
    throw DataError("write_matches: block count does not match edges");
  }
  std::string text;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const std::string prefix =
        std::to_string(g.edge(e).i) + " " + std::to_string(g.edge(e).j) + " ";
    for (const Match& mt : z[e].entries()) {
      text += prefix + std::to_string(mt.row) + " " + std::to_string(mt.col) + "\n";
    }
  }
  write_text(file, text);
}

std::vector<PartialPermutation> read_matches(const fs::path& file, const ViewingGraph& g) {
  std::vector<std::vector<Match>> entries(static_cast<std::size_t>(g.num_edges()));
  ForEachLine(file, 4, [&](const auto& f, std::size_t lineno) {
    const Index i = ParseNumber<Index>(f[0], file, lineno);
    const Index j = ParseNumber<Index>(f[1], file, lineno);
    const EdgeId e = i < j ? g.find_edge(i, j) : -1;
    if (e < 0) {
      throw DataError(file.string() + ":" + std::to_string(lineno) + ": edge (" +
                      std::to_string(i) + "," + std::to_string(j) + ") not in the graph");
    }
    entries[e].push_back(
        {ParseNumber<Index>(f[2], file, lineno), ParseNumber<Index>(f[3], file, lineno)});
  });
  std::vector<PartialPermutation> out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    out.push_back(PartialPermutation::FromEntries(
        g.keypoint_count(edge.i), g.keypoint_count(edge.j), std::move(entries[e])));
  }
  return out;
}

void write_assignment(const fs::path& file, const AbsoluteAssignment& p) {
  std::string text;
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    for (const Match& mt : p.blocks[i].entries()) {
      text += std::to_string(i) + " " + std::to_string(mt.row) + " " +
              std::to_string(mt.col) + "\n";
    }
  }
  write_text(file, text);
}

AbsoluteAssignment read_assignment(const fs::path& file,
                                   std::span<const Index> keypoint_counts,
                                   Index universe_size) {
  std::vector<std::vector<Match>> entries(keypoint_counts.size());
  ForEachLine(file, 3, [&](const auto& f, std::size_t lineno) {
    const Index i = ParseNumber<Index>(f[0], file, lineno);
    if (i < 0 || static_cast<std::size_t>(i) >= entries.size()) {
      throw DataError(file.string() + ":" + std::to_string(lineno) + ": node out of range");
    }
    entries[i].push_back(
        {ParseNumber<Index>(f[1], file, lineno), ParseNumber<Index>(f[2], file, lineno)});
  });
  AbsoluteAssignment p;
  p.universe_size = universe_size;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    p.blocks.push_back(PartialPermutation::FromEntries(keypoint_counts[i], universe_size,
                                                       std::move(entries[i])));
  }
  return p;
}

}  // namespace matchfame
