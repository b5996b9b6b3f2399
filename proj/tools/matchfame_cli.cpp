#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matchfame/cemp.hpp"
#include "matchfame/dataset_io.hpp"
#include "matchfame/eval.hpp"
#include "matchfame/solver.hpp"
#include "matchfame/spectral.hpp"
#include "matchfame/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace matchfame;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3, kCheckFailed = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void WriteJson(const fs::path& file, const json& j) { write_text(file, j.dump(2) + "\n"); }

double MsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string model = "ucm";
  Index n = 100;
  Index m = 20;
  double p = 0.5;
  double p_include = 0.8;
  double q = 0.0;
  Index nc = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int RunSynth(const SynthArgs& a) {
  SynthConfig cfg;
  cfg.n = a.n;
  cfg.m = a.m;
  cfg.p = a.p;
  cfg.p_include = a.p_include;
  cfg.seed = a.seed;
  if (a.model == "ucm") {
    cfg.model = UcmModel{a.q};
  } else if (a.model == "lbc") {
    cfg.model = LbcModel{a.nc};
  } else {
    cfg.model = LacModel{a.nc};
  }
  if (a.model != "ucm" && a.q != 0.0) throw UsageError("--q only applies to --model ucm");
  if (a.model == "ucm" && a.nc != 0) throw UsageError("--nc only applies to --model lbc/lac");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const SynthInstance inst = generate(cfg);
  write_dataset(a.out, dataset_from_instance(inst, cfg));
  json config{{"command", "synth"}, {"model", a.model}, {"n", a.n},   {"m", a.m},
              {"p", a.p},           {"pI", a.p_include}, {"q", a.q},  {"nc", a.nc},
              {"seed", a.seed}};
  WriteJson(fs::path(a.out) / "config.json", config);
  std::cout << "wrote " << a.out << ": " << inst.graph.num_edges() << " edges, "
            << inst.num_bad() << " bad\n";
  return kOk;
}

// ---- run -----------------------------------------------------------------

struct RunArgs {
  std::string method = "fame";
  std::string in;
  std::string out;
  int T = 25;
  double beta0 = 1.0;
  double beta_growth = 1.2;
  double beta_cap = 40.0;
  double gamma = 4.0;
  int t0 = 60;
  double theta = 0.0;
  double mhat_factor = 2.0;
  std::string fill = "col";
  bool no_weight_norm = false;
  bool deterministic = false;
  int threads = 1;
  std::uint64_t seed = 0;
};

ExecutionOptions Exec(const RunArgs& a) {
  return {a.threads, a.deterministic ? ReductionMode::kOrdered : ReductionMode::kPairwise};
}

CempConfig MakeCempConfig(const RunArgs& a) {
  CempConfig c;
  c.iterations = a.T;
  c.schedule = {a.beta0, a.beta_growth, a.beta_cap};
  c.exec = Exec(a);
  return c;
}

SolverConfig MakeSolverConfig(const RunArgs& a) {
  SolverConfig c;
  c.gamma = a.gamma;
  c.max_iterations = a.t0;
  c.theta = a.theta;
  c.mhat_factor = a.mhat_factor;
  c.fill = a.fill == "row" ? FillMode::kZeroRow : FillMode::kZeroColumn;
  c.normalize_weights = !a.no_weight_norm;
  c.seed = a.seed;
  c.exec = Exec(a);
  return c;
}

json ResolvedConfig(const RunArgs& a) {
  return json{{"command", "run"},
              {"method", a.method},
              {"in", a.in},
              {"T", a.T},
              {"beta0", a.beta0},
              {"beta_growth", a.beta_growth},
              {"beta_cap", std::isinf(a.beta_cap) ? json("inf") : json(a.beta_cap)},
              {"gamma", a.gamma},
              {"t0", a.t0},
              {"theta", a.theta},
              {"mhat_factor", a.mhat_factor},
              {"fill", a.fill},
              {"normalize_weights", !a.no_weight_norm},
              {"deterministic", a.deterministic},
              {"threads", a.threads},
              {"seed", a.seed}};
}

int RunSolve(const RunArgs& a) {
  const CempConfig cemp_cfg = MakeCempConfig(a);
  const SolverConfig solver_cfg = MakeSolverConfig(a);
  try {
    cemp_cfg.validate();
    solver_cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Dataset data = read_dataset(a.in);
  const ViewingGraph& g = data.graph;
  fs::create_directories(a.out);
  WriteJson(fs::path(a.out) / "config.json", ResolvedConfig(a));

  json metrics{{"method", a.method}};
  std::optional<AbsoluteAssignment> assignment;
  std::vector<PartialPermutation> matches;

  if (a.method == "cemp") {
    const auto start = std::chrono::steady_clock::now();
    const CorruptionEstimates s = cemp_partial(g, cemp_cfg);
    metrics["runtime_ms"] = {{"cemp", MsSince(start)}};
    metrics["cemp_iterations"] = a.T;
    write_s_hat(fs::path(a.out) / "s_hat.tsv", g, s);
  } else if (a.method == "fame") {
    const SolverResult r = match_fame(g, cemp_cfg, solver_cfg);
    write_s_hat(fs::path(a.out) / "s_hat.tsv", g, r.s_hat);
    metrics["runtime_ms"] = {{"cemp", r.times.cemp_ms},
                             {"init", r.times.init_ms},
                             {"ppm", r.times.ppm_ms}};
    metrics["cemp_iterations"] = a.T;
    metrics["ppm_iterations"] = r.iterations;
    metrics["converged"] = r.converged;
    assignment = r.assignment;
    matches = r.matches;
  } else if (a.method == "ppm") {
    const auto start = std::chrono::steady_clock::now();
    const SolverResult r = ppm_pipeline(g, solver_cfg);
    metrics["runtime_ms"] = {{"total", MsSince(start)}};
    metrics["ppm_iterations"] = r.iterations;
    metrics["converged"] = r.converged;
    assignment = r.assignment;
    matches = r.matches;
  } else {
    SpectralOptions opt;
    opt.seed = a.seed;
    const auto start = std::chrono::steady_clock::now();
    const SpectralResult r =
        spectral_baseline(g, estimate_universe_size(g, a.mhat_factor), opt);
    metrics["runtime_ms"] = {{"total", MsSince(start)}};
    metrics["sweeps"] = r.sweeps;
    metrics["converged"] = r.converged;
    if (!r.converged) std::cerr << "warning: spectral iteration did not converge\n";
    assignment = r.assignment;
    matches = r.matches;
  }

  if (assignment) {
    write_matches(fs::path(a.out) / "matches.coo", g, matches);
    write_assignment(fs::path(a.out) / "assignment.coo", *assignment);
    metrics["universe_size"] = assignment->universe_size;
  }
  WriteJson(fs::path(a.out) / "metrics.json", metrics);
  return kOk;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string out;
  bool theorem_check = false;
  bool lemma_check = false;
  int T = 25;
  double beta0 = 20.0;
  double beta_growth = 1.1;
};

int RunEval(const EvalArgs& a) {
  const Dataset data = read_dataset(a.gt);
  if (!data.truth) throw DataError(a.gt + ": no gt_abs.coo");
  const SynthInstance inst = instance_from_dataset(data);
  const auto z = read_matches(fs::path(a.pred) / "matches.coo", inst.graph);

  int code = kOk;
  const MatchMetrics m = precision_recall(inst, z);
  json out{{"precision", m.precision},
           {"recall", m.recall},
           {"true_positive", m.true_positive},
           {"predicted", m.predicted},
           {"relevant", m.relevant},
           {"precision_by_convention", m.precision_by_convention},
           {"recall_by_convention", m.recall_by_convention},
           {"bad_edges", inst.num_bad()},
           {"inconsistent_triangles", count_inconsistent_triangles(inst.graph, z)}};

  if (a.theorem_check) {
    const TheoremReport report = theorem_quantities(inst);
    CempConfig cfg;
    cfg.iterations = a.T;
    cfg.schedule = BetaSchedule::Geometric(a.beta0, a.beta_growth);
    std::vector<CorruptionEstimates> history;
    cemp_partial(inst.graph, cfg, &history);
    const SeparationResult sep = separation_check(history, inst, report, cfg);
    out["theorem"] = {{"lambda", report.lambda},
                      {"p_v", report.p_v},
                      {"m", report.m},
                      {"lambda_bound", report.lambda_bound},
                      {"r_upper", report.r_upper},
                      {"beta0_upper", report.beta0_upper},
                      {"feasible", report.feasible},
                      {"warnings", report.warnings},
                      {"status", to_string(sep.status)},
                      {"reason", sep.reason},
                      {"good_margin", sep.good_margin},
                      {"bad_margin", sep.bad_margin},
                      {"violations", sep.violations}};
    if (sep.status == SeparationStatus::kHypothesesUnmet) {
      std::cerr << "warning: separation hypotheses unmet: " << sep.reason << "\n";
    } else if (sep.status == SeparationStatus::kFail) {
      code = kCheckFailed;
    }
  }
  if (a.lemma_check) {
    const LemmaReport lr = lemma_suite(inst);
    out["lemmas"] = {{"lemma1_checked", lr.lemma1_checked},
                     {"lemma2_checked", lr.lemma2_checked},
                     {"violations", lr.violations.size()}};
    if (!lr.violations.empty()) code = kCheckFailed;
  }

  const std::string text = out.dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_text(a.out, text);
  }
  return code;
}

// ---- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string fix = "n=20";
  std::vector<Index> n_values;
  std::vector<Index> m_values;
  double q = 0.5;
  int repeats = 1;
  bool spectral = true;
  std::uint64_t seed = 0;
};

int RunBench(const BenchArgs& a) {
  const auto eq = a.fix.find('=');
  if (eq == std::string::npos) throw UsageError("--fix expects n=<value> or m=<value>");
  const std::string key = a.fix.substr(0, eq);
  Index fixed = 0;
  try {
    fixed = static_cast<Index>(std::stol(a.fix.substr(eq + 1)));
  } catch (const std::exception&) {
    throw UsageError("--fix: bad value '" + a.fix.substr(eq + 1) + "'");
  }
  if (key != "n" && key != "m") throw UsageError("--fix expects n=<value> or m=<value>");
  const std::vector<Index>& sweep = key == "n" ? a.m_values : a.n_values;
  if (sweep.empty()) throw UsageError(key == "n" ? "--m list required" : "--n list required");
  if (a.repeats < 1) throw UsageError("--repeats must be >= 1");

  std::printf("%-6s %-6s %12s %12s\n", "n", "m", "fame_s", a.spectral ? "spectral_s" : "-");
  for (Index v : sweep) {
    SynthConfig cfg;
    cfg.n = key == "n" ? fixed : v;
    cfg.m = key == "n" ? v : fixed;
    cfg.model = UcmModel{a.q};
    std::vector<double> fame, spec;
    for (int r = 0; r < a.repeats; ++r) {
      cfg.seed = a.seed + static_cast<std::uint64_t>(r);
      const SynthInstance inst = generate(cfg);
      auto start = std::chrono::steady_clock::now();
      match_fame(inst.graph, CempConfig{}, SolverConfig{});
      fame.push_back(MsSince(start) / 1000.0);
      if (a.spectral) {
        start = std::chrono::steady_clock::now();
        spectral_baseline(inst.graph, estimate_universe_size(inst.graph, 2.0));
        spec.push_back(MsSince(start) / 1000.0);
      }
    }
    auto median = [](std::vector<double> x) {
      std::sort(x.begin(), x.end());
      return x[x.size() / 2];
    };
    if (a.spectral) {
      std::printf("%-6d %-6d %12.4f %12.4f\n", cfg.n, cfg.m, median(fame), median(spec));
    } else {
      std::printf("%-6d %-6d %12.4f %12s\n", cfg.n, cfg.m, median(fame), "-");
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matchfame: partial permutation synchronization"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "generate a synthetic dataset");
  s->add_option("--model", synth.model)->check(CLI::IsMember({"ucm", "lbc", "lac"}));
  s->add_option("--n", synth.n);
  s->add_option("--m", synth.m);
  s->add_option("--p", synth.p);
  s->add_option("--pI", synth.p_include);
  s->add_option("--q", synth.q);
  s->add_option("--nc", synth.nc);
  s->add_option("--seed", synth.seed);
  s->add_option("--out", synth.out)->required();

  RunArgs run;
  auto* r = app.add_subcommand("run", "solve a dataset");
  r->add_option("--method", run.method)->check(CLI::IsMember({"fame", "cemp", "ppm", "spectral"}));
  r->add_option("--in", run.in)->required();
  r->add_option("--out", run.out)->required();
  r->add_option("--T", run.T);
  r->add_option("--beta0", run.beta0);
  r->add_option("--beta-growth", run.beta_growth);
  r->add_option("--beta-cap", run.beta_cap, "inf for a pure geometric schedule");
  r->add_option("--gamma", run.gamma);
  r->add_option("--t0", run.t0);
  r->add_option("--theta", run.theta);
  r->add_option("--mhat-factor", run.mhat_factor);
  r->add_option("--fill", run.fill)->check(CLI::IsMember({"col", "row"}));
  r->add_flag("--no-weight-norm", run.no_weight_norm);
  r->add_flag("--deterministic", run.deterministic);
  r->add_option("--threads", run.threads)->check(CLI::PositiveNumber);
  r->add_option("--seed", run.seed);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "score predicted matches against ground truth");
  e->add_option("--pred", eval.pred)->required();
  e->add_option("--gt", eval.gt)->required();
  e->add_option("--out", eval.out);
  e->add_flag("--theorem-check", eval.theorem_check);
  e->add_flag("--lemma-check", eval.lemma_check);
  e->add_option("--T", eval.T);
  e->add_option("--beta0", eval.beta0);
  e->add_option("--beta-growth", eval.beta_growth);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "runtime sweep on UCM instances");
  b->add_option("--fix", bench.fix);
  b->add_option("--n", bench.n_values)->delimiter(',');
  b->add_option("--m", bench.m_values)->delimiter(',');
  b->add_option("--q", bench.q);
  b->add_option("--repeats", bench.repeats);
  b->add_option("--seed", bench.seed);
  b->add_flag("!--no-spectral", bench.spectral);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*s) return RunSynth(synth);
    if (*r) return RunSolve(run);
    if (*e) return RunEval(eval);
    return RunBench(bench);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const DataError& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return kData;
  } catch (const fs::filesystem_error& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return kData;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kInternal;
  }
}
