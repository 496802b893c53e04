#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dagchrom/almost_acyclic.hpp"
#include "dagchrom/digraph_io.hpp"
#include "dagchrom/errors.hpp"
#include "dagchrom/harness.hpp"
#include "dagchrom/oracles.hpp"
#include "dagchrom/pathcover.hpp"
#include "dagchrom/pipeline.hpp"
#include "dagchrom/refine.hpp"

using namespace dagchrom;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::uint64_t seed = 1;
  std::string limits_path;
  std::string out;

  OracleLimits limits() const { return limits_path.empty() ? OracleLimits{} : read_limits_file(limits_path); }

  // Writes to --out (atomically) or stdout.
  void emit(const std::string& text) const {
    if (out.empty()) std::cout << text;
    else write_file_atomic(out, text);
  }
};

template <class T>
T read_with(const std::string& path, T (*reader)(std::istream&, std::size_t), std::size_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return reader(in, n);
}

std::string join(const std::vector<Vertex>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

std::string describe(const Measured& m) { return std::to_string(m.value) + (m.exact ? "" : " (upper bound)"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acyclic subgraphs of large chromatic number in orientations"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--limits", g.limits_path, "Oracle limits file (key=value)")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output file or prefix");

  std::string graph_path;
  auto add_graph = [&](CLI::App* sub) { sub->add_option("--graph", graph_path, "Digraph file")->required(); };

  // gen
  GeneratorSpec spec;
  auto* gen = app.add_subcommand("gen", "Generate a digraph");
  gen->add_option("--kind", spec.kind, "tournament, gnp, transitive or cycle")
      ->check(CLI::IsMember({"tournament", "gnp", "transitive", "cycle"}));
  gen->add_option("--n", spec.n, "Vertex count")->required();
  gen->add_option("--p", spec.p, "Edge probability for gnp")->check(CLI::Range(0.0, 1.0));

  // oracle
  std::vector<std::string> what{"chi", "alpha", "astar"};
  std::size_t oracle_k = 0;
  auto* oracle = app.add_subcommand("oracle", "Exact oracles on a digraph");
  add_graph(oracle);
  oracle->add_option("--what", what, "chi alpha astar f edgeless ksets paths")
      ->check(CLI::IsMember({"chi", "alpha", "astar", "f", "edgeless", "ksets", "paths"}));
  oracle->add_option("--k", oracle_k, "Set size for ksets");

  auto* pathcover = app.add_subcommand("pathcover", "Path cover with at most alpha paths");
  add_graph(pathcover);

  std::size_t k = 0, trials = 64, s = 1, q = 1, retries = 16, blocks = 0;
  auto* search = app.add_subcommand("search", "Random permutations minimizing alpha(G_pi)");
  add_graph(search);
  search->add_option("--k", k, "Target alpha")->required();
  search->add_option("--trials", trials, "Permutations to sample")->check(CLI::PositiveNumber);

  std::string sigma_path;
  auto* blockperm = app.add_subcommand("blockperm", "Shuffle blocks of a q-almost-acyclic order");
  add_graph(blockperm);
  blockperm->add_option("--sigma", sigma_path, "Permutation file for the base order")->required();
  blockperm->add_option("--q", q, "Certified against-degree")->required();
  blockperm->add_option("--retries", retries, "Shuffles to try")->check(CLI::PositiveNumber);
  blockperm->add_option("--blocks", blocks, "Block count (default round(sqrt(n/q)))");

  std::optional<std::size_t> steps;
  std::optional<double> epsilon;
  bool iterate = false;
  auto* refine = app.add_subcommand("refine", "Ordered acyclic set extraction with a step trace");
  add_graph(refine);
  refine->add_option("--k", k, "Hyperedge size")->required();
  refine->add_option("--s", s, "Bound on alpha and alpha*")->required();
  refine->add_option("--steps", steps, "Refinement steps z");
  refine->add_option("--epsilon", epsilon, "Alignment threshold");
  refine->add_flag("--iterate", iterate, "Run the iterated reducer");

  std::optional<std::size_t> pipe_k;
  double exponent = 1.0 / 19.0;
  auto* pipeline = app.add_subcommand("pipeline", "Full construction; writes <out>.perm and <out>.col");
  add_graph(pipeline);
  pipeline->add_option("--s", s, "Bound on alpha and alpha*")->required();
  pipeline->add_option("--k", pipe_k, "Set size (default round(n^{4/9} s^{14/9}))");
  pipeline->add_option("--exponent", exponent, "Folklore threshold exponent");

  std::string config_path;
  std::vector<std::string> overrides;
  std::size_t threads = 0;
  auto* experiment = app.add_subcommand("experiment", "Run a configured experiment, CSV output");
  experiment->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
  experiment->add_option("--set", overrides, "key=value override (repeatable)");
  experiment->add_option("--threads", threads, "Worker threads");

  std::string perm_path, coloring_path;
  std::optional<std::size_t> claimed_q;
  auto* verify_cmd = app.add_subcommand("verify", "Check a digraph, permutation and coloring");
  add_graph(verify_cmd);
  verify_cmd->add_option("--perm", perm_path, "Permutation file")->required();
  verify_cmd->add_option("--coloring", coloring_path, "Coloring file")->required();
  verify_cmd->add_option("--q", claimed_q, "Claimed against-degree bound");

  std::size_t demo_n = 18, demo_s = 2;
  auto* demo = app.add_subcommand("demo-counterexample", "Bucket coloring of a complete multipartite graph");
  demo->add_option("--n", demo_n, "Vertex count");
  demo->add_option("--s", demo_s, "Part size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    const OracleLimits limits = g.limits();
    if (*gen) {
      g.emit(to_text(generate(spec, g.seed)));
      return kExitPass;
    }
    if (*demo) {
      CounterexampleReport r = counterexample_demo(demo_n, demo_s, limits);
      g.emit(r.text);
      return r.ok ? kExitPass : kExitFail;
    }
    if (*experiment) {
      ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : read_config_file(config_path);
      if (app.count("--seed")) config.seed = g.seed;
      if (!g.limits_path.empty()) config.limits = limits;
      for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw PreconditionError("--set expects key=value, got '" + kv + "'");
        apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (threads) config.threads = threads;
      if (!g.out.empty()) config.out = g.out;
      const auto rows = run_experiment(config);
      std::ostringstream csv;
      write_csv(csv, rows);
      if (config.out.empty()) {
        std::cout << csv.str();
      } else {
        write_file_atomic(config.out, csv.str());
        std::ostringstream timing;
        write_timing_csv(timing, rows);
        write_file_atomic(config.out + ".timing.csv", timing.str());
      }
      bool all = true;
      for (const auto& r : rows) all = all && r.verified;
      return all ? kExitPass : kExitFail;
    }

    const Digraph d = read_digraph_file(graph_path);
    const std::size_t n = d.num_vertices();
    std::ostringstream os;

    if (*verify_cmd) {
      const Permutation pi = read_with(perm_path, read_permutation, n);
      const Coloring c = read_with(coloring_path, read_coloring, n);
      VerifyReport r = verify(d, pi, c, claimed_q);
      for (const auto& line : r.lines) os << line << "\n";
      os << (r.ok ? "PASS" : "FAIL") << "\n";
      g.emit(os.str());
      return r.ok ? kExitPass : kExitFail;
    }
    if (*oracle) {
      const UndirectedGraph h = underlying(d);
      os << "n=" << n << "\nm=" << d.num_edges() << "\n";
      for (const auto& w : what) {
        if (w == "chi") os << "chi=" << chromatic_number_exact(h, limits).chi << "\n";
        if (w == "alpha") os << "alpha=" << independence_number_exact(h, limits) << "\n";
        if (w == "astar") os << "alpha_star=" << bipartite_independence_number_exact(h, limits) << "\n";
        if (w == "f") os << "f=" << f_exact(d, limits).f << "\n";
        if (w == "edgeless") os << "edgeless_probability=" << edgeless_probability_exact(d, limits) << "\n";
        if (w == "ksets") os << "acyclic_ksets(k=" << oracle_k << ")=" << count_acyclic_ksets(d, oracle_k, limits) << "\n";
        if (w == "paths") os << "paths=" << gallai_milgram_cover(d).paths.size() << "\n";
      }
      g.emit(os.str());
      return kExitPass;
    }
    if (*pathcover) {
      CertifiedPathCover c = gallai_milgram_cover_certified(d);
      os << "paths " << c.cover.paths.size() << "\n";
      for (const auto& p : c.cover.paths) os << join(p) << "\n";
      os << "independent " << join(c.independent_set) << "\n";
      g.emit(os.str());
      return is_valid_cover(d, c.cover) ? kExitPass : kExitFail;
    }
    if (*search) {
      SearchResult r = random_perm_search(d, k, trials, g.seed, limits);
      os << "alpha " << describe(r.alpha) << "\ntrial " << r.best_trial << "\nsuccess " << r.success << "\n"
         << to_text(r.best);
      g.emit(os.str());
      return kExitPass;
    }
    if (*blockperm) {
      const Permutation sigma = read_with(sigma_path, read_permutation, n);
      auto r = block_permutation_construct(d, sigma, q, retries, g.seed, limits,
                                           blocks ? std::optional<std::size_t>(blocks) : std::nullopt);
      os << "blocks " << r.plan.num_blocks << "\nalpha " << describe(r.alpha) << "\nretry " << r.best_retry << "\n"
         << to_text(r.best);
      g.emit(os.str());
      return kExitPass;
    }
    if (*refine) {
      RefineOptions options{steps, epsilon};
      std::vector<RefineTrace> traces;
      std::string summary;
      if (iterate) {
        ReduceResult r = iterate_reduce(d, k, s, limits, options);
        traces = r.traces;
        summary = "# rounds " + std::to_string(r.ks.size()) + " status " +
                  (r.status == RefineStatus::complete ? "complete" : "dead-end") + " q " + std::to_string(r.measured_q) +
                  " n' " + std::to_string(r.graph.graph.num_vertices()) + (r.reason.empty() ? "" : " (" + r.reason + ")") + "\n";
      } else {
        RefineResult r = refine_align(d, k, s, limits, options);
        traces.push_back(r.trace);
        summary = std::string("# status ") + (r.status == RefineStatus::complete ? "complete" : "dead-end") + " q " +
                  std::to_string(r.measured_q) + " n' " + std::to_string(r.white_part.graph.num_vertices()) +
                  (r.reason.empty() ? "" : " (" + r.reason + ")") + "\n";
      }
      std::string log, csv;
      for (const auto& t : traces) {
        log += format_trace_log(t);
        csv += format_trace_csv(t);
      }
      std::cout << log << summary;
      if (!g.out.empty()) write_file_atomic(g.out, csv);
      return kExitPass;
    }
    if (*pipeline) {
      PipelineParams params;
      params.s = s;
      params.k = pipe_k;
      params.s_threshold_exponent = exponent;
      params.seed = g.seed;
      params.limits = limits;
      PipelineResult r = main_pipeline(d, params);
      os << "branch " << to_string(r.branch) << "\nk " << r.k << "\nL " << r.lower_bound
         << (r.lower_bound_exact ? " (exact chi)" : "") << "\ncolors " << r.coloring.num_colors << "\n";
      if (r.measured_q) os << "q " << *r.measured_q << "\n";
      os << "degraded " << r.degraded << "\n";
      for (const auto& note : r.notes) os << "# " << note << "\n";
      std::cout << os.str();
      if (!g.out.empty()) {
        write_file_atomic(g.out + ".perm", to_text(r.witness));
        write_file_atomic(g.out + ".col", to_text(r.coloring));
      }
      return verify(d, r.witness, r.coloring).ok ? kExitPass : kExitFail;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidGraph& e) {
    std::cerr << "invalid graph: " << e.what() << "\n";
    return kExitFail;
  } catch (const PreconditionError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
