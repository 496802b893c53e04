#include "dagchrom/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "dagchrom/errors.hpp"
#include "dagchrom/rng.hpp"

namespace dagchrom {

Digraph generate(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.kind == "tournament") return random_tournament(spec.n, seed);
  if (spec.kind == "gnp") return random_orientation_gnp(spec.n, spec.p, seed);
  if (spec.kind == "transitive") return transitive_tournament(spec.n);
  if (spec.kind == "cycle") return directed_cycle(spec.n);
  throw PreconditionError("unknown generator kind '" + spec.kind + "'");
}

void ExperimentConfig::validate() const {
  if (trials == 0) throw PreconditionError("trials must be at least 1");
  if (threads == 0) throw PreconditionError("threads must be at least 1");
  if (gen.kind != "tournament" && gen.kind != "gnp" && gen.kind != "transitive" && gen.kind != "cycle")
    throw PreconditionError("unknown generator kind '" + gen.kind + "'");
  if (gen.kind == "gnp" && !(gen.p >= 0.0 && gen.p <= 1.0)) throw PreconditionError("p must lie in [0, 1]");
  if (gen.kind == "cycle" && gen.n < 3) throw PreconditionError("a directed cycle needs n >= 3");
  if (folklore_trials == 0 || search_trials == 0 || block_retries == 0)
    throw PreconditionError("budgets must be at least 1");
  dagchrom::validate(limits);
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw PreconditionError("bad value '" + value + "' for " + key);
  return out;
}

bool apply_limit(OracleLimits& limits, const std::string& key, const std::string& value) {
  if (key == "max_n_exact_chi") limits.max_n_exact_chi = parse_number<std::size_t>(key, value);
  else if (key == "max_n_exact_fG") limits.max_n_exact_fG = parse_number<std::size_t>(key, value);
  else if (key == "max_n_exact_astar") limits.max_n_exact_astar = parse_number<std::size_t>(key, value);
  else if (key == "max_perm_enum") limits.max_perm_enum = parse_number<std::size_t>(key, value);
  else if (key == "max_subset_enum") limits.max_subset_enum = parse_number<std::uint64_t>(key, value);
  else return false;
  return true;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

template <class Fn>
void for_each_setting(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected key=value");
    try {
      fn(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const PreconditionError& e) {
      throw ParseError(number, e.what());
    }
  }
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (apply_limit(c.limits, key, value)) return;
  if (key == "name") c.name = value;
  else if (key == "gen" || key == "kind") c.gen.kind = value;
  else if (key == "n") c.gen.n = parse_number<std::size_t>(key, value);
  else if (key == "p") c.gen.p = parse_number<double>(key, value);
  else if (key == "s") c.s = parse_number<std::size_t>(key, value);
  else if (key == "trials") c.trials = parse_number<std::size_t>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") c.out = value;
  else if (key == "threads") c.threads = parse_number<std::size_t>(key, value);
  else if (key == "folklore_trials") c.folklore_trials = parse_number<std::size_t>(key, value);
  else if (key == "search_trials") c.search_trials = parse_number<std::size_t>(key, value);
  else if (key == "block_retries") c.block_retries = parse_number<std::size_t>(key, value);
  else if (key == "s_threshold_exponent") c.s_threshold_exponent = parse_number<double>(key, value);
  else throw PreconditionError("unknown key '" + key + "'");
}

ExperimentConfig read_config(std::istream& in) {
  ExperimentConfig c;
  for_each_setting(in, [&](const std::string& k, const std::string& v) { apply_setting(c, k, v); });
  return c;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_config(in);
}

OracleLimits read_limits(std::istream& in) {
  OracleLimits limits;
  for_each_setting(in, [&](const std::string& k, const std::string& v) {
    if (!apply_limit(limits, k, v)) throw PreconditionError("unknown limit '" + k + "'");
  });
  validate(limits);
  return limits;
}

OracleLimits read_limits_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_limits(in);
}

namespace {

ResultRow run_instance(const ExperimentConfig& config, std::size_t id) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row;
  row.id = id;
  row.seed = Rng::derive(config.seed, id);
  const Digraph g = generate(config.gen, row.seed);
  const UndirectedGraph h = underlying(g);
  row.n = g.num_vertices();
  row.m = g.num_edges();
  row.alpha = independence_upper_bound(h, config.limits);
  if (row.n <= config.limits.max_n_exact_astar) row.alpha_star = bipartite_independence_number_exact(h, config.limits);
  const ChromaticBounds chi = chromatic_bounds(h, config.limits);
  row.chi = {chi.exact ? chi.lower : chi.upper, chi.exact};
  row.s = config.s ? config.s : std::max(row.alpha.value, row.alpha_star.value_or(0)) + 1;

  PipelineParams params;
  params.s = row.s;
  params.seed = row.seed;
  params.limits = config.limits;
  params.folklore_trials = config.folklore_trials;
  params.search_trials = config.search_trials;
  params.block_retries = config.block_retries;
  params.s_threshold_exponent = config.s_threshold_exponent;
  const PipelineResult res = main_pipeline(g, params);
  row.branch = res.branch;
  row.lower_bound = res.lower_bound;
  row.q = res.measured_q;
  row.degraded = res.degraded;
  row.verified = verify(g, res.witness, res.coloring).ok;
  if (res.reduced && res.measured_q)
    row.verified = row.verified && verify_against(res.reduced->graph, *res.reduced_order, *res.measured_q).ok;
  if (row.n <= config.limits.max_n_exact_fG && row.n <= config.limits.max_perm_enum)
    row.f = f_exact(g, config.limits).f;
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::string optional_field(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "NA"; }

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ResultRow> rows(config.trials);
  const std::size_t workers = std::min(config.threads, config.trials);
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.trials; ++i) rows[i] = run_instance(config, i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < config.trials;) {
        try {
          rows[i] = run_instance(config, i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "id,seed,n,m,s,alpha,alpha_exact,alpha_star,chi,chi_exact,branch,L,f,q,degraded,verified\r\n";
  for (const auto& r : rows)
    out << r.id << ',' << r.seed << ',' << r.n << ',' << r.m << ',' << r.s << ',' << r.alpha.value << ','
        << r.alpha.exact << ',' << optional_field(r.alpha_star) << ',' << r.chi.value << ',' << r.chi.exact << ','
        << csv_field(to_string(r.branch)) << ',' << r.lower_bound << ',' << optional_field(r.f) << ','
        << optional_field(r.q) << ',' << r.degraded << ',' << r.verified << "\r\n";
}

void write_timing_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "id,wall_ms\r\n";
  for (const auto& r : rows) out << r.id << ',' << format_double(r.wall_ms) << "\r\n";
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

VerifyReport verify(const Digraph& g, const Permutation& pi, const Coloring& coloring, std::optional<std::size_t> q) {
  VerifyReport report;
  auto check = [&](bool ok, const std::string& pass, const std::string& fail) {
    report.lines.push_back(ok ? "PASS " + pass : "FAIL " + fail);
    report.ok = report.ok && ok;
  };
  const std::size_t n = g.num_vertices();
  check(pi.size() == n, "permutation covers all " + std::to_string(n) + " vertices",
        "permutation has " + std::to_string(pi.size()) + " entries for " + std::to_string(n) + " vertices");
  check(coloring.color.size() == n, "coloring covers all vertices",
        "coloring has " + std::to_string(coloring.color.size()) + " entries for " + std::to_string(n) + " vertices");
  if (!report.ok) return report;

  const Digraph fwd = forward_subgraph(g, pi);
  check(is_acyclic(fwd), "G_pi is acyclic", "G_pi has a directed cycle");
  std::optional<Edge> bad;
  for (const Edge& e : fwd.edges())
    if (coloring.color[e.from] == coloring.color[e.to]) {
      bad = e;
      break;
    }
  std::size_t colors = 0;
  for (std::size_t c : coloring.color) colors = std::max(colors, c + 1);
  check(!bad, "coloring is proper on G_pi with " + std::to_string(colors) + " colors",
        bad ? "monochromatic edge " + std::to_string(bad->from) + " " + std::to_string(bad->to) + " (color " +
                  std::to_string(coloring.color[bad->from]) + ")"
            : "");
  if (q) {
    VerifyReport against = verify_against(g, pi, *q);
    report.lines.insert(report.lines.end(), against.lines.begin(), against.lines.end());
    report.ok = report.ok && against.ok;
  }
  return report;
}

VerifyReport verify_against(const Digraph& g, const Permutation& pi, std::size_t q) {
  VerifyReport report;
  if (pi.size() != g.num_vertices()) {
    report.ok = false;
    report.lines.push_back("FAIL permutation size does not match the graph");
    return report;
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const std::size_t d = against_degree(g, pi, v);
    if (d > q) {
      report.ok = false;
      report.lines.push_back("FAIL vertex " + std::to_string(v) + " has " + std::to_string(d) +
                             " edges against pi, claimed q = " + std::to_string(q));
    }
  }
  if (report.ok) report.lines.push_back("PASS against-degree at most " + std::to_string(q));
  return report;
}

CounterexampleReport counterexample_demo(std::size_t n, std::size_t s, const OracleLimits& limits) {
  CounterexampleReport r;
  r.n = n;
  r.s = s;
  const BucketColoring bc = multipartite_bucket_graph(n, s);
  r.expected = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n / s))));
  r.chi_red = chromatic_number_exact(bc.red, limits).chi;
  r.chi_blue = chromatic_number_exact(bc.blue, limits).chi;
  r.alpha_star = bipartite_independence_number_exact(complete_multipartite(n, s), limits);
  r.ok = r.chi_red == r.expected && r.chi_blue == r.expected && r.alpha_star <= s;
  std::ostringstream os;
  os << "complete " << n / s << "-partite graph, parts of size " << s << ", n = " << n << "\n"
     << "chi(red) = " << r.chi_red << ", chi(blue) = " << r.chi_blue << ", sqrt(n/s) = " << r.expected << "\n"
     << "alpha*(G) = " << r.alpha_star << " <= s = " << s << ": " << (r.alpha_star <= s ? "yes" : "no") << "\n"
     << "chi(G) = " << n / s << " but each color class needs only " << r.expected << " colors\n"
     << (r.ok ? "PASS" : "FAIL") << "\n";
  r.text = os.str();
  return r;
}

}  // namespace dagchrom
