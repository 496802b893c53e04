#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dagchrom/coloring.hpp"
#include "dagchrom/digraph.hpp"
#include "dagchrom/oracles.hpp"
#include "dagchrom/pipeline.hpp"

namespace dagchrom {

/// Generator spec: kind is tournament, gnp, transitive or cycle.
struct GeneratorSpec {
  std::string kind = "tournament";
  std::size_t n = 8;
  double p = 0.5;  // gnp only
};

Digraph generate(const GeneratorSpec& spec, std::uint64_t seed);

struct ExperimentConfig {
  std::string name = "experiment";
  GeneratorSpec gen;
  std::size_t s = 0;  // 0: max(alpha, alpha*) + 1 per instance
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  OracleLimits limits;
  std::string out;
  std::size_t threads = 1;
  std::size_t folklore_trials = 32;
  std::size_t search_trials = 64;
  std::size_t block_retries = 16;
  double s_threshold_exponent = 1.0 / 19.0;

  /// Throws PreconditionError on an invalid combination.
  void validate() const;
};

/// Applies one "key=value" setting. Throws PreconditionError on an unknown key
/// or a bad value.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
/// Flat key=value lines; '#' starts a comment. Throws ParseError with line numbers.
ExperimentConfig read_config(std::istream& in);
ExperimentConfig read_config_file(const std::string& path);
/// Same syntax for OracleLimits keys only.
OracleLimits read_limits(std::istream& in);
OracleLimits read_limits_file(const std::string& path);

struct ResultRow {
  std::size_t id = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t s = 0;
  Measured alpha;
  std::optional<std::size_t> alpha_star;  // absent when out of oracle range
  Measured chi;                           // exact, or a greedy upper bound
  Branch branch = Branch::folklore;
  std::size_t lower_bound = 0;
  std::optional<std::size_t> f;           // f(G) when in range
  std::optional<std::size_t> q;
  bool degraded = false;
  bool verified = false;
  double wall_ms = 0.0;
};

/// One row per instance, ordered by id whatever the thread count. Instance i
/// uses seed derive(config.seed, i) for both the graph and the pipeline.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// RFC 4180 CSV with a header row; doubles with 6 significant digits. Missing
/// values are written as NA. Wall time goes to write_timing_csv so this output
/// depends on the inputs only.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_timing_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Writes to a temporary file next to `path` and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Quotes a CSV field when needed.
std::string csv_field(const std::string& value);
std::string format_double(double x);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> lines;  // one "PASS ..." or "FAIL ..." per check
};

/// Checks that G_pi is acyclic, the coloring is proper on G_pi, and, when given,
/// that no vertex has more than q edges against pi.
VerifyReport verify(const Digraph& g, const Permutation& pi, const Coloring& coloring,
                    std::optional<std::size_t> q = std::nullopt);
/// Only the against-degree claim.
VerifyReport verify_against(const Digraph& g, const Permutation& pi, std::size_t q);

struct CounterexampleReport {
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t expected = 0;  // sqrt(n / s)
  std::size_t chi_red = 0;
  std::size_t chi_blue = 0;
  std::size_t alpha_star = 0;  // of the complete multipartite graph
  bool ok = false;
  std::string text;
};

/// Builds the red/blue bucket coloring of the complete (n/s)-partite graph and
/// checks both classes have chromatic number sqrt(n/s) while alpha* <= s.
CounterexampleReport counterexample_demo(std::size_t n, std::size_t s, const OracleLimits& limits = {});

}  // namespace dagchrom
