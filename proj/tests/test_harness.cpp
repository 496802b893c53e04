#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dagchrom/errors.hpp"
#include "dagchrom/harness.hpp"

using namespace dagchrom;

namespace {

std::string csv_of(const ExperimentConfig& c) {
  std::ostringstream os;
  write_csv(os, run_experiment(c));
  return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in("# comment\nname = demo\ngen=gnp\nn=7\np=0.25\ntrials=3\nseed=9\nmax_n_exact_chi=12\n\n");
  const ExperimentConfig c = read_config(in);
  CHECK(c.name == "demo");
  CHECK(c.gen.kind == "gnp");
  CHECK(c.gen.n == 7);
  CHECK(c.gen.p == 0.25);
  CHECK(c.trials == 3);
  CHECK(c.seed == 9);
  CHECK(c.limits.max_n_exact_chi == 12);
  std::istringstream bad_key("n=3\ncolour=red\n");
  try {
    read_config(bad_key);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream bad_value("trials=three\n");
  CHECK_THROWS_AS(read_config(bad_value), ParseError);
  std::istringstream no_eq("trials\n");
  CHECK_THROWS_AS(read_config(no_eq), ParseError);
  ExperimentConfig zero;
  zero.trials = 0;
  CHECK_THROWS_AS(zero.validate(), PreconditionError);
  std::istringstream limits("max_perm_enum=8\n");
  CHECK(read_limits(limits).max_perm_enum == 8);
}

TEST_CASE("csv formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(format_double(1.0 / 3.0) == "0.333333");
  CHECK(format_double(1234567.0) == "1.23457e+06");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("verify examples") {
  const Digraph t4 = transitive_tournament(4);
  const VerifyReport ok = verify(t4, Permutation::identity(4), Coloring{{0, 1, 2, 3}, 4});
  CHECK(ok.ok);
  const VerifyReport mono = verify(t4, Permutation::identity(4), Coloring{{0, 0, 1, 2}, 3});
  CHECK_FALSE(mono.ok);
  bool named = false;
  for (const auto& line : mono.lines) named = named || line.find("monochromatic edge 0 1") != std::string::npos;
  CHECK(named);
  const VerifyReport q = verify(directed_cycle(3), Permutation::identity(3), Coloring{{0, 1, 0}, 2}, 0);
  CHECK_FALSE(q.ok);
  bool vertex = false;
  for (const auto& line : q.lines) vertex = vertex || line.find("vertex 0 has 1 edges against") != std::string::npos;
  CHECK(vertex);
  CHECK(verify(directed_cycle(3), Permutation::identity(3), Coloring{{0, 1, 0}, 2}, 1).ok);
  CHECK_FALSE(verify(t4, Permutation::identity(3), Coloring{{0, 1, 2, 3}, 4}).ok);
}

TEST_CASE("counterexample demo") {
  for (auto [n, s, chi] : {std::tuple{18, 2, 3}, std::tuple{9, 1, 3}, std::tuple{4, 1, 2}}) {
    const CounterexampleReport r = counterexample_demo(n, s);
    CHECK(r.ok);
    CHECK(r.chi_red == static_cast<std::size_t>(chi));
    CHECK(r.chi_blue == static_cast<std::size_t>(chi));
    CHECK(r.alpha_star <= static_cast<std::size_t>(s));
  }
  CHECK_THROWS_AS(counterexample_demo(12, 2), PreconditionError);
}

TEST_CASE("tournament experiment") {
  ExperimentConfig c;
  c.gen = {"tournament", 8, 0.5};
  c.trials = 50;
  c.seed = 1;
  c.folklore_trials = 8;
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 50);
  for (const auto& r : rows) {
    CHECK(r.lower_bound >= 3);
    CHECK(r.verified);
    REQUIRE(r.f);
    CHECK(r.lower_bound <= *r.f);
    CHECK(r.alpha.exact);
    CHECK(r.chi.exact);
  }
}

TEST_CASE("edgeless experiment") {
  ExperimentConfig c;
  c.gen = {"gnp", 6, 0.0};
  c.trials = 5;
  for (const auto& r : run_experiment(c)) {
    CHECK(r.lower_bound == 1);
    CHECK(r.m == 0);
  }
}

TEST_CASE("experiments are deterministic and thread independent") {
  ExperimentConfig c;
  c.gen = {"gnp", 9, 0.6};
  c.trials = 12;
  c.seed = 77;
  c.folklore_trials = 4;
  const std::string first = csv_of(c);
  CHECK(first == csv_of(c));
  c.threads = 3;
  CHECK(first == csv_of(c));
  CHECK(first.rfind("id,seed,n,m,s,alpha,alpha_exact,alpha_star,chi,chi_exact,branch,L,f,q,degraded,verified\r\n", 0) == 0);
}

TEST_CASE("exactness flags follow the limits") {
  ExperimentConfig c;
  c.gen = {"tournament", 9, 0.5};
  c.trials = 3;
  c.limits.max_n_exact_chi = 8;
  c.limits.max_n_exact_astar = 8;
  c.limits.max_n_exact_fG = 8;
  for (const auto& r : run_experiment(c)) {
    CHECK_FALSE(r.chi.exact);
    CHECK_FALSE(r.alpha.exact);
    CHECK_FALSE(r.alpha_star.has_value());
    CHECK_FALSE(r.f.has_value());
  }
}

TEST_CASE("atomic file writes") {
  const auto dir = std::filesystem::temp_directory_path() / "dagchrom_harness_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.csv").string();
  write_file_atomic(path, "a,b\r\n");
  write_file_atomic(path, "c,d\r\n");
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "c,d\r\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}
