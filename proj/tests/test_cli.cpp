#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "edhmm/io.hpp"
#include "support/cli.hpp"

using namespace edhmm;

namespace {

long count_lines(const std::string& text) {
  long n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("generate writes T rows and is deterministic") {
  cli::TempDir dir("edhmm_cli");
  const std::string p = cli::config("experiment1.json");
  REQUIRE(cli::run("generate --params " + p + " --T 500 --seed 1 -o " + (dir / "a.csv")) == 0);
  REQUIRE(cli::run("generate --params " + p + " --T 500 --seed 1 -o " + (dir / "b.csv")) == 0);
  REQUIRE(cli::run("generate --params " + p + " --T 500 --seed 2 -o " + (dir / "c.csv")) == 0);
  const std::string a = read_file(dir / "a.csv");
  CHECK(count_lines(a) == 501);
  CHECK(a == read_file(dir / "b.csv"));
  CHECK(a != read_file(dir / "c.csv"));
}

TEST_CASE("configuration errors exit with 2, missing files with 4") {
  cli::TempDir dir("edhmm_cli");
  const std::string p = cli::config("experiment1.json");
  CHECK(cli::run("generate --params " + p + " --T 0 -o " + (dir / "x.csv")) == 2);
  CHECK(cli::run("generate --T 10") == 2);
  CHECK(cli::run("bogus") == 2);
  CHECK(cli::run("generate --params " + (dir / "missing.json") + " --T 5") == 4);
  write_file(dir / "bad.json", R"({"K": 2, "A": [[0.5, 0.5], [1, 0]], "lambda": [1, 1],
    "theta": [{"mu": 0, "sigma2": 1}, {"mu": 0, "sigma2": 1}]})");
  CHECK(cli::run("generate --params " + (dir / "bad.json") + " --T 5") == 2);
}

TEST_CASE("infer and summarize end to end") {
  cli::TempDir dir("edhmm_cli");
  const std::string data = dir / "d.csv";
  REQUIRE(cli::run("generate --params " + cli::config("experiment1.json") +
                   " --T 200 --seed 3 -o " + data) == 0);
  const std::string common = "infer --data " + data + " --K 3 --burnin 10 --seed 4 -q ";
  REQUIRE(cli::run(common + "--samples 12 --latent-every 4 --chain " + (dir / "c1.jsonl") +
                   " --diagnostics " + (dir / "diag.csv")) == 0);
  REQUIRE(cli::run(common + "--samples 12 --latent-every 4 --chain " + (dir / "c2.jsonl")) == 0);
  const std::string c1 = read_file(dir / "c1.jsonl");
  CHECK(c1 == read_file(dir / "c2.jsonl"));
  CHECK(count_lines(c1) == 12);
  const std::string diag = read_file(dir / "diag.csv");
  CHECK(count_lines(diag) == 23);
  CHECK(diag.rfind(std::string(kDiagnosticsHeader), 0) == 0);

  REQUIRE(cli::run(common + "--samples 0 --chain " + (dir / "empty.jsonl")) == 0);
  CHECK(read_file(dir / "empty.jsonl").empty());

  REQUIRE(cli::run("summarize --chain " + (dir / "c1.jsonl") + " --relabel mu -o " +
                   (dir / "s.json") + " --hist-dir " + (dir / "hist")) == 0);
  CHECK(read_file(dir / "s.json").find("\"mu[0]\"") != std::string::npos);
  CHECK_FALSE(read_file(dir / "hist/hist_mu_0.csv").empty());
  CHECK_FALSE(read_file(dir / "hist/hist_A_0_1.csv").empty());

  CHECK(cli::run(common + "--samples 2 --engine foo") == 2);
  CHECK(cli::run(common + "--samples 2 --thin 0") == 2);
}

TEST_CASE("summarize: single sample has zero spread, bad lines fail") {
  cli::TempDir dir("edhmm_cli");
  const std::string data = dir / "d.csv";
  REQUIRE(cli::run("generate --params " + cli::config("experiment1.json") +
                   " --T 100 --seed 3 -o " + data) == 0);
  REQUIRE(cli::run("infer --data " + data + " --K 3 --burnin 2 --samples 1 -q --chain " +
                   (dir / "one.jsonl")) == 0);
  REQUIRE(cli::run("summarize --chain " + (dir / "one.jsonl") + " -o " + (dir / "s.json")) == 0);
  const auto s = nlohmann::json::parse(read_file(dir / "s.json"));
  CHECK(s["n_samples"] == 1);
  for (const auto& p : s["parameters"]) {
    CHECK(p["sd"].get<double>() == 0.0);
    CHECK(p["q025"].get<double>() == p["q975"].get<double>());
  }

  write_file(dir / "bad.jsonl", read_file(dir / "one.jsonl") + "{oops\n");
  CHECK(cli::run("summarize --chain " + (dir / "bad.jsonl")) == 2);
  write_file(dir / "empty.jsonl", "");
  CHECK(cli::run("summarize --chain " + (dir / "empty.jsonl")) == 2);
}
