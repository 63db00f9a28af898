// edhmm: generate synthetic EDHMM data, run beam-sampling inference and
// summarize posterior chains.
//
//   edhmm generate  --params p.json --T 500 --seed 1 --out data.csv
//   edhmm infer     --data data.csv --K 3 --burnin 500 --samples 1000 \
//                   --chain chain.jsonl --diagnostics diag.csv
//   edhmm summarize --chain chain.jsonl --out summary.json --hist-dir hist/
//
// Exit codes: 0 success, 2 configuration/validation error, 3 sampler
// failure, 4 I/O error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "edhmm/diagnostics.hpp"
#include "edhmm/error.hpp"
#include "edhmm/generator.hpp"
#include "edhmm/io.hpp"
#include "edhmm/sampler.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kConfig = 2, kSampler = 3, kIo = 4 };

struct GenerateArgs {
  std::string params;
  int T = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct InferArgs {
  std::string data;
  std::string priors;
  int K = 0;
  long burnin = 500;
  long samples = 1000;
  long thin = 1;
  std::uint64_t seed = 0;
  int d_cap = 0;
  std::string engine = "beam";
  std::string init = "greedy";
  std::string chain;
  std::string diagnostics;
  long latent_every = 0;
  int chains = 1;
  bool quiet = false;
};

struct SummarizeArgs {
  std::string chain;
  std::string out;
  std::string hist_dir;
  std::string relabel = "none";
  double mu_tie = 0.5;
  int bins = 30;
};

void cmd_generate(const GenerateArgs& a) {
  if (a.T < 1) throw edhmm::ConfigError("--T must be >= 1");
  const edhmm::ParamsDocument doc = edhmm::parse_params_json(edhmm::read_file(a.params));
  const edhmm::Trajectory z = edhmm::generate(doc.params, a.T, a.seed);
  std::ostringstream csv;
  edhmm::write_trajectory_csv(csv, z);
  if (a.out.empty() || a.out == "-") {
    std::cout << csv.str();
  } else {
    edhmm::write_file(a.out, csv.str());
  }
}

void cmd_infer(const InferArgs& a) {
  std::istringstream data_in(edhmm::read_file(a.data));
  const edhmm::ObservedData data = edhmm::read_observations_csv(data_in);
  if (data.y.empty()) throw edhmm::ConfigError("data file has no observations");

  edhmm::Priors priors = edhmm::Priors::defaults_for(a.K);
  if (!a.priors.empty()) {
    const std::string text = edhmm::read_file(a.priors);
    // A params document with an embedded "priors" block is accepted too.
    try {
      priors = edhmm::parse_priors_json(text, a.K);
    } catch (const edhmm::ConfigError&) {
      const edhmm::ParamsDocument doc = edhmm::parse_params_json(text);
      if (!doc.priors) throw edhmm::ConfigError("priors file has no priors block");
      priors = *doc.priors;
    }
  }
  if (a.chains < 1) throw edhmm::ConfigError("--chains must be >= 1");

  edhmm::RunConfig cfg;
  cfg.K = a.K;
  cfg.n_burnin = a.burnin;
  cfg.n_samples = a.samples;
  cfg.thin = a.thin;
  cfg.d_cap = a.d_cap;
  cfg.engine = edhmm::parse_engine(a.engine);
  cfg.init = edhmm::parse_init(a.init);
  cfg.latent_every = a.latent_every;
  edhmm::validate(cfg);
  if (cfg.engine == edhmm::Engine::kExact) {
    const long cap = a.d_cap > 0 ? a.d_cap : static_cast<long>(data.y.size());
    if (static_cast<double>(cap) * a.K * static_cast<double>(data.y.size()) > 5e8) {
      throw edhmm::ConfigError("engine=exact needs K * d_cap * T <= 5e8; lower --d-cap");
    }
  }

  std::ostringstream chain_out;
  std::ostringstream diag_out;
  diag_out << edhmm::kDiagnosticsHeader << '\n';
  const long total = a.burnin + a.samples * a.thin;
  for (int c = 0; c < a.chains; ++c) {
    cfg.seed = a.seed + static_cast<std::uint64_t>(c);
    auto observer = [&](const edhmm::SweepDiagnostics& d) {
      diag_out << edhmm::diagnostics_row(d) << '\n';
      if (!a.quiet && (d.sweep % 50 == 0 || d.sweep == total)) {
        std::cerr << "\rchain " << c << " sweep " << d.sweep << "/" << total
                  << "  transitions/t " << d.mean_transitions_per_t << "   " << std::flush;
      }
    };
    const std::vector<edhmm::ChainSample> chain = edhmm::run(data.y, priors, cfg, observer);
    const std::optional<int> index =
        a.chains > 1 ? std::optional<int>(c) : std::nullopt;
    for (const edhmm::ChainSample& s : chain) chain_out << edhmm::chain_line(s, index) << '\n';
  }
  if (!a.quiet && total > 0) std::cerr << '\n';

  if (a.chain.empty() || a.chain == "-") {
    std::cout << chain_out.str();
  } else {
    edhmm::write_file(a.chain, chain_out.str());
  }
  if (!a.diagnostics.empty()) edhmm::write_file(a.diagnostics, diag_out.str());
}

std::string histogram_file_name(const std::string& param) {
  std::string out;
  for (char ch : param) {
    if (ch == '[' || ch == ']') {
      if (!out.empty() && out.back() != '_') out.push_back('_');
    } else {
      out.push_back(ch);
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return "hist_" + out + ".csv";
}

void cmd_summarize(const SummarizeArgs& a) {
  std::istringstream in(edhmm::read_file(a.chain));
  const std::vector<edhmm::ChainSample> raw = edhmm::read_chain(in);
  if (raw.empty()) throw edhmm::ConfigError("chain file is empty");
  const edhmm::Relabel mode = edhmm::parse_relabel(a.relabel);
  const std::vector<edhmm::ChainSample> chain = edhmm::relabel_chain(raw, mode, a.mu_tie);
  const edhmm::PosteriorSummary summary = edhmm::summarize_posterior(chain, a.bins);
  const std::string json = edhmm::summary_to_json(summary, mode);
  if (a.out.empty() || a.out == "-") {
    std::cout << json;
  } else {
    edhmm::write_file(a.out, json);
  }
  if (!a.hist_dir.empty()) {
    std::error_code ec;
    fs::create_directories(a.hist_dir, ec);
    if (ec) throw edhmm::IoError("cannot create '" + a.hist_dir + "': " + ec.message());
    for (const edhmm::ParameterSummary& p : summary.parameters) {
      std::ostringstream csv;
      edhmm::write_histogram_csv(csv, p.histogram);
      edhmm::write_file(fs::path(a.hist_dir) / histogram_file_name(p.name), csv.str());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit-duration HMM with beam-sampling inference"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Sample a synthetic trajectory as CSV");
  g->add_option("--params", gen.params, "Model parameters JSON")->required();
  g->add_option("--T", gen.T, "Sequence length")->required();
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("-o,--out", gen.out, "Output CSV (default stdout)");

  InferArgs inf;
  auto* i = app.add_subcommand("infer", "Run the sampler on a data CSV");
  i->add_option("--data", inf.data, "Data CSV with columns t,y")->required();
  i->add_option("--priors", inf.priors, "Priors JSON (default: broad priors)");
  i->add_option("--K", inf.K, "Number of states")->required();
  i->add_option("--burnin", inf.burnin, "Burn-in sweeps");
  i->add_option("--samples", inf.samples, "Retained samples");
  i->add_option("--thin", inf.thin, "Sweeps between retained samples");
  i->add_option("--seed", inf.seed, "Random seed");
  i->add_option("--d-cap", inf.d_cap, "Duration cap (0 = sequence length)");
  i->add_option("--engine", inf.engine, "beam | exact");
  i->add_option("--init", inf.init, "greedy | small-u");
  i->add_option("--chain", inf.chain, "Output chain JSON-lines (default stdout)");
  i->add_option("--diagnostics", inf.diagnostics, "Per-sweep diagnostics CSV");
  i->add_option("--latent-every", inf.latent_every,
                "Include the latent path with every n-th retained sample");
  i->add_option("--chains", inf.chains, "Independent chains, seeds seed..seed+n-1");
  i->add_flag("-q,--quiet", inf.quiet, "No progress line on stderr");

  SummarizeArgs sum;
  auto* s = app.add_subcommand("summarize", "Summarize a chain file");
  s->add_option("--chain", sum.chain, "Chain JSON-lines")->required();
  s->add_option("-o,--out", sum.out, "Summary JSON (default stdout)");
  s->add_option("--hist-dir", sum.hist_dir, "Directory for per-parameter histogram CSVs");
  s->add_option("--relabel", sum.relabel, "none | mu | mu-lambda");
  s->add_option("--mu-tie", sum.mu_tie, "mu gap treated as a tie by mu-lambda");
  s->add_option("--bins", sum.bins, "Histogram bins");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*g) cmd_generate(gen);
    if (*i) cmd_infer(inf);
    if (*s) cmd_summarize(sum);
  } catch (const edhmm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const edhmm::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const edhmm::SamplerError& e) {
    std::cerr << "sampler failure: " << e.what() << '\n';
    return kSampler;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
