#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edhmm/chain.hpp"
#include "edhmm/diagnostics.hpp"
#include "edhmm/generator.hpp"
#include "edhmm/model.hpp"

namespace edhmm {

/// Reals in CSV output: 17 significant digits, enough to round-trip a double.
std::string format_real(double v);

// ---- params / priors JSON ----------------------------------------------
//
// {"K": 3, "A": [[...], ...], "lambda": [...],
//  "theta": [{"mu": m, "sigma2": s}, ...], "priors": {...}}
//
// "priors" is optional. Unknown keys anywhere are rejected.

struct ParamsDocument {
  ModelParams params;
  std::optional<Priors> priors;
};

ParamsDocument parse_params_json(std::string_view text);
std::string params_to_json(const ModelParams& params,
                           const std::optional<Priors>& priors = std::nullopt);

/// Accepts either a bare priors object or {"priors": {...}}. Missing fields
/// take their defaults, with dirichlet_mass defaulting to 1/(K-1).
Priors parse_priors_json(std::string_view text, int K);
std::string priors_to_json(const Priors& priors);

// ---- trajectory CSV ------------------------------------------------------
//
// Header `t,y,x_true,d_true`, one row per step, t starting at 1, states
// 0-based, '\n' line endings.

void write_trajectory_csv(std::ostream& out, const Trajectory& z);

struct ObservedData {
  std::vector<double> y;
  /// Present when the file carries x_true and d_true columns.
  std::optional<Trajectory> truth;
};

/// Requires columns t and y; x_true and d_true are optional. Errors name the
/// offending line.
ObservedData read_observations_csv(std::istream& in);

// ---- chain JSON lines ----------------------------------------------------
//
// {"sweep": s, "A": [[...]], "lambda": [...], "mu": [...], "sigma2": [...],
//  "log_joint": v} with optional "chain" and latent "x0", "x", "d".

std::string chain_line(const ChainSample& sample, std::optional<int> chain_index = {});
ChainSample parse_chain_line(std::string_view line, long line_no);
/// Blank lines are skipped.
std::vector<ChainSample> read_chain(std::istream& in);

// ---- diagnostics / summaries --------------------------------------------

inline constexpr std::string_view kDiagnosticsHeader =
    "sweep,mean_transitions_per_t,active_set_max,log_lik,mean_candidates_per_t";
std::string diagnostics_row(const SweepDiagnostics& d);

std::string summary_to_json(const PosteriorSummary& summary, Relabel relabel);
void write_histogram_csv(std::ostream& out, const Histogram& h);

// ---- files ---------------------------------------------------------------

/// Whole-file read; throws IoError.
std::string read_file(const std::filesystem::path& path);
/// Whole-file write in binary mode; throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace edhmm
