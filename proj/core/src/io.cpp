#include "edhmm/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "edhmm/error.hpp"

namespace edhmm {

using Json = nlohmann::ordered_json;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void reject_unknown(const Json& obj, const std::set<std::string>& allowed,
                    std::string_view where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.contains(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' in " + std::string(where));
    }
  }
}

const Json& require(const Json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError("missing key '" + std::string(key) + "' in " + std::string(where));
  }
  return *it;
}

double number(const Json& v, std::string_view what) {
  if (!v.is_number()) throw ConfigError(std::string(what) + " must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const Json& v, std::string_view what) {
  if (!v.is_array()) throw ConfigError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const Json& e : v) out.push_back(number(e, what));
  return out;
}

SquareMatrix<double> matrix(const Json& v, int K, std::string_view what) {
  if (!v.is_array() || static_cast<int>(v.size()) != K) {
    throw ConfigError(std::string(what) + " must have K rows");
  }
  SquareMatrix<double> A(K, 0.0);
  for (int i = 0; i < K; ++i) {
    const std::vector<double> row = number_array(v[i], what);
    if (static_cast<int>(row.size()) != K) {
      throw ConfigError(std::string(what) + " must have K columns");
    }
    for (int j = 0; j < K; ++j) A(i, j) = row[j];
  }
  return A;
}

Json matrix_json(const SquareMatrix<double>& A) {
  Json rows = Json::array();
  for (int i = 0; i < A.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < A.size(); ++j) row.push_back(A(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json priors_json(const Priors& p) {
  Json j;
  j["dirichlet_mass"] = p.dirichlet_mass;
  j["gamma_shape"] = p.gamma_shape;
  j["gamma_scale"] = p.gamma_scale;
  j["niw_nu0"] = p.niw_nu0;
  j["niw_lambda0"] = p.niw_lambda0;
  j["niw_kappa0"] = p.niw_kappa0;
  j["niw_mu0"] = p.niw_mu0;
  return j;
}

Priors priors_from(const Json& j, int K) {
  if (!j.is_object()) throw ConfigError("priors must be an object");
  reject_unknown(j,
                 {"dirichlet_mass", "gamma_shape", "gamma_scale", "niw_nu0",
                  "niw_lambda0", "niw_kappa0", "niw_mu0"},
                 "priors");
  Priors p = Priors::defaults_for(K);
  auto field = [&](const char* key, double& dst) {
    if (auto it = j.find(key); it != j.end()) dst = number(*it, key);
  };
  field("dirichlet_mass", p.dirichlet_mass);
  field("gamma_shape", p.gamma_shape);
  field("gamma_scale", p.gamma_scale);
  field("niw_nu0", p.niw_nu0);
  field("niw_lambda0", p.niw_lambda0);
  field("niw_kappa0", p.niw_kappa0);
  field("niw_mu0", p.niw_mu0);
  validate(p);
  return p;
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

ParamsDocument parse_params_json(std::string_view text) {
  const Json j = parse_json(text, "params");
  if (!j.is_object()) throw ConfigError("params document must be an object");
  reject_unknown(j, {"K", "A", "lambda", "theta", "priors"}, "params");
  ParamsDocument doc;
  ModelParams& p = doc.params;
  const Json& k = require(j, "K", "params");
  if (!k.is_number_integer()) throw ConfigError("K must be an integer");
  p.K = k.get<int>();
  if (p.K < 2) throw ConfigError("K must be at least 2");
  p.A = matrix(require(j, "A", "params"), p.K, "A");
  p.lambda = number_array(require(j, "lambda", "params"), "lambda");
  const Json& theta = require(j, "theta", "params");
  if (!theta.is_array()) throw ConfigError("theta must be an array");
  for (const Json& t : theta) {
    if (!t.is_object()) throw ConfigError("theta entries must be objects");
    reject_unknown(t, {"mu", "sigma2"}, "theta");
    p.theta.push_back({number(require(t, "mu", "theta"), "mu"),
                       number(require(t, "sigma2", "theta"), "sigma2")});
  }
  validate(p);
  if (auto it = j.find("priors"); it != j.end()) doc.priors = priors_from(*it, p.K);
  return doc;
}

std::string params_to_json(const ModelParams& params, const std::optional<Priors>& priors) {
  Json j;
  j["K"] = params.K;
  j["A"] = matrix_json(params.A);
  j["lambda"] = params.lambda;
  Json theta = Json::array();
  for (const Gaussian& g : params.theta) {
    Json t;
    t["mu"] = g.mu;
    t["sigma2"] = g.sigma2;
    theta.push_back(std::move(t));
  }
  j["theta"] = std::move(theta);
  if (priors) j["priors"] = priors_json(*priors);
  return j.dump(2) + "\n";
}

Priors parse_priors_json(std::string_view text, int K) {
  const Json j = parse_json(text, "priors");
  if (j.is_object() && j.size() == 1 && j.contains("priors")) {
    return priors_from(j["priors"], K);
  }
  return priors_from(j, K);
}

std::string priors_to_json(const Priors& priors) { return priors_json(priors).dump(2) + "\n"; }

void write_trajectory_csv(std::ostream& out, const Trajectory& z) {
  out << "t,y,x_true,d_true\n";
  for (std::size_t t = 0; t < z.length(); ++t) {
    out << (t + 1) << ',' << format_real(z.y[t]) << ',' << z.x[t] << ',' << z.d[t] << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <typename T>
T parse_cell(const std::string& s, long line_no, std::string_view column) {
  std::istringstream ss(s);
  T v{};
  ss >> v;
  if (ss.fail() || !ss.eof()) {
    throw ConfigError("line " + std::to_string(line_no) + ": cannot parse " +
                      std::string(column) + " value '" + s + "'");
  }
  return v;
}

}  // namespace

ObservedData read_observations_csv(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ConfigError("line 1: missing CSV header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv(line);
  int col_t = -1, col_y = -1, col_x = -1, col_d = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    if (header[i] == "t") col_t = i;
    else if (header[i] == "y") col_y = i;
    else if (header[i] == "x_true") col_x = i;
    else if (header[i] == "d_true") col_d = i;
    else throw ConfigError("line 1: unknown column '" + header[i] + "'");
  }
  if (col_t < 0 || col_y < 0) throw ConfigError("line 1: header must contain t and y");
  const bool has_truth = col_x >= 0 && col_d >= 0;

  ObservedData data;
  Trajectory truth;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " columns, got " +
                        std::to_string(cells.size()));
    }
    const long t = parse_cell<long>(cells[col_t], line_no, "t");
    if (t != static_cast<long>(data.y.size()) + 1) {
      throw ConfigError("line " + std::to_string(line_no) + ": t must count up from 1");
    }
    data.y.push_back(parse_cell<double>(cells[col_y], line_no, "y"));
    if (has_truth) {
      truth.x.push_back(parse_cell<int>(cells[col_x], line_no, "x_true"));
      truth.d.push_back(parse_cell<int>(cells[col_d], line_no, "d_true"));
    }
  }
  if (has_truth) {
    truth.y = data.y;
    // The initial point is not part of the file; any state other than x_1
    // is consistent with it.
    if (!truth.x.empty()) truth.x0 = truth.x[0] == 0 ? 1 : 0;
    data.truth = std::move(truth);
  }
  return data;
}

std::string chain_line(const ChainSample& s, std::optional<int> chain_index) {
  Json j;
  if (chain_index) j["chain"] = *chain_index;
  j["sweep"] = s.sweep;
  j["A"] = matrix_json(s.params.A);
  j["lambda"] = s.params.lambda;
  std::vector<double> mu, sigma2;
  for (const Gaussian& g : s.params.theta) {
    mu.push_back(g.mu);
    sigma2.push_back(g.sigma2);
  }
  j["mu"] = mu;
  j["sigma2"] = sigma2;
  j["log_joint"] = s.log_joint;
  if (s.latent) {
    j["x0"] = s.latent->x0;
    j["x"] = s.latent->x;
    j["d"] = s.latent->d;
  }
  return j.dump();
}

ChainSample parse_chain_line(std::string_view line, long line_no) {
  const std::string where = "chain line " + std::to_string(line_no);
  try {
    const Json j = parse_json(line, where);
    if (!j.is_object()) throw ConfigError("expected an object");
    reject_unknown(j, {"chain", "sweep", "A", "lambda", "mu", "sigma2", "log_joint", "x0", "x", "d"},
                   where);
    ChainSample s;
    const Json& sweep = require(j, "sweep", where);
    if (!sweep.is_number_integer()) throw ConfigError("sweep must be an integer");
    s.sweep = sweep.get<long>();
    s.params.lambda = number_array(require(j, "lambda", where), "lambda");
    s.params.K = static_cast<int>(s.params.lambda.size());
    s.params.A = matrix(require(j, "A", where), s.params.K, "A");
    const std::vector<double> mu = number_array(require(j, "mu", where), "mu");
    const std::vector<double> sigma2 = number_array(require(j, "sigma2", where), "sigma2");
    if (static_cast<int>(mu.size()) != s.params.K ||
        static_cast<int>(sigma2.size()) != s.params.K) {
      throw ConfigError("mu and sigma2 must have K entries");
    }
    for (int k = 0; k < s.params.K; ++k) s.params.theta.push_back({mu[k], sigma2[k]});
    s.log_joint = number(require(j, "log_joint", where), "log_joint");
    s.diag.sweep = s.sweep;
    s.diag.log_joint = s.log_joint;
    if (j.contains("x")) {
      Trajectory z;
      z.x = require(j, "x", where).get<std::vector<int>>();
      z.d = require(j, "d", where).get<std::vector<int>>();
      z.x0 = require(j, "x0", where).get<int>();
      s.latent = std::move(z);
    }
    return s;
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) == 0) throw;
    throw ConfigError(where + ": " + msg);
  } catch (const Json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

std::vector<ChainSample> read_chain(std::istream& in) {
  std::vector<ChainSample> chain;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    chain.push_back(parse_chain_line(line, line_no));
  }
  return chain;
}

std::string diagnostics_row(const SweepDiagnostics& d) {
  return std::to_string(d.sweep) + ',' + format_real(d.mean_transitions_per_t) + ',' +
         std::to_string(d.max_active_set) + ',' + format_real(d.log_lik) + ',' +
         format_real(d.mean_candidates_per_t);
}

std::string summary_to_json(const PosteriorSummary& summary, Relabel relabel) {
  Json j;
  j["n_samples"] = summary.n_samples;
  j["relabel"] = std::string(to_string(relabel));
  Json params = Json::array();
  for (const ParameterSummary& p : summary.parameters) {
    Json e;
    e["name"] = p.name;
    e["mean"] = p.mean;
    e["sd"] = p.sd;
    e["q025"] = p.q025;
    e["q975"] = p.q975;
    params.push_back(std::move(e));
  }
  j["parameters"] = std::move(params);
  return j.dump(2) + "\n";
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out << format_real(h.edges[b]) << ',' << format_real(h.edges[b + 1]) << ','
        << h.counts[b] << '\n';
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

}  // namespace edhmm
