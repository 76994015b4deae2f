/*******************************************************************************
 * Copyright 2026 the nnfir authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

// nnfir CLI: fit, simulate, experiment, kkt.
//
// Exit codes: 0 success (for `kkt`: residual within tolerance), 1 failed
// check, 2 usage error, 3 data/parse error, 4 ill-posed or infeasible
// problem.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nnfir/errors.hpp"
#include "nnfir/experiment.hpp"
#include "nnfir/io.hpp"
#include "nnfir/kernels.hpp"
#include "nnfir/linop.hpp"
#include "nnfir/solver.hpp"
#include "nnfir/synth.hpp"
#include "nnfir/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitIllPosed = 4;

std::string tool_version() {
  return std::string(nnfir::kToolName) + " " + nnfir::kVersion;
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    std::string tok =
        s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    tok = b == std::string::npos ? std::string() : tok.substr(b, e - b + 1);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size())
      throw std::invalid_argument(what + ": cannot parse '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument(what + ": empty list");
  return out;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return static_cast<std::size_t>(v);
  } catch (...) {
    throw std::invalid_argument(what + ": cannot parse '" + s +
                                "' as a nonnegative integer");
  }
}

// "(N,m),(N,m),..." with optional whitespace.
std::vector<nnfir::ScalePoint> parse_scales(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  std::vector<nnfir::ScalePoint> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != '(')
      throw std::invalid_argument("scales: expected '(' in '" + raw + "'");
    const std::size_t close = s.find(')', pos);
    if (close == std::string::npos)
      throw std::invalid_argument("scales: missing ')' in '" + raw + "'");
    const std::string inner = s.substr(pos + 1, close - pos - 1);
    const std::size_t comma = inner.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("scales: expected '(N,m)' in '" + raw + "'");
    nnfir::ScalePoint p;
    p.horizon = parse_size(inner.substr(0, comma), "scales N");
    p.m = parse_size(inner.substr(comma + 1), "scales m");
    out.push_back(p);
    pos = close + 1;
    if (pos < s.size()) {
      if (s[pos] != ',')
        throw std::invalid_argument("scales: expected ',' between pairs");
      ++pos;
    }
  }
  if (out.empty()) throw std::invalid_argument("scales: empty list");
  return out;
}

// Fixed interior default used when no true response is supplied.
nnfir::ImpulseResponse default_h_star(std::size_t q) {
  static constexpr double pattern[6] = {1.2, 0.5, 1.0, 0.3, 0.8, 0.6};
  std::vector<double> h(q + 1);
  for (std::size_t k = 0; k <= q; ++k) h[k] = pattern[k % 6];
  return nnfir::ImpulseResponse(h);
}

json config_json(const nnfir::FitConfig& cfg) {
  json j;
  j["max_iterations"] = cfg.max_iterations;
  j["divergence_tol"] = cfg.divergence_tol;
  j["param_tol"] = cfg.param_tol;
  j["kkt_tol"] = cfg.kkt_tol;
  j["trace"] = cfg.trace;
  if (cfg.initial)
    j["initial_h"] = cfg.initial->coeffs();
  else
    j["initial_h"] = nullptr;
  return j;
}

void write_json(const fs::path& path, const json& j) {
  nnfir::io::write_text_file(path.string(), j.dump(2) + "\n");
}

struct FitFlags {
  std::string u_file, y_file, out_dir = ".";
  std::size_t q = 0;
  nnfir::FitConfig cfg;
  std::string init_h;
};

int run_fit(const FitFlags& f) {
  nnfir::FitConfig cfg = f.cfg;
  if (!f.init_h.empty())
    cfg.initial = nnfir::ImpulseResponse(
        parse_double_list(f.init_h, "--init-h"));

  const nnfir::SignalMatrix u = nnfir::io::read_matrix_csv(f.u_file);
  const nnfir::SignalMatrix y = nnfir::io::read_matrix_csv(f.y_file);

  const nnfir::FitResult result = nnfir::fit(u, y, f.q, cfg);
  if (!result.condition_ok) {
    std::cerr << "warning: well-posedness condition fails at "
              << result.condition_failures.size()
              << " time indices; the minimizer may not be unique\n";
  }

  fs::create_directories(f.out_dir);
  const fs::path dir(f.out_dir);

  json h_json = nnfir::io::response_to_json(result.h_hat);
  h_json["final_divergence"] = result.divergence_trace.empty()
                                   ? nullptr
                                   : json(result.divergence_trace.back());
  h_json["kkt_residual"] = result.kkt_residual;
  h_json["iterations"] = result.iterations_used;
  h_json["status"] = nnfir::to_string(result.status);
  h_json["condition_ok"] = result.condition_ok;
  write_json(dir / "h_hat.json", h_json);
  json outputs = json::array({"h_hat.json", "manifest.json"});

  if (cfg.trace && result.status != nnfir::FitStatus::ill_posed) {
    nnfir::io::write_trace_csv((dir / "trace.csv").string(), result);
    outputs.push_back("trace.csv");
  }

  json manifest;
  manifest["command"] = "fit";
  manifest["tool_version"] = tool_version();
  manifest["q"] = f.q;
  manifest["config"] = config_json(cfg);
  manifest["inputs"] = {
      {"u", {{"path", f.u_file}, {"fnv1a64", nnfir::io::file_digest(f.u_file)}}},
      {"y", {{"path", f.y_file}, {"fnv1a64", nnfir::io::file_digest(f.y_file)}}}};
  manifest["outputs"] = outputs;
  write_json(dir / "manifest.json", manifest);

  if (result.status == nnfir::FitStatus::ill_posed) {
    std::cerr << "error: problem is ill posed (infinite objective or zero "
                 "lag weight)\n";
    return kExitIllPosed;
  }

  std::cout << "status: " << nnfir::to_string(result.status) << " after "
            << result.iterations_used << " iterations\n";
  std::cout << "h_hat:";
  for (double v : result.h_hat.coeffs()) std::cout << ' ' << v;
  std::cout << "\ndivergence: " << result.divergence_trace.back()
            << "\nkkt_residual: " << result.kkt_residual << "\n";
  return 0;
}

struct SimulateFlags {
  std::size_t q = 0, horizon = 0, m = 0;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  std::string h_star_list, h_star_file, out_dir = ".";
  nnfir::InputLaw law;
};

int run_simulate(const SimulateFlags& f) {
  nnfir::ImpulseResponse h_star =
      !f.h_star_file.empty() ? nnfir::io::read_response_json(f.h_star_file)
      : !f.h_star_list.empty()
          ? nnfir::ImpulseResponse(parse_double_list(f.h_star_list, "--h-star"))
          : default_h_star(f.q);
  if (h_star.order() != f.q)
    throw std::invalid_argument("--h-star length must be q + 1");
  for (double v : h_star.coeffs())
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument(
          "--h-star must be finite and nonnegative componentwise");

  nnfir::RngStream su = nnfir::RngStream::derive(f.seed, 0, 0, 0);
  nnfir::RngStream sd = nnfir::RngStream::derive(f.seed, 0, 0, 1);
  const nnfir::SignalMatrix u = nnfir::gen_inputs(f.horizon, f.m, f.law, su);
  const nnfir::NoiseModel noise{f.sigma};
  const nnfir::SignalMatrix y = nnfir::gen_noisy_outputs(h_star, u, noise, sd);

  fs::create_directories(f.out_dir);
  const fs::path dir(f.out_dir);
  nnfir::io::write_matrix_csv((dir / "U.csv").string(), u,
                              "inputs: rows = time 0..N, cols = experiments");
  nnfir::io::write_matrix_csv((dir / "Y.csv").string(), y,
                              "outputs: rows = time 0..N, cols = experiments");

  json manifest;
  manifest["command"] = "simulate";
  manifest["tool_version"] = tool_version();
  manifest["q"] = f.q;
  manifest["N"] = f.horizon;
  manifest["m"] = f.m;
  manifest["sigma"] = f.sigma;
  manifest["seed"] = f.seed;
  manifest["h_star"] = h_star.coeffs();
  manifest["input_law"] = {{"lower", f.law.lower}, {"upper", f.law.upper}};
  manifest["outputs"] = {
      {"U.csv", nnfir::io::file_digest((dir / "U.csv").string())},
      {"Y.csv", nnfir::io::file_digest((dir / "Y.csv").string())}};
  write_json(dir / "manifest.json", manifest);

  std::cout << "wrote " << (dir / "U.csv").string() << " and "
            << (dir / "Y.csv").string() << "\n";
  return 0;
}

struct ExperimentFlags {
  std::string regime = "array_iid";
  std::string scales;
  std::size_t replications = 0;
  std::size_t q = 5;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  std::string h_star_list;
  nnfir::InputLaw law;
  unsigned threads = 1;
  std::string out_dir = ".";
  nnfir::FitConfig cfg;
  std::string misspecified;  // empty = well-specified
  std::string gen_b = "1.0,0.5";
  double gen_a = 0.5;
  double gen_p = 2.0;
};

int run_experiment(const ExperimentFlags& f) {
  nnfir::ExperimentReport report;
  nnfir::FitConfig cfg = f.cfg;
  cfg.trace = false;

  json manifest;
  manifest["command"] = "experiment";
  manifest["tool_version"] = tool_version();
  manifest["q"] = f.q;
  manifest["seed"] = f.seed;
  manifest["scales"] = f.scales;
  manifest["replications"] = f.replications;
  manifest["threads"] = f.threads;
  manifest["input_law"] = {{"lower", f.law.lower}, {"upper", f.law.upper}};
  manifest["config"] = config_json(cfg);

  if (f.misspecified.empty()) {
    nnfir::RegimeSpec spec;
    spec.regime = nnfir::regime_from_string(f.regime);
    spec.scales = parse_scales(f.scales);
    spec.replications = f.replications;
    spec.h_star = f.h_star_list.empty()
                      ? default_h_star(f.q)
                      : nnfir::ImpulseResponse(
                            parse_double_list(f.h_star_list, "--h-star"));
    if (spec.h_star.order() != f.q)
      throw std::invalid_argument("--h-star length must be q + 1");
    spec.noise.sigma = f.sigma;
    spec.inputs = f.law;
    spec.seed = f.seed;
    report = nnfir::run_regime(spec, cfg, f.threads);
    manifest["regime"] = f.regime;
    manifest["sigma"] = f.sigma;
    manifest["h_star"] = spec.h_star.coeffs();
  } else {
    nnfir::MisspecSpec spec;
    spec.generator.kind = nnfir::generator_kind_from_string(f.misspecified);
    spec.generator.b = parse_double_list(f.gen_b, "--gen-b");
    spec.generator.a = f.gen_a;
    spec.generator.p = f.gen_p;
    spec.scales = parse_scales(f.scales);
    spec.replications = f.replications;
    spec.q = f.q;
    spec.inputs = f.law;
    spec.seed = f.seed;
    report = nnfir::run_misspecified(spec, cfg, f.threads);
    manifest["generator"] = {{"kind", f.misspecified},
                             {"b", spec.generator.b},
                             {"a", f.gen_a},
                             {"p", f.gen_p}};
  }

  fs::create_directories(f.out_dir);
  const fs::path dir(f.out_dir);
  write_json(dir / "report.json", nnfir::io::report_to_json(report));
  nnfir::io::write_estimates_csv((dir / "estimates.csv").string(), report);
  manifest["outputs"] =
      json::array({"report.json", "estimates.csv", "manifest.json"});
  write_json(dir / "manifest.json", manifest);

  std::size_t excluded = 0;
  for (const auto& s : report.scales) excluded += s.excluded;
  std::cout << "wrote " << (dir / "report.json").string() << " ("
            << report.scales.size() << " scales, " << report.replications
            << " replications";
  if (excluded) std::cout << ", " << excluded << " excluded";
  std::cout << ")\n";
  return 0;
}

struct KktFlags {
  std::string u_file, y_file, h_file, out_dir;
  double kkt_tol = 1e-6;
};

int run_kkt(const KktFlags& f) {
  const nnfir::SignalMatrix u = nnfir::io::read_matrix_csv(f.u_file);
  const nnfir::SignalMatrix y = nnfir::io::read_matrix_csv(f.y_file);
  const nnfir::ImpulseResponse h = nnfir::io::read_response_json(f.h_file);

  const nnfir::GradientVector g = nnfir::gradient(h, u, y);
  const double eps_b = nnfir::boundary_epsilon(u, y, h.order());

  double overall = 0.0;
  json components = json::array();
  std::cout << "component,value,class,gradient,residual\n";
  for (std::size_t k = 0; k < h.size(); ++k) {
    const bool interior = h[k] > eps_b;
    const double r = interior ? std::abs(g[k]) : std::max(0.0, -g[k]);
    overall = std::max(overall, r);
    std::cout << k << ',' << nnfir::io::format_full(h[k]) << ','
              << (interior ? "interior" : "boundary") << ','
              << nnfir::io::format_full(g[k]) << ','
              << nnfir::io::format_full(r) << "\n";
    components.push_back({{"component", k},
                          {"value", h[k]},
                          {"class", interior ? "interior" : "boundary"},
                          {"gradient", g[k]},
                          {"residual", r}});
  }
  const bool pass = overall <= f.kkt_tol;
  std::cout << "overall_residual," << nnfir::io::format_full(overall)
            << ",tolerance," << nnfir::io::format_full(f.kkt_tol) << ","
            << (pass ? "pass" : "fail") << "\n";

  if (!f.out_dir.empty()) {
    fs::create_directories(f.out_dir);
    const fs::path dir(f.out_dir);
    json report;
    report["components"] = components;
    report["overall_residual"] = overall;
    report["tolerance"] = f.kkt_tol;
    report["pass"] = pass;
    write_json(dir / "kkt.json", report);
    json manifest;
    manifest["command"] = "kkt";
    manifest["tool_version"] = tool_version();
    manifest["kkt_tol"] = f.kkt_tol;
    manifest["inputs"] = {
        {"u",
         {{"path", f.u_file}, {"fnv1a64", nnfir::io::file_digest(f.u_file)}}},
        {"y",
         {{"path", f.y_file}, {"fnv1a64", nnfir::io::file_digest(f.y_file)}}},
        {"h",
         {{"path", f.h_file}, {"fnv1a64", nnfir::io::file_digest(f.h_file)}}}};
    manifest["outputs"] = json::array({"kkt.json", "manifest.json"});
    write_json(dir / "manifest.json", manifest);
  }
  return pass ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonnegative FIR (moving-average) identification by "
               "I-divergence minimization"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  FitFlags fit_flags;
  auto* fit_cmd = app.add_subcommand(
      "fit", "fit a nonnegative order-q impulse response to U, Y data");
  fit_cmd->add_option("--u", fit_flags.u_file, "input matrix CSV")->required();
  fit_cmd->add_option("--y", fit_flags.y_file, "output matrix CSV")->required();
  fit_cmd->add_option("--q", fit_flags.q, "model order")->required();
  fit_cmd->add_option("--out-dir", fit_flags.out_dir, "output directory");
  fit_cmd->add_option("--max-iter", fit_flags.cfg.max_iterations,
                      "iteration cap");
  fit_cmd->add_option("--div-tol", fit_flags.cfg.divergence_tol,
                      "absolute divergence-decrease stop");
  fit_cmd->add_option("--param-tol", fit_flags.cfg.param_tol,
                      "relative parameter-change stop");
  fit_cmd->add_option("--kkt-tol", fit_flags.cfg.kkt_tol,
                      "optimality tolerance (reported)");
  fit_cmd->add_flag("--trace,!--no-trace", fit_flags.cfg.trace,
                    "write trace.csv");
  fit_cmd->add_option("--init-h", fit_flags.init_h,
                      "strictly positive starting point, comma separated");

  SimulateFlags sim_flags;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "generate a synthetic dataset from a known system");
  sim_cmd->add_option("--q", sim_flags.q, "model order")->required();
  sim_cmd->add_option("--N", sim_flags.horizon, "time horizon")->required();
  sim_cmd->add_option("--m", sim_flags.m, "number of experiments")->required();
  sim_cmd->add_option("--sigma", sim_flags.sigma, "noise scale (0 = noiseless)");
  sim_cmd->add_option("--seed", sim_flags.seed, "root seed");
  sim_cmd->add_option("--h-star", sim_flags.h_star_list,
                      "true response, comma separated");
  sim_cmd->add_option("--h-star-file", sim_flags.h_star_file,
                      "true response JSON file");
  sim_cmd->add_option("--lower", sim_flags.law.lower, "input law lower bound");
  sim_cmd->add_option("--upper", sim_flags.law.upper, "input law upper bound");
  sim_cmd->add_option("--out-dir", sim_flags.out_dir, "output directory");

  ExperimentFlags exp_flags;
  auto* exp_cmd = app.add_subcommand(
      "experiment", "Monte Carlo consistency/normality experiments");
  exp_cmd->add_option("--regime", exp_flags.regime,
                      "columns_iid, rows_iid, or array_iid");
  exp_cmd->add_option("--scales", exp_flags.scales, "\"(N,m),(N,m),...\"")
      ->required();
  exp_cmd->add_option("--replications", exp_flags.replications,
                      "replications per scale (>= 2)")
      ->required();
  exp_cmd->add_option("--q", exp_flags.q, "model order");
  exp_cmd->add_option("--sigma", exp_flags.sigma, "noise scale");
  exp_cmd->add_option("--seed", exp_flags.seed, "root seed");
  exp_cmd->add_option("--h-star", exp_flags.h_star_list,
                      "true response, comma separated");
  exp_cmd->add_option("--lower", exp_flags.law.lower, "input law lower bound");
  exp_cmd->add_option("--upper", exp_flags.law.upper, "input law upper bound");
  exp_cmd->add_option("--threads", exp_flags.threads,
                      "worker threads (0 = hardware)");
  exp_cmd->add_option("--out-dir", exp_flags.out_dir, "output directory");
  exp_cmd->add_option("--max-iter", exp_flags.cfg.max_iterations,
                      "iteration cap");
  exp_cmd->add_option("--div-tol", exp_flags.cfg.divergence_tol,
                      "absolute divergence-decrease stop");
  exp_cmd->add_option("--param-tol", exp_flags.cfg.param_tol,
                      "relative parameter-change stop");
  exp_cmd->add_option("--misspecified", exp_flags.misspecified,
                      "generator kind: fir, iir, or power");
  exp_cmd->add_option("--gen-b", exp_flags.gen_b,
                      "generator feedforward coefficients");
  exp_cmd->add_option("--gen-a", exp_flags.gen_a, "iir pole (0 < a < 1)");
  exp_cmd->add_option("--gen-p", exp_flags.gen_p, "power exponent");

  KktFlags kkt_flags;
  auto* kkt_cmd = app.add_subcommand(
      "kkt", "check first-order optimality of a response against data");
  kkt_cmd->add_option("--u", kkt_flags.u_file, "input matrix CSV")->required();
  kkt_cmd->add_option("--y", kkt_flags.y_file, "output matrix CSV")->required();
  kkt_cmd->add_option("--h-file", kkt_flags.h_file, "response JSON file")
      ->required();
  kkt_cmd->add_option("--kkt-tol", kkt_flags.kkt_tol, "pass threshold");
  kkt_cmd->add_option("--out-dir", kkt_flags.out_dir,
                      "also write kkt.json and manifest.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(fit_cmd)) return run_fit(fit_flags);
    if (app.got_subcommand(sim_cmd)) return run_simulate(sim_flags);
    if (app.got_subcommand(exp_cmd)) return run_experiment(exp_flags);
    if (app.got_subcommand(kkt_cmd)) return run_kkt(kkt_flags);
  } catch (const nnfir::InfeasiblePointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIllPosed;
  } catch (const nnfir::DegenerateDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIllPosed;
  } catch (const nnfir::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
