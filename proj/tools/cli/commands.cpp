#include "cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli/config.hpp"
#include "ggmlab/baselines.hpp"
#include "ggmlab/dilat.hpp"
#include "ggmlab/evaluation.hpp"
#include "ggmlab/io.hpp"

#ifndef GGMLAB_VERSION
#define GGMLAB_VERSION "0.0.0"
#endif

namespace ggmlab::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::shared_ptr<spdlog::logger> logger() {
  auto log = spdlog::get("ggmlab");
  if (!log) {
    log = spdlog::stderr_color_mt("ggmlab");
    log->set_pattern("[%l] %v");
  }
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("GGMLAB_LOG")) {
    level = spdlog::level::from_str(env);
  }
  log->set_level(level);
  return log;
}

std::string utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// RunManifest: written before any computation, finalized afterwards.
class Manifest {
 public:
  Manifest(fs::path dir, std::string command, const std::vector<std::string>& argv)
      : dir_(std::move(dir)) {
    doc_["tool"] = "ggmlab";
    doc_["version"] = GGMLAB_VERSION;
    doc_["command"] = std::move(command);
    doc_["argv"] = argv;
    doc_["started_utc"] = utc_now();
    doc_["outputs"] = json::array();
  }

  json& doc() { return doc_; }
  void output(const std::string& name) { doc_["outputs"].push_back(name); }
  void write() const { write_json(dir_ / "manifest.json", doc_); }
  void finish(const std::string& status) {
    doc_["finished_utc"] = utc_now();
    doc_["status"] = status;
    write();
  }

 private:
  fs::path dir_;
  json doc_;
};

std::vector<std::string> to_strings(int argc, const char* const* argv) {
  return std::vector<std::string>(argv, argv + argc);
}

void snapshot_config(Manifest& manifest, const fs::path& out,
                     const LoadedConfig& loaded, const std::string& command) {
  write_text(out / "config.snapshot.toml", loaded.snapshot);
  manifest.doc()["master_seed"] = loaded.experiment.master_seed;
  manifest.doc()["config_snapshot"] = "config.snapshot.toml";
  manifest.doc()["replay"] =
      "ggmlab " + command + " --config config.snapshot.toml --out <dir>";
}

json summary_json(const std::vector<SummaryRow>& rows) {
  json arr = json::array();
  for (const auto& s : rows) {
    arr.push_back({{"solver", s.solver},
                   {"graph", s.graph},
                   {"runs", s.runs},
                   {"mean_jaccard", number(s.mean)},
                   {"std_error", number(s.std_error)}});
  }
  return arr;
}

json diagnostics_json(const AdmmDiagnostics& d) {
  return {{"iterations", d.iterations},
          {"primal_residual", number(d.primal_residual)},
          {"dual_residual", number(d.dual_residual)},
          {"primal_tolerance", number(d.primal_tolerance)},
          {"dual_tolerance", number(d.dual_tolerance)},
          {"converged", d.converged},
          {"objective", number(d.objective)}};
}

// ---- generate -----------------------------------------------------------

struct GenerateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& a, const std::vector<std::string>& argv) {
  const LoadedConfig loaded = load_config(a.config, {a.seed});
  const ExperimentConfig& cfg = loaded.experiment;
  const fs::path out(a.out);
  prepare_out_dir(out);
  Manifest manifest(out, "generate", argv);
  snapshot_config(manifest, out, loaded, "generate");
  for (const char* f : {"graph.edges", "target.edges", "partition.json", "theta.mtx",
                        "theta1.mtx", "theta2.mtx", "theta12.mtx",
                        "marginal_theta1.mtx", "x1.csv", "sigma1_hat.mtx",
                        "theta2_hat.mtx", "summary.json"}) {
    manifest.output(f);
  }
  manifest.write();

  logger()->info("generating {} (seed {})", cfg.graph.tag(), cfg.master_seed);
  const RunData d = prepare_run(cfg, 0);
  io::write_edge_list(out / "graph.edges", d.graph.n, d.graph.edges);
  io::write_edge_list(out / "target.edges", d.partition.n1(), d.true_support.edges);
  write_json(out / "partition.json", {{"n", d.graph.n},
                                      {"v1", d.partition.v1},
                                      {"v2", d.partition.v2},
                                      {"seed", d.partition.seed}});
  io::write_matrix(out / "theta.mtx", d.truth.theta);
  io::write_matrix(out / "theta1.mtx", d.truth.theta1);
  io::write_matrix(out / "theta2.mtx", d.truth.theta2);
  io::write_matrix(out / "theta12.mtx", d.truth.theta12);
  io::write_matrix(out / "marginal_theta1.mtx", d.truth.marginal_theta1);
  io::write_csv(out / "x1.csv", d.samples.x1);
  io::write_matrix(out / "sigma1_hat.mtx", d.samples.sigma1_hat);
  const ExternalSummary summary = run_summary(d, cfg.sigma_l.front());
  io::write_matrix(out / "theta2_hat.mtx", summary.theta2_hat);
  write_json(out / "summary.json", {{"sigma_l", summary.sigma_l},
                                    {"snr", number(summary.snr)},
                                    {"snr_db", number(summary.snr_db())},
                                    {"noise_seed", summary.seed},
                                    {"graph", cfg.graph.tag()},
                                    {"n1", d.partition.n1()},
                                    {"n2", d.partition.n2()},
                                    {"m", cfg.m}});
  manifest.finish("ok");
  return kExitOk;
}

// ---- estimate -----------------------------------------------------------

struct EstimateArgs {
  std::string solver;
  std::string sigma1;
  std::string theta2;
  std::string out;
  double alpha = 0.0;
  std::optional<double> beta;
  int max_iter = 5000;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
  double rho = 1.0;
  bool no_diagonal_penalty = false;
  bool adaptive = false;
  std::string init = "lvggm_warm";
  int max_outer = 20;
  double ccp_tol = 1e-4;
  double gamma_t = 0.0;
  std::uint64_t seed = 0;
  double tau = 1e-3;
};

int cmd_estimate(const EstimateArgs& a, const std::vector<std::string>& argv) {
  const SolverKind kind = solver_from_string(a.solver);
  if (kind != SolverKind::kGlasso && !a.beta) {
    throw ParameterError(a.solver + " requires --beta");
  }
  if (kind == SolverKind::kDilat && a.theta2.empty()) {
    throw ParameterError("dilat requires the external summary --theta2");
  }
  SolverOptions opts;
  opts.max_iter = a.max_iter;
  opts.eps_abs = a.eps_abs;
  opts.eps_rel = a.eps_rel;
  opts.rho = a.rho;
  opts.penalize_diagonal = !a.no_diagonal_penalty;
  opts.adaptive_rho = a.adaptive;
  opts.validate();

  const Matrix sigma1 = io::read_matrix(a.sigma1);
  const fs::path out(a.out);
  prepare_out_dir(out);
  Manifest manifest(out, "estimate", argv);
  manifest.output("c_hat.mtx");
  manifest.output("diagnostics.json");

  json diag = {{"solver", a.solver}, {"alpha", a.alpha}};
  if (a.beta) diag["beta"] = *a.beta;
  bool converged = false;
  Matrix c_hat;

  switch (kind) {
    case SolverKind::kGlasso: {
      manifest.write();
      const GlassoEstimate est = glasso_fit(sigma1, a.alpha, opts);
      c_hat = est.sparse;
      io::write_matrix(out / "c_hat.mtx", c_hat);
      diag["admm"] = diagnostics_json(est.diagnostics);
      converged = est.diagnostics.converged;
      break;
    }
    case SolverKind::kLvggm: {
      manifest.output("m_hat.mtx");
      manifest.write();
      const LvggmEstimate est = lvggm_fit(sigma1, a.alpha, *a.beta, opts);
      c_hat = est.c_hat;
      io::write_matrix(out / "c_hat.mtx", c_hat);
      io::write_matrix(out / "m_hat.mtx", est.m_hat);
      diag["admm"] = diagnostics_json(est.diagnostics);
      converged = est.diagnostics.converged;
      break;
    }
    case SolverKind::kDilat: {
      manifest.output("b_hat.mtx");
      manifest.output("objective_trace.csv");
      manifest.write();
      const Matrix theta2 = io::read_matrix(a.theta2);
      const DilatProblem prob(sigma1, theta2, a.alpha, *a.beta, a.gamma_t);
      DilatOptions d;
      d.inner = opts;
      d.max_outer = a.max_outer;
      d.ccp_tol = a.ccp_tol;
      d.init = init_mode_from_string(a.init);
      d.init_options.seed = a.seed;
      d.init_options.solver = opts;
      d.init_options.solver.adaptive_rho = false;
      const DilatEstimate est = dilat_fit(prob, d);
      c_hat = est.c_hat;
      io::write_matrix(out / "c_hat.mtx", c_hat);
      io::write_matrix(out / "b_hat.mtx", est.b_hat);
      std::ofstream trace(out / "objective_trace.csv");
      if (!trace) throw IoError("cannot write objective_trace.csv");
      trace << "outer,objective\n";
      for (std::size_t t = 0; t < est.state.objective_trace.size(); ++t) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", t, est.state.objective_trace[t]);
        trace << buf;
      }
      diag["ccp"] = {{"outer_iterations", est.state.t},
                     {"inner_iterations", est.state.inner_iterations},
                     {"inner_converged", est.state.inner_converged},
                     {"stop_reason", est.state.stop_reason},
                     {"objective", number(est.state.objective_trace.back())},
                     {"init", to_string(d.init)}};
      converged = est.state.converged && est.state.inner_converged;
      break;
    }
  }
  const SupportSet support = support_set(c_hat, a.tau);
  diag["tau"] = a.tau;
  diag["support_size"] = support.size();
  diag["converged"] = converged;
  write_json(out / "diagnostics.json", diag);
  manifest.finish(converged ? "ok" : "not_converged");
  if (!converged) {
    logger()->warn("{} did not converge; outputs written to {}", a.solver, out.string());
    return kExitNotConverged;
  }
  return kExitOk;
}

// ---- experiment / sensitivity -------------------------------------------

struct BatchArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int parallel = 1;
  std::string mode;
  std::string solver;
};

// --solver keeps a single configured solver grid.
void restrict_solver(LoadedConfig& loaded, const std::string& name,
                     Manifest& manifest) {
  if (name.empty()) return;
  auto& solvers = loaded.experiment.solvers;
  const SolverKind kind = solver_from_string(name);
  std::erase_if(solvers, [&](const SolverGrid& g) { return g.kind != kind; });
  if (solvers.empty()) throw ParameterError("solver '" + name + "' is not configured");
  manifest.doc()["solver"] = name;
  manifest.doc()["replay"] = manifest.doc()["replay"].get<std::string>() + " --solver " + name;
}

int cmd_experiment(const BatchArgs& a, const std::vector<std::string>& argv) {
  LoadedConfig loaded = load_config(a.config, {a.seed});
  const ExperimentConfig& cfg = loaded.experiment;
  const fs::path out(a.out);
  prepare_out_dir(out);
  Manifest manifest(out, "experiment", argv);
  snapshot_config(manifest, out, loaded, "experiment");
  restrict_solver(loaded, a.solver, manifest);
  manifest.doc()["parallel"] = a.parallel;
  for (const char* f : {"results.csv", "results_long.csv", "best.csv", "summary.json"}) {
    manifest.output(f);
  }
  manifest.write();

  logger()->info("experiment {} runs={} workers={}", cfg.graph.tag(), cfg.runs, a.parallel);
  const ExperimentResult res = run_experiment(cfg, a.parallel);
  {
    std::ofstream f(out / "results.csv", std::ios::binary);
    if (!f) throw IoError("cannot write results.csv");
    write_results_csv(f, res.rows);
  }
  {
    std::ofstream f(out / "results_long.csv", std::ios::binary);
    if (!f) throw IoError("cannot write results_long.csv");
    write_long_csv(f, "experiment", res.rows);
  }
  {
    std::ofstream f(out / "best.csv", std::ios::binary);
    if (!f) throw IoError("cannot write best.csv");
    write_results_csv(f, res.best);
  }
  json summary = {{"graph", cfg.graph.tag()},
                  {"runs", cfg.runs},
                  {"master_seed", cfg.master_seed},
                  {"tau", cfg.tau},
                  {"protocol", "best over grid per run"},
                  {"rows", summary_json(res.summary)},
                  {"failures", res.failures}};
  if (loaded.holdout_runs > 0) {
    json holdout = json::array();
    for (const auto& h : select_on_holdout(res.rows, loaded.holdout_runs)) {
      holdout.push_back({{"solver", h.solver},
                         {"alpha", number(h.alpha)},
                         {"beta", number(h.beta)},
                         {"sigma_l", number(h.sigma_l)},
                         {"holdout_mean", number(h.holdout_mean)},
                         {"test_mean", number(h.test_mean)},
                         {"test_runs", h.test_runs}});
    }
    summary["holdout_selection"] = {{"note", "grid point fixed on held-out runs, error reported on the rest"},
                                    {"holdout_runs", loaded.holdout_runs},
                                    {"rows", holdout}};
  }
  write_json(out / "summary.json", summary);
  for (const auto& f : res.failures) logger()->warn("solver failure: {}", f);
  manifest.finish("ok");
  return kExitOk;
}

int cmd_sensitivity(const BatchArgs& a, const std::vector<std::string>& argv) {
  LoadedConfig loaded = load_config(a.config, {a.seed});
  const SweepMode mode = a.mode.empty() ? loaded.sweep_mode : sweep_mode_from_string(a.mode);
  const ExperimentConfig& cfg = loaded.experiment;
  const fs::path out(a.out);
  prepare_out_dir(out);
  Manifest manifest(out, "sensitivity", argv);
  snapshot_config(manifest, out, loaded, "sensitivity");
  manifest.doc()["parallel"] = a.parallel;
  manifest.doc()["mode"] = to_string(mode);
  for (const char* f : {"sensitivity_long.csv", "surface.csv", "per_seed.csv", "summary.json"}) {
    manifest.output(f);
  }
  manifest.write();

  const SweepResult res = sensitivity_sweep(cfg, mode, a.parallel);
  {
    std::ofstream f(out / "sensitivity_long.csv", std::ios::binary);
    if (!f) throw IoError("cannot write sensitivity_long.csv");
    write_long_csv(f, to_string(mode), res.rows);
  }
  auto fmt = [](double v) -> std::string {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
  };
  {
    std::ofstream f(out / "surface.csv", std::ios::binary);
    if (!f) throw IoError("cannot write surface.csv");
    f << "alpha,beta,sigma_l,snr,mean_jaccard,std_error,count\n";
    for (const auto& p : res.surface) {
      f << fmt(p.alpha) << ',' << fmt(p.beta) << ',' << fmt(p.sigma_l) << ','
        << fmt(p.snr) << ',' << fmt(p.mean) << ',' << fmt(p.std_error) << ','
        << p.count << '\n';
    }
  }
  {
    std::ofstream f(out / "per_seed.csv", std::ios::binary);
    if (!f) throw IoError("cannot write per_seed.csv");
    f << "snr,sigma_l,run,seed,alpha,beta,jaccard\n";
    for (const auto& r : res.per_seed) {
      f << fmt(r.snr) << ',' << fmt(r.sigma_l) << ',' << r.run << ',' << r.seed << ','
        << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << fmt(r.jaccard) << '\n';
    }
  }
  json trend = json::array();
  for (const auto& p : res.trend) {
    trend.push_back({{"snr", number(p.snr)},
                     {"mean_jaccard", number(p.mean)},
                     {"std_error", number(p.std_error)},
                     {"runs", p.count}});
  }
  write_json(out / "summary.json", {{"graph", cfg.graph.tag()},
                                    {"mode", to_string(mode)},
                                    {"runs", cfg.runs},
                                    {"master_seed", cfg.master_seed},
                                    {"trend", trend},
                                    {"failures", res.failures}});
  manifest.finish("ok");
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  const std::vector<std::string> args = to_strings(argc, argv);
  CLI::App app{"Semiblind subgraph topology inference for Gaussian graphical models"};
  app.set_version_flag("--version", std::string(GGMLAB_VERSION));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Materialize one synthetic instance");
  generate->add_option("--config", gen.config, "TOML configuration")->required();
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--seed", gen.seed, "Override the master seed");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Fit one solver on input files");
  estimate->add_option("--solver", est.solver, "glasso | lvggm | dilat")
      ->required()
      ->check(CLI::IsMember({"glasso", "lvggm", "dilat"}));
  estimate->add_option("--sigma1", est.sigma1, "Sample covariance (.mtx or .csv)")
      ->required();
  estimate->add_option("--theta2", est.theta2, "External precision summary (dilat)");
  estimate->add_option("--out", est.out, "Output directory")->required();
  estimate->add_option("--alpha", est.alpha, "l1 weight")->required();
  estimate->add_option("--beta", est.beta, "nuclear (lvggm) or l2,1 (dilat) weight");
  estimate->add_option("--max-iter", est.max_iter, "ADMM iteration cap");
  estimate->add_option("--eps-abs", est.eps_abs, "Absolute ADMM tolerance");
  estimate->add_option("--eps-rel", est.eps_rel, "Relative ADMM tolerance");
  estimate->add_option("--rho", est.rho, "ADMM penalty");
  estimate->add_flag("--no-diagonal-penalty", est.no_diagonal_penalty,
                     "Exclude the diagonal from the l1 penalty");
  estimate->add_flag("--adaptive", est.adaptive, "Residual-balancing penalty updates");
  estimate->add_option("--init", est.init, "dilat init: lvggm_warm | glasso_warm | random | zero_b");
  estimate->add_option("--max-outer", est.max_outer, "dilat outer iteration cap");
  estimate->add_option("--ccp-tol", est.ccp_tol, "dilat relative objective tolerance");
  estimate->add_option("--gamma-t", est.gamma_t, "dilat S-matrix block scalar");
  estimate->add_option("--seed", est.seed, "Seed for the random init");
  estimate->add_option("--tau", est.tau, "Support threshold reported in diagnostics");

  BatchArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Grid-search benchmark over runs");
  experiment->add_option("--config", exp.config, "TOML configuration")->required();
  experiment->add_option("--out", exp.out, "Output directory")->required();
  experiment->add_option("--seed", exp.seed, "Override the master seed");
  experiment->add_option("--parallel", exp.parallel, "Worker threads")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--solver", exp.solver, "Restrict to one configured solver")
      ->check(CLI::IsMember({"glasso", "lvggm", "dilat"}));

  BatchArgs sens;
  auto* sensitivity = app.add_subcommand("sensitivity", "DiLat sensitivity sweep");
  sensitivity->add_option("--config", sens.config, "TOML configuration")->required();
  sensitivity->add_option("--out", sens.out, "Output directory")->required();
  sensitivity->add_option("--seed", sens.seed, "Override the master seed");
  sensitivity->add_option("--parallel", sens.parallel, "Worker threads")
      ->check(CLI::PositiveNumber);
  sensitivity->add_option("--mode", sens.mode, "alpha_beta | snr")
      ->check(CLI::IsMember({"alpha_beta", "snr"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen, args);
    if (*estimate) return cmd_estimate(est, args);
    if (*experiment) return cmd_experiment(exp, args);
    if (*sensitivity) return cmd_sensitivity(sens, args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ggmlab::cli
