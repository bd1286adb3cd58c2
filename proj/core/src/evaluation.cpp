#include "ggmlab/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

namespace ggmlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum SeedStream : std::uint64_t {
  kGraphStream = 0,
  kPartitionStream = 1,
  kSampleStream = 2,
  kNoiseStream = 3,
};

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void require_nonempty(const std::vector<double>& v, const std::string& what) {
  if (v.empty()) throw ParameterError(what + " grid must be non-empty");
}

int solver_rank(const std::string& name) {
  if (name == "glasso") return 0;
  if (name == "lvggm") return 1;
  if (name == "dilat") return 2;
  return 3;
}

// NaN-aware ordering for grid coordinates.
double key(double v) { return std::isnan(v) ? -1.0 : v; }

bool row_less(const ResultRow& a, const ResultRow& b) {
  return std::make_tuple(solver_rank(a.solver), a.run, key(a.sigma_l),
                         key(a.alpha), key(a.beta)) <
         std::make_tuple(solver_rank(b.solver), b.run, key(b.sigma_l),
                         key(b.alpha), key(b.beta));
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {kNaN, kNaN};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

SupportSet support_set(const Matrix& c, double tau) {
  if (c.rows() != c.cols()) throw ParameterError("support_set: matrix must be square");
  if (tau < 0.0) throw ParameterError("support_set: tau must be >= 0");
  SupportSet out;
  out.threshold = tau;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < c.cols(); ++j) {
      if (std::abs(c(i, j)) > tau) {
        out.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return out;
}

SupportSet make_support(std::vector<Edge> edges) {
  SupportSet out;
  for (auto& [u, v] : edges) {
    if (u == v) throw ParameterError("make_support: self-pair");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  out.edges = std::move(edges);
  return out;
}

double jaccard_distance(const SupportSet& a, const SupportSet& b) {
  std::size_t common = 0;
  auto ia = a.edges.begin();
  auto ib = b.edges.begin();
  while (ia != a.edges.end() && ib != b.edges.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  if (uni == 0) return 0.0;
  return 1.0 - static_cast<double>(common) / static_cast<double>(uni);
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kGlasso:
      return "glasso";
    case SolverKind::kLvggm:
      return "lvggm";
    case SolverKind::kDilat:
      return "dilat";
  }
  return "unknown";
}

SolverKind solver_from_string(const std::string& name) {
  if (name == "glasso") return SolverKind::kGlasso;
  if (name == "lvggm") return SolverKind::kLvggm;
  if (name == "dilat") return SolverKind::kDilat;
  throw ParameterError("unknown solver '" + name + "'");
}

void ExperimentConfig::validate() const {
  graph.validate();
  const int n = graph.vertex_count();
  if (n1 < 1 || n1 >= n) throw ParameterError("n1 must satisfy 1 <= n1 < n");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
  if (m < 1) throw ParameterError("m must be >= 1");
  if (runs < 1) throw ParameterError("runs must be >= 1");
  if (tau < 0.0) throw ParameterError("tau must be >= 0");
  require_nonempty(sigma_l, "sigma_l");
  for (double s : sigma_l) {
    if (!(s >= 0.0)) throw ParameterError("sigma_l values must be >= 0");
  }
  if (solvers.empty()) throw ParameterError("at least one solver is required");
  for (const auto& g : solvers) {
    require_nonempty(g.alpha, to_string(g.kind) + " alpha");
    if (g.kind != SolverKind::kGlasso) require_nonempty(g.beta, to_string(g.kind) + " beta");
  }
  solver_options.validate();
  dilat_options.validate();
}

const SolverGrid* ExperimentConfig::grid_for(SolverKind kind) const {
  for (const auto& g : solvers) {
    if (g.kind == kind) return &g;
  }
  return nullptr;
}

RunData prepare_run(const ExperimentConfig& cfg, int run) {
  RunData d;
  d.run = run;
  d.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(run));
  const std::uint64_t first_seed = derive_seed(cfg.master_seed, 0);
  d.graph = generate_graph(cfg.graph, derive_seed(d.seed, kGraphStream));
  d.partition = partition_vertices(
      d.graph, cfg.n1,
      derive_seed(cfg.resample_partition ? d.seed : first_seed, kPartitionStream));
  d.truth = build_ground_truth(d.graph, cfg.epsilon, d.partition);
  d.samples = draw_internal_samples(d.truth, cfg.m, derive_seed(d.seed, kSampleStream),
                                    cfg.center);
  d.summary_base = summary_base(d.truth, cfg.summary_base);
  d.noise_seed =
      derive_seed(cfg.renoise_per_run ? d.seed : first_seed, kNoiseStream);
  d.true_support = make_support(target_edges(d.graph, d.partition));
  return d;
}

ExternalSummary run_summary(const RunData& data, double sigma_l) {
  return make_external_summary(data.summary_base, sigma_l, data.noise_seed);
}

ResultRow evaluate_point(const ExperimentConfig& cfg, const RunData& data,
                         SolverKind kind, double alpha, double beta,
                         const ExternalSummary* summary) {
  ResultRow row;
  row.solver = to_string(kind);
  row.graph = cfg.graph.tag();
  row.run = data.run;
  row.seed = data.seed;
  row.alpha = alpha;
  row.beta = kind == SolverKind::kGlasso ? kNaN : beta;
  row.sigma_l = kNaN;
  row.snr = kNaN;
  row.tau = cfg.tau;

  const Matrix& s1 = data.samples.sigma1_hat;
  const auto start = std::chrono::steady_clock::now();
  Matrix estimate;
  switch (kind) {
    case SolverKind::kGlasso: {
      GlassoEstimate est = glasso_fit(s1, alpha, cfg.solver_options);
      estimate = std::move(est.sparse);
      row.iters = est.diagnostics.iterations;
      row.converged = est.diagnostics.converged;
      break;
    }
    case SolverKind::kLvggm: {
      LvggmEstimate est = lvggm_fit(s1, alpha, beta, cfg.solver_options);
      estimate = std::move(est.c_hat);
      row.iters = est.diagnostics.iterations;
      row.converged = est.diagnostics.converged;
      break;
    }
    case SolverKind::kDilat: {
      if (summary == nullptr) {
        throw ParameterError("evaluate_point: DiLat needs an external summary");
      }
      row.sigma_l = summary->sigma_l;
      row.snr = summary->snr;
      const DilatProblem prob(s1, summary->theta2_hat, alpha, beta,
                              cfg.dilat_options.gamma_t);
      DilatEstimate est = dilat_fit(prob, cfg.dilat_options);
      estimate = std::move(est.c_hat);
      row.iters = est.state.inner_iterations;
      row.converged = est.state.converged && est.state.inner_converged;
      break;
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  if (cfg.record_wall_time) {
    row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  }
  row.jaccard = jaccard_distance(support_set(estimate, cfg.tau), data.true_support);
  return row;
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn) {
  const auto pool = static_cast<std::size_t>(std::max(1, workers));
  if (pool == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(std::min(pool, count));
  for (std::size_t t = 0; t < std::min(pool, count); ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

namespace {

struct Task {
  int run = 0;
  SolverKind kind = SolverKind::kGlasso;
  double sigma_l = kNaN;
};

struct TaskOutput {
  std::vector<ResultRow> rows;
  std::vector<std::string> failures;
};

std::string describe_failure(const ResultRow& r, const std::string& what) {
  return r.solver + " run=" + std::to_string(r.run) + " alpha=" + fmt(r.alpha) +
         " beta=" + fmt(r.beta) + " sigma_l=" + fmt(r.sigma_l) + ": " + what;
}

// Sweeps one solver's (alpha, beta) grid for one run and summary.
void sweep_grid(const ExperimentConfig& cfg, const RunData& data,
                const SolverGrid& grid, const ExternalSummary* summary,
                TaskOutput& out) {
  const std::vector<double> betas =
      grid.kind == SolverKind::kGlasso ? std::vector<double>{kNaN} : grid.beta;
  for (double alpha : grid.alpha) {
    for (double beta : betas) {
      try {
        out.rows.push_back(evaluate_point(cfg, data, grid.kind, alpha, beta, summary));
      } catch (const Error& e) {
        ResultRow r;
        r.solver = to_string(grid.kind);
        r.run = data.run;
        r.alpha = alpha;
        r.beta = beta;
        r.sigma_l = summary ? summary->sigma_l : kNaN;
        out.failures.push_back(describe_failure(r, e.what()));
      }
    }
  }
}

}  // namespace

std::vector<ResultRow> best_per_run(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<int, std::string, int>, ResultRow> best;
  for (const auto& r : rows) {
    const auto k = std::make_tuple(solver_rank(r.solver), r.solver, r.run);
    auto it = best.find(k);
    if (it == best.end() || r.jaccard < it->second.jaccard) best[k] = r;
  }
  std::vector<ResultRow> out;
  out.reserve(best.size());
  for (auto& [k, r] : best) out.push_back(r);
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& best) {
  std::map<std::tuple<int, std::string, std::string>, std::vector<double>> groups;
  for (const auto& r : best) {
    groups[std::make_tuple(solver_rank(r.solver), r.solver, r.graph)].push_back(r.jaccard);
  }
  std::vector<SummaryRow> out;
  for (const auto& [k, xs] : groups) {
    SummaryRow s;
    s.solver = std::get<1>(k);
    s.graph = std::get<2>(k);
    s.runs = static_cast<int>(xs.size());
    std::tie(s.mean, s.std_error) = mean_and_stderr(xs);
    out.push_back(s);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  std::vector<RunData> data;
  data.reserve(cfg.runs);
  for (int r = 0; r < cfg.runs; ++r) data.push_back(prepare_run(cfg, r));

  std::vector<Task> tasks;
  for (int r = 0; r < cfg.runs; ++r) {
    for (const auto& g : cfg.solvers) {
      if (g.kind == SolverKind::kDilat) {
        for (double s : cfg.sigma_l) tasks.push_back({r, g.kind, s});
      } else {
        tasks.push_back({r, g.kind, kNaN});
      }
    }
  }
  std::vector<TaskOutput> outputs(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const Task& task = tasks[i];
    const RunData& d = data[task.run];
    const SolverGrid& grid = *cfg.grid_for(task.kind);
    if (task.kind == SolverKind::kDilat) {
      try {
        const ExternalSummary summary = run_summary(d, task.sigma_l);
        sweep_grid(cfg, d, grid, &summary, outputs[i]);
      } catch (const Error& e) {
        outputs[i].failures.push_back("dilat run=" + std::to_string(task.run) +
                                      " sigma_l=" + fmt(task.sigma_l) + ": " + e.what());
      }
    } else {
      sweep_grid(cfg, d, grid, nullptr, outputs[i]);
    }
  });

  ExperimentResult result;
  for (auto& o : outputs) {
    result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
    result.failures.insert(result.failures.end(), o.failures.begin(), o.failures.end());
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), row_less);
  result.best = best_per_run(result.rows);
  result.summary = summarize(result.best);
  return result;
}

std::vector<HoldoutSelection> select_on_holdout(const std::vector<ResultRow>& rows,
                                                int holdout_runs) {
  if (holdout_runs < 1) throw ParameterError("holdout_runs must be >= 1");
  using PointKey = std::tuple<double, double, double>;
  struct Acc {
    std::vector<double> holdout;
    std::map<int, double> test;
  };
  std::map<std::pair<int, std::string>, std::map<PointKey, Acc>> by_solver;
  for (const auto& r : rows) {
    auto& acc = by_solver[{solver_rank(r.solver), r.solver}]
                         [{key(r.alpha), key(r.beta), key(r.sigma_l)}];
    if (r.run < holdout_runs) {
      acc.holdout.push_back(r.jaccard);
    } else {
      acc.test[r.run] = r.jaccard;
    }
  }
  std::vector<HoldoutSelection> out;
  for (const auto& [solver, points] : by_solver) {
    const PointKey* best_key = nullptr;
    const Acc* best_acc = nullptr;
    double best_mean = std::numeric_limits<double>::infinity();
    for (const auto& [k, acc] : points) {
      const double mean = mean_and_stderr(acc.holdout).first;
      if (!std::isnan(mean) && mean < best_mean) {
        best_mean = mean;
        best_key = &k;
        best_acc = &acc;
      }
    }
    if (best_key == nullptr) continue;
    HoldoutSelection sel;
    sel.solver = solver.second;
    sel.alpha = std::get<0>(*best_key);
    sel.beta = std::get<1>(*best_key);
    sel.sigma_l = std::get<2>(*best_key);
    sel.holdout_mean = best_mean;
    std::vector<double> test;
    for (const auto& [run, j] : best_acc->test) test.push_back(j);
    sel.test_mean = mean_and_stderr(test).first;
    sel.test_runs = static_cast<int>(test.size());
    out.push_back(sel);
  }
  return out;
}

std::string to_string(SweepMode mode) {
  return mode == SweepMode::kAlphaBeta ? "alpha_beta" : "snr";
}

SweepMode sweep_mode_from_string(const std::string& name) {
  if (name == "alpha_beta") return SweepMode::kAlphaBeta;
  if (name == "snr") return SweepMode::kSnr;
  throw ParameterError("unknown sensitivity mode '" + name + "'");
}

SweepResult sensitivity_sweep(const ExperimentConfig& cfg, SweepMode mode,
                              int workers) {
  cfg.validate();
  const SolverGrid* grid = cfg.grid_for(SolverKind::kDilat);
  if (grid == nullptr) throw ParameterError("sensitivity sweep needs a dilat grid");
  if (mode == SweepMode::kSnr && cfg.snr.empty()) {
    throw ParameterError("snr sweep needs a non-empty snr grid");
  }
  for (double s : cfg.snr) {
    if (!(s > 0.0)) throw ParameterError("snr levels must be > 0");
  }

  std::vector<RunData> data;
  for (int r = 0; r < cfg.runs; ++r) data.push_back(prepare_run(cfg, r));

  // Levels are SNR values (snr mode) or the single first sigma_l.
  const std::vector<double> levels =
      mode == SweepMode::kSnr ? cfg.snr : std::vector<double>{cfg.sigma_l.front()};
  std::vector<std::pair<int, std::size_t>> tasks;
  for (int r = 0; r < cfg.runs; ++r) {
    for (std::size_t l = 0; l < levels.size(); ++l) tasks.emplace_back(r, l);
  }
  std::vector<TaskOutput> outputs(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const auto [run, level] = tasks[i];
    const RunData& d = data[run];
    try {
      const double sigma = mode == SweepMode::kSnr
                               ? sigma_for_snr(d.summary_base, levels[level])
                               : levels[level];
      const ExternalSummary summary = run_summary(d, sigma);
      sweep_grid(cfg, d, *grid, &summary, outputs[i]);
    } catch (const Error& e) {
      outputs[i].failures.push_back("dilat run=" + std::to_string(run) + ": " + e.what());
    }
  });

  SweepResult result;
  result.mode = mode;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (auto& r : outputs[i].rows) {
      if (mode == SweepMode::kSnr) r.snr = levels[tasks[i].second];
      result.rows.push_back(r);
    }
    result.failures.insert(result.failures.end(), outputs[i].failures.begin(),
                           outputs[i].failures.end());
  }

  // Surface: mean over runs per (alpha, beta, level).
  std::map<std::tuple<double, double, double>, std::pair<std::vector<double>, double>> surf;
  for (const auto& r : result.rows) {
    const double level = mode == SweepMode::kSnr ? r.snr : r.sigma_l;
    auto& e = surf[{level, r.alpha, r.beta}];
    e.first.push_back(r.jaccard);
    e.second = r.sigma_l;
  }
  for (const auto& [k, e] : surf) {
    SweepPoint p;
    p.alpha = std::get<1>(k);
    p.beta = std::get<2>(k);
    p.sigma_l = e.second;
    p.snr = mode == SweepMode::kSnr ? std::get<0>(k) : kNaN;
    std::tie(p.mean, p.std_error) = mean_and_stderr(e.first);
    p.count = static_cast<int>(e.first.size());
    result.surface.push_back(p);
  }

  if (mode == SweepMode::kSnr) {
    std::map<std::pair<double, int>, ResultRow> best;
    for (const auto& r : result.rows) {
      const auto k = std::make_pair(r.snr, r.run);
      auto it = best.find(k);
      if (it == best.end() || r.jaccard < it->second.jaccard) best[k] = r;
    }
    std::map<double, std::vector<double>> by_level;
    for (const auto& [k, r] : best) {
      result.per_seed.push_back(r);
      by_level[k.first].push_back(r.jaccard);
    }
    for (const auto& [level, xs] : by_level) {
      SweepPoint p;
      p.alpha = kNaN;
      p.beta = kNaN;
      p.snr = level;
      p.sigma_l = kNaN;
      std::tie(p.mean, p.std_error) = mean_and_stderr(xs);
      p.count = static_cast<int>(xs.size());
      result.trend.push_back(p);
    }
  }
  return result;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "solver,graph,seed,alpha,beta,sigma_l,tau,jaccard,iters,wall_ms\n";
  for (const auto& r : rows) {
    os << r.solver << ',' << r.graph << ',' << r.seed << ',' << fmt(r.alpha) << ','
       << fmt(r.beta) << ',' << fmt(r.sigma_l) << ',' << fmt(r.tau) << ','
       << fmt(r.jaccard) << ',' << r.iters << ',' << fmt(r.wall_ms) << '\n';
  }
}

void write_long_csv(std::ostream& os, const std::string& mode,
                    const std::vector<ResultRow>& rows) {
  os << "mode,solver,graph,run,seed,alpha,beta,sigma_l,snr,jaccard\n";
  for (const auto& r : rows) {
    os << mode << ',' << r.solver << ',' << r.graph << ',' << r.run << ',' << r.seed
       << ',' << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << fmt(r.sigma_l) << ','
       << fmt(r.snr) << ',' << fmt(r.jaccard) << '\n';
  }
}

}  // namespace ggmlab
