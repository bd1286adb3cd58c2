#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ggmlab/baselines.hpp"
#include "ggmlab/dilat.hpp"
#include "ggmlab/graph.hpp"
#include "ggmlab/sampling.hpp"

namespace ggmlab {

struct SupportSet {
  std::vector<Edge> edges;  // sorted, i < j
  double threshold = 0.0;

  std::size_t size() const { return edges.size(); }
  bool empty() const { return edges.empty(); }
};

/// {(i, j) : i < j, |c_ij| > tau}.
SupportSet support_set(const Matrix& c, double tau);

// Support from an explicit edge list (normalized, sorted, deduplicated).
SupportSet make_support(std::vector<Edge> edges);

/// 1 - |A n B| / |A u B|. Two empty sets are at distance 0.
double jaccard_distance(const SupportSet& a, const SupportSet& b);

enum class SolverKind { kGlasso, kLvggm, kDilat };

std::string to_string(SolverKind kind);
SolverKind solver_from_string(const std::string& name);

struct SolverGrid {
  SolverKind kind = SolverKind::kGlasso;
  std::vector<double> alpha;
  std::vector<double> beta;  // unused by GLasso
};

struct ExperimentConfig {
  GraphSpec graph = GraphSpec::grid(9, 9);
  int n1 = 49;
  double epsilon = 1e-3;
  int m = 500;
  bool center = false;
  int runs = 1;
  std::uint64_t master_seed = 1;
  // When false, run 0's partition is reused for every run.
  bool resample_partition = true;
  // When false, run 0's noise matrix G is reused for every run.
  bool renoise_per_run = true;
  SummaryBase summary_base = SummaryBase::kPrecisionBlock;
  std::vector<double> sigma_l = {1.0};
  std::vector<double> snr;  // SNR sweep levels (sensitivity, snr mode)
  double tau = 1e-3;
  std::vector<SolverGrid> solvers;
  SolverOptions solver_options;
  DilatOptions dilat_options;
  bool record_wall_time = false;

  void validate() const;
  const SolverGrid* grid_for(SolverKind kind) const;
};

/// One row per (solver, run, grid point).
struct ResultRow {
  std::string solver;
  std::string graph;
  int run = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double beta = 0.0;     // NaN for GLasso
  double sigma_l = 0.0;  // NaN for the blind solvers
  double snr = 0.0;      // NaN for the blind solvers
  double tau = 0.0;
  double jaccard = 1.0;
  int iters = 0;
  double wall_ms = 0.0;
  bool converged = false;
};

/// Everything one run needs. Solvers only ever see `samples.sigma1_hat` and
/// the external summary; `true_support` is used for scoring alone.
struct RunData {
  int run = 0;
  std::uint64_t seed = 0;
  GraphModel graph;
  Partition partition;
  PartitionedPrecision truth;
  SampleSet samples;
  Matrix summary_base;  // L2_hat
  std::uint64_t noise_seed = 0;
  SupportSet true_support;
};

RunData prepare_run(const ExperimentConfig& cfg, int run);

ExternalSummary run_summary(const RunData& data, double sigma_l);

/// Fits one solver at one grid point and scores it against the run's truth.
/// `summary` is required for DiLat and ignored otherwise.
ResultRow evaluate_point(const ExperimentConfig& cfg, const RunData& data,
                         SolverKind kind, double alpha, double beta,
                         const ExternalSummary* summary);

struct SummaryRow {
  std::string solver;
  std::string graph;
  int runs = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;   // every grid point
  std::vector<ResultRow> best;   // per (solver, run): minimum over the grid
  std::vector<SummaryRow> summary;
  std::vector<std::string> failures;
};

/// Per run: graph -> partition -> truth -> samples -> summary, then every
/// solver over its grid; per-run best over the grid, averaged over runs.
/// Deterministic in cfg.master_seed regardless of `workers`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 1);

// Per-run best and the mean / standard error over runs, per solver.
std::vector<ResultRow> best_per_run(const std::vector<ResultRow>& rows);
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& best);

/// Held-out protocol: the grid point is chosen by mean error over the first
/// `holdout_runs` runs and reported on the remaining runs.
struct HoldoutSelection {
  std::string solver;
  double alpha = 0.0;
  double beta = 0.0;
  double sigma_l = 0.0;
  double holdout_mean = 0.0;
  double test_mean = 0.0;
  int test_runs = 0;
};

std::vector<HoldoutSelection> select_on_holdout(
    const std::vector<ResultRow>& rows, int holdout_runs);

enum class SweepMode { kAlphaBeta, kSnr };

std::string to_string(SweepMode mode);
SweepMode sweep_mode_from_string(const std::string& name);

struct SweepPoint {
  double alpha = 0.0;  // NaN for best-over-grid trend entries
  double beta = 0.0;
  double sigma_l = 0.0;
  double snr = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  int count = 0;
};

struct SweepResult {
  SweepMode mode = SweepMode::kAlphaBeta;
  std::vector<ResultRow> rows;     // long format: every (point, run)
  std::vector<ResultRow> per_seed; // snr mode: best over (alpha, beta) per (level, run)
  std::vector<SweepPoint> surface; // mean over runs per (alpha, beta, level)
  std::vector<SweepPoint> trend;   // snr mode: mean of per_seed per level
  std::vector<std::string> failures;
};

/// DiLat sensitivity. alpha_beta: error surface over the DiLat (alpha, beta)
/// grid at the first sigma_l. snr: for each level in cfg.snr, sigma_l is set
/// from ||L2_hat||_F^2 / sigma_l^2 and the grid is swept.
SweepResult sensitivity_sweep(const ExperimentConfig& cfg, SweepMode mode,
                              int workers = 1);

/// Runs fn(0..count-1) on a bounded pool of worker threads.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn);

// CSV with columns solver,graph,seed,alpha,beta,sigma_l,tau,jaccard,iters,wall_ms.
void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);

// Long-format CSV for plotting:
// mode,solver,graph,run,seed,alpha,beta,sigma_l,snr,jaccard.
void write_long_csv(std::ostream& os, const std::string& mode,
                    const std::vector<ResultRow>& rows);

}  // namespace ggmlab
