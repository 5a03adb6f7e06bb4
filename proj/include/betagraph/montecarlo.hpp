#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "betagraph/graph.hpp"
#include "betagraph/inference.hpp"
#include "betagraph/solver.hpp"

namespace betagraph {

/// How the largest influence parameter L_t grows with t.
enum class LGrowth { Zero, LogLog, SqrtLog, Log, Fixed };

std::string_view to_string(LGrowth g) noexcept;
/// Accepts "zero", "loglog", "sqrtlog" (or "sqrt"), "log".
LGrowth parse_growth(std::string_view name);

/// L_t for the given growth; `fixed_l` is used only for LGrowth::Fixed.
double growth_value(std::size_t t, LGrowth g, double fixed_l = 0.0);

/// beta_i = i * L_t / t for i = 1..t.
BetaVector beta_grid(std::size_t t, LGrowth g, double fixed_l = 0.0);

/// (1,t), (t/2, t/2+1), (t-1,t).
std::vector<std::pair<Vertex, Vertex>> default_contrast_pairs(std::size_t t);

struct Scenario {
  std::size_t t = 50;
  LGrowth growth = LGrowth::Zero;
  double fixed_l = 0.0;
  std::size_t n_reps = 1000;
  double level = 0.95;
  std::uint64_t master_seed = 7;
  std::vector<std::pair<Vertex, Vertex>> contrast_pairs;
  FitConfig fit;
  Vertex designated = 1;       ///< coordinate whose z-values are summarised
  unsigned threads = 1;        ///< worker count; never affects results
  bool keep_samples = false;   ///< retain z-values and per-replication traces

  void validate() const;
};

struct ReplicationTrace {
  std::size_t rep;
  std::uint64_t seed;
  FitStatus status;
  int iterations;
  double residual;
};

struct CoverageReport {
  Scenario scenario;
  std::size_t n_existing = 0;
  std::size_t n_nonexistent = 0;
  std::size_t n_maxiter = 0;

  std::vector<std::size_t> pair_covered;  ///< per contrast pair
  std::size_t coordinate_covered = 0;     ///< summed over coordinates and fits
  std::size_t designated_z_covered = 0;   ///< |z_designated| < critical value

  std::vector<double> pair_coverage;      ///< NaN when n_existing == 0
  double acp = 0.0;
  double nonexistence_rate = 0.0;
  double maxiter_rate = 0.0;
  double designated_z_coverage = 0.0;

  SampleSummary designated_z;
  SampleSummary pooled_z;
  /// max_i |beta_hat_i - beta_i| for each existing fit, in replication order.
  std::vector<double> max_abs_error;

  // Populated when scenario.keep_samples is set.
  std::vector<double> designated_z_values;
  std::vector<double> pooled_z_values;
  std::vector<ReplicationTrace> traces;
};

/// Seed of replication `rep` (0-based) under `master_seed`.
std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t rep) noexcept;

/// Samples, fits, and scores n_reps graphs. Identical scenarios give identical
/// reports for any thread count.
CoverageReport run_scenario(const Scenario& s);

/// Table-shaped CSV: one row per (t, pair) plus an ACP row per t, two columns
/// (coverage %, nonexistence %) per growth in Zero, LogLog, SqrtLog, Log,
/// Fixed order. Throws std::domain_error on an empty or inconsistent set.
std::string export_table1(const std::vector<CoverageReport>& reports);

/// Raw counts and z summaries, one row per report.
void write_counts_csv(std::ostream& out, const std::vector<CoverageReport>& reports);

/// "t,growth,rep,seed,status,iters,residual"
void write_trace_csv(std::ostream& out, const std::vector<CoverageReport>& reports);

/// Sorted z-values against normal quantiles, for both the designated
/// coordinate and the pooled sample.
void write_qq_csv(std::ostream& out, const std::vector<CoverageReport>& reports);

}  // namespace betagraph
