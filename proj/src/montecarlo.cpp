#include "betagraph/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "betagraph/fisher.hpp"
#include "betagraph/random.hpp"

namespace betagraph {

std::string_view to_string(LGrowth g) noexcept {
  switch (g) {
    case LGrowth::Zero: return "zero";
    case LGrowth::LogLog: return "loglog";
    case LGrowth::SqrtLog: return "sqrtlog";
    case LGrowth::Log: return "log";
    case LGrowth::Fixed: return "fixed";
  }
  return "unknown";
}

LGrowth parse_growth(std::string_view name) {
  if (name == "zero" || name == "0") return LGrowth::Zero;
  if (name == "loglog") return LGrowth::LogLog;
  if (name == "sqrtlog" || name == "sqrt") return LGrowth::SqrtLog;
  if (name == "log") return LGrowth::Log;
  throw std::invalid_argument("unknown L growth '" + std::string(name) +
                              "' (expected zero, loglog, sqrtlog, log)");
}

double growth_value(std::size_t t, LGrowth g, double fixed_l) {
  const double lt = std::log(static_cast<double>(t));
  switch (g) {
    case LGrowth::Zero: return 0.0;
    case LGrowth::LogLog: return std::log(lt);
    case LGrowth::SqrtLog: return std::sqrt(lt);
    case LGrowth::Log: return lt;
    case LGrowth::Fixed: return fixed_l;
  }
  return 0.0;
}

BetaVector beta_grid(std::size_t t, LGrowth g, double fixed_l) {
  if (t < 3) throw std::domain_error("beta_grid: need t >= 3");
  const double l = growth_value(t, g, fixed_l);
  std::vector<double> beta(t);
  for (std::size_t i = 1; i <= t; ++i) beta[i - 1] = static_cast<double>(i) * l / static_cast<double>(t);
  // Exact top value regardless of rounding in i * l / t.
  beta[t - 1] = l;
  return BetaVector(std::move(beta));
}

std::vector<std::pair<Vertex, Vertex>> default_contrast_pairs(std::size_t t) {
  return {{1, t}, {t / 2, t / 2 + 1}, {t - 1, t}};
}

void Scenario::validate() const {
  if (t < 3) throw std::domain_error("scenario: t must be at least 3");
  if (n_reps < 1) throw std::domain_error("scenario: n_reps must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("scenario: level must lie in (0, 1)");
  if (designated < 1 || designated > t) throw std::domain_error("scenario: designated vertex out of range");
  for (const auto& [i, j] : contrast_pairs) {
    if (i == j || i < 1 || j < 1 || i > t || j > t) {
      throw std::domain_error("scenario: invalid contrast pair");
    }
  }
  fit.validate();
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t rep) noexcept {
  return derive_seed(master_seed, rep);
}

namespace {

struct Outcome {
  FitStatus status = FitStatus::MaxIterExceeded;
  int iterations = 0;
  double residual = 0.0;
  std::vector<char> pair_covered;
  std::size_t coordinate_covered = 0;
  double max_abs_error = 0.0;
  std::vector<double> z;
};

Outcome run_replication(const Scenario& s, const BetaVector& truth, const FisherMatrix& v_true,
                        std::uint64_t seed) {
  const Graph g = sample_graph(truth, seed);
  const FitResult fit = solve_mle(degree_sequence(g), s.fit);
  Outcome o;
  o.status = fit.status;
  o.iterations = fit.iterations;
  o.residual = fit.residual;
  if (!fit.converged()) return o;

  const FisherMatrix v_hat(fit.beta_hat);
  for (const auto& [i, j] : s.contrast_pairs) {
    const auto ci = ci_contrast(fit, v_hat, i, j, s.level);
    o.pair_covered.push_back(ci.covers(truth[i] - truth[j]) ? 1 : 0);
  }
  for (Vertex i = 1; i <= s.t; ++i) {
    if (ci_coordinate(fit, v_hat, i, s.level).covers(truth[i])) ++o.coordinate_covered;
    o.max_abs_error = std::max(o.max_abs_error, std::abs(fit.beta_hat[i] - truth[i]));
  }
  o.z = z_statistics(fit, v_true, truth);
  return o;
}

double rate(std::size_t count, std::size_t denom) {
  return denom == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : static_cast<double>(count) / static_cast<double>(denom);
}

}  // namespace

CoverageReport run_scenario(const Scenario& s) {
  s.validate();
  const BetaVector truth = beta_grid(s.t, s.growth, s.fixed_l);
  const FisherMatrix v_true(truth);

  std::vector<Outcome> outcomes(s.n_reps);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<std::size_t> failed_rep;
  std::string failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= s.n_reps) return;
      {
        std::lock_guard lock(error_mutex);
        if (failed_rep) return;
      }
      try {
        outcomes[r] = run_replication(s, truth, v_true, replication_seed(s.master_seed, r));
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!failed_rep || r < *failed_rep) {
          failed_rep = r;
          failure = e.what();
        }
      }
    }
  };

  const unsigned workers = std::clamp<unsigned>(s.threads, 1u, static_cast<unsigned>(s.n_reps));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failed_rep) {
    throw std::runtime_error("replication " + std::to_string(*failed_rep) + " (seed " +
                             std::to_string(replication_seed(s.master_seed, *failed_rep)) +
                             ") failed: " + failure);
  }

  // Aggregation walks replications in index order, so the report does not
  // depend on scheduling.
  CoverageReport rep;
  rep.scenario = s;
  rep.pair_covered.assign(s.contrast_pairs.size(), 0);
  const double crit = critical_value(s.level);
  std::vector<double> designated, pooled;
  for (std::size_t r = 0; r < s.n_reps; ++r) {
    const Outcome& o = outcomes[r];
    switch (o.status) {
      case FitStatus::Converged: ++rep.n_existing; break;
      case FitStatus::NonExistent: ++rep.n_nonexistent; break;
      case FitStatus::MaxIterExceeded: ++rep.n_maxiter; break;
    }
    if (s.keep_samples) {
      rep.traces.push_back({r, replication_seed(s.master_seed, r), o.status, o.iterations, o.residual});
    }
    if (o.status != FitStatus::Converged) continue;
    for (std::size_t k = 0; k < o.pair_covered.size(); ++k) rep.pair_covered[k] += o.pair_covered[k];
    rep.coordinate_covered += o.coordinate_covered;
    rep.max_abs_error.push_back(o.max_abs_error);
    const double zd = o.z[s.designated - 1];
    designated.push_back(zd);
    if (std::abs(zd) < crit) ++rep.designated_z_covered;
    pooled.insert(pooled.end(), o.z.begin(), o.z.end());
  }

  for (std::size_t covered : rep.pair_covered) rep.pair_coverage.push_back(rate(covered, rep.n_existing));
  rep.acp = rate(rep.coordinate_covered, rep.n_existing * s.t);
  rep.nonexistence_rate = rate(rep.n_nonexistent, s.n_reps);
  rep.maxiter_rate = rate(rep.n_maxiter, s.n_reps);
  rep.designated_z_coverage = rate(rep.designated_z_covered, rep.n_existing);
  rep.designated_z = summarize(designated);
  rep.pooled_z = summarize(pooled);
  if (s.keep_samples) {
    rep.designated_z_values = std::move(designated);
    rep.pooled_z_values = std::move(pooled);
  }
  return rep;
}

namespace {

std::string percent(double r) {
  if (std::isnan(r)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * r);
  return buf;
}

std::string num6(double x) {
  if (std::isnan(x)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Growth order used for table columns; Fixed reports are keyed by their L.
using ColumnKey = std::pair<int, double>;

ColumnKey column_key(const Scenario& s) {
  return {static_cast<int>(s.growth), s.growth == LGrowth::Fixed ? s.fixed_l : 0.0};
}

std::string column_name(const Scenario& s) {
  if (s.growth == LGrowth::Fixed) return "L=" + num6(s.fixed_l);
  return std::string(to_string(s.growth));
}

}  // namespace

std::string export_table1(const std::vector<CoverageReport>& reports) {
  if (reports.empty()) throw std::domain_error("export_table1: no reports");
  const double level = reports.front().scenario.level;

  std::map<ColumnKey, std::string> columns;
  std::map<std::size_t, std::map<ColumnKey, const CoverageReport*>> grid;
  for (const auto& r : reports) {
    const auto& s = r.scenario;
    if (s.level != level) throw std::domain_error("export_table1: reports use different levels");
    const auto key = column_key(s);
    columns.emplace(key, column_name(s));
    auto& row = grid[s.t];
    if (!row.emplace(key, &r).second) throw std::domain_error("export_table1: duplicate scenario");
  }
  for (const auto& [t, row] : grid) {
    if (row.size() != columns.size()) {
      throw std::domain_error("export_table1: t=" + std::to_string(t) + " lacks some L columns");
    }
    const auto& pairs = row.begin()->second->scenario.contrast_pairs;
    for (const auto& [key, r] : row) {
      if (r->scenario.contrast_pairs != pairs) {
        throw std::domain_error("export_table1: contrast pairs differ within t=" + std::to_string(t));
      }
    }
  }

  std::ostringstream out;
  out << "t,target";
  for (const auto& [key, name] : columns) out << ',' << name << "_coverage," << name << "_nonexistent";
  out << '\n';
  for (const auto& [t, row] : grid) {
    const auto& pairs = row.begin()->second->scenario.contrast_pairs;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      out << t << ",\"(" << pairs[k].first << ',' << pairs[k].second << ")\"";
      for (const auto& [key, r] : row) {
        out << ',' << percent(r->pair_coverage[k]) << ',' << percent(r->nonexistence_rate);
      }
      out << '\n';
    }
    out << t << ",ACP";
    for (const auto& [key, r] : row) out << ',' << percent(r->acp) << ',' << percent(r->nonexistence_rate);
    out << '\n';
  }
  return out.str();
}

void write_counts_csv(std::ostream& out, const std::vector<CoverageReport>& reports) {
  out << "t,growth,L,n_reps,n_existing,n_nonexistent,n_maxiter,acp,"
         "z_designated_mean,z_designated_sd,z_designated_coverage,"
         "z_pooled_mean,z_pooled_sd,z_pooled_qq_correlation\n";
  for (const auto& r : reports) {
    const auto& s = r.scenario;
    out << s.t << ',' << column_name(s) << ',' << num6(growth_value(s.t, s.growth, s.fixed_l)) << ','
        << s.n_reps << ',' << r.n_existing << ',' << r.n_nonexistent << ',' << r.n_maxiter << ','
        << num6(r.acp) << ',' << num6(r.designated_z.mean) << ',' << num6(r.designated_z.sd) << ','
        << num6(r.designated_z_coverage) << ',' << num6(r.pooled_z.mean) << ','
        << num6(r.pooled_z.sd) << ',' << num6(r.pooled_z.qq_correlation) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<CoverageReport>& reports) {
  out << "t,growth,rep,seed,status,iters,residual\n";
  for (const auto& r : reports) {
    for (const auto& tr : r.traces) {
      out << r.scenario.t << ',' << column_name(r.scenario) << ',' << tr.rep << ',' << tr.seed << ','
          << to_string(tr.status) << ',' << tr.iterations << ',' << num6(tr.residual) << '\n';
    }
  }
}

void write_qq_csv(std::ostream& out, const std::vector<CoverageReport>& reports) {
  out << "t,growth,series,k,z,normal_quantile\n";
  auto emit = [&](const CoverageReport& r, const std::string& series, std::vector<double> z) {
    std::sort(z.begin(), z.end());
    const std::size_t n = z.size();
    for (std::size_t k = 0; k < n; ++k) {
      out << r.scenario.t << ',' << column_name(r.scenario) << ',' << series << ',' << k + 1 << ','
          << num6(z[k]) << ',' << num6(normal_quantile((k + 0.5) / n)) << '\n';
    }
  };
  for (const auto& r : reports) {
    emit(r, "z" + std::to_string(r.scenario.designated), r.designated_z_values);
    emit(r, "pooled", r.pooled_z_values);
  }
}

}  // namespace betagraph
