#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "betagraph/fisher.hpp"
#include "betagraph/graph.hpp"
#include "betagraph/inference.hpp"
#include "betagraph/montecarlo.hpp"
#include "betagraph/solver.hpp"

#ifndef BETAGRAPH_DATA_DIR
#define BETAGRAPH_DATA_DIR "data"
#endif

namespace betagraph::cli {
namespace {

constexpr std::uint64_t kDefaultSeed = 7;
constexpr const char* kFoodwebFile = "chesapeake_foodweb.edges";

/// Usage or I/O problem; maps to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

/// Writes to `path`, or to `fallback` when path is empty or "-".
template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write '" + path + "'");
  fn(f);
}

std::vector<std::string> data_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(b, e - b + 1));
  }
  return lines;
}

DegreeSequence read_degrees(std::istream& in) {
  std::vector<int> d;
  for (const auto& tok : data_lines(in)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("bad degree '" + tok + "'");
    }
    if (used != tok.size()) throw UsageError("bad degree '" + tok + "'");
    d.push_back(v);
  }
  try {
    return DegreeSequence(std::move(d));
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
}

BetaVector read_beta(std::istream& in) {
  std::vector<double> b;
  for (const auto& tok : data_lines(in)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("bad beta value '" + tok + "'");
    }
    if (used != tok.size()) throw UsageError("bad beta value '" + tok + "'");
    b.push_back(v);
  }
  try {
    return BetaVector(std::move(b));
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("BETAGRAPH_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("BETAGRAPH_SEED is not an unsigned integer: ") + env);
  }
  return kDefaultSeed;
}

double level_from_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  return 1.0 - alpha;
}

struct FitOptions {
  std::string input;
  bool degrees = false;
  double alpha = 0.05;
  FitConfig cfg;
  bool table2_compat = false;
  std::string output;
  std::string dump_fisher;
};

void add_solver_flags(CLI::App& app, FitConfig& cfg) {
  app.add_option("--tol", cfg.tol, "sup-norm residual tolerance")->capture_default_str();
  app.add_option("--max-iter", cfg.max_iter, "iteration cap")->capture_default_str();
  app.add_option("--blowup", cfg.blowup, "|beta| divergence threshold")->capture_default_str();
}

/// Shared by `fit` and `analyze-foodweb`; returns the fit so callers can add
/// their own reporting.
int fit_and_report(const FitOptions& o, std::ostream& out, std::ostream& err,
                   std::optional<FitResult>* fit_out = nullptr,
                   std::optional<DegreeSequence>* degrees_out = nullptr) {
  const double level = level_from_alpha(o.alpha);
  try {
    o.cfg.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }

  auto in = open_input(o.input);
  DegreeSequence d;
  if (o.degrees) {
    d = read_degrees(in);
  } else {
    try {
      const auto parsed = parse_edge_list(in);
      if (parsed.duplicates_collapsed > 0) {
        err << "warning: collapsed " << parsed.duplicates_collapsed << " duplicate edge(s)\n";
      }
      d = degree_sequence(parsed.graph);
    } catch (const ParseError& e) {
      throw UsageError(o.input + ": " + e.what());
    }
  }
  if (d.size() < 3) throw UsageError("need at least 3 vertices");

  const FitResult fit = solve_mle(d, o.cfg);
  if (degrees_out) *degrees_out = d;
  if (fit_out) *fit_out = fit;
  if (fit.status == FitStatus::NonExistent) {
    err << "MLE does not exist (status " << to_string(fit.status) << ", iterations " << fit.iterations
        << ")\n";
    return kNonExistent;
  }
  if (fit.status == FitStatus::MaxIterExceeded) {
    err << "MLE not found: no convergence within " << o.cfg.max_iter << " iterations (residual "
        << fit.residual << ")\n";
    return kNonExistent;
  }

  const FisherMatrix v(fit.beta_hat);
  with_output(o.output, out, [&](std::ostream& os) {
    write_inference_csv(os, fit, v, {level, o.table2_compat});
  });
  if (!o.dump_fisher.empty()) {
    with_output(o.dump_fisher, out, [&](std::ostream& os) { dump_fisher_csv(os, v); });
  }
  err << "converged in " << fit.iterations << " iterations, residual " << fit.residual
      << ", log-likelihood " << fit.log_likelihood << '\n';
  return kOk;
}

std::vector<std::pair<Vertex, Vertex>> parse_pairs(const std::string& text, std::size_t t) {
  if (text.empty()) return default_contrast_pairs(t);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    unsigned long i = 0, j = 0;
    char comma = 0;
    std::istringstream p(item);
    if (!(p >> i >> comma >> j) || comma != ',' || i < 1 || j < 1 || i > t || j > t || i == j) {
      throw UsageError("bad --pairs entry '" + item + "' for t=" + std::to_string(t));
    }
    pairs.emplace_back(i, j);
  }
  return pairs;
}

}  // namespace

std::string default_data_dir() { return BETAGRAPH_DATA_DIR; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum likelihood fitting and inference for the beta-model of random graphs", "betagraph"};
  app.require_subcommand(1);

  FitOptions fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "fit beta from an edge list or degree sequence");
  fit_cmd->add_option("input", fit_opts.input, "edge-list file (or degree file with --degrees)")->required();
  fit_cmd->add_flag("--degrees", fit_opts.degrees, "input holds one degree per line");
  fit_cmd->add_option("--alpha", fit_opts.alpha, "1 - confidence level")->capture_default_str();
  fit_cmd->add_flag("--table2-compat", fit_opts.table2_compat, "add a v_ii^{1/2} column");
  fit_cmd->add_option("-o,--output", fit_opts.output, "output CSV path (default stdout)");
  fit_cmd->add_option("--dump-fisher", fit_opts.dump_fisher, "write V and S entries as CSV");
  add_solver_flags(*fit_cmd, fit_opts.cfg);

  std::vector<std::size_t> sim_t;
  std::vector<std::string> sim_l{"zero", "loglog", "sqrtlog", "log"};
  std::size_t sim_reps = 1000;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_pairs;
  double sim_alpha = 0.05;
  unsigned sim_threads = std::max(1u, std::thread::hardware_concurrency());
  std::string sim_out, sim_trace, sim_qq, sim_counts;
  FitConfig sim_cfg;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo coverage over a (t, L) grid");
  sim_cmd->add_option("--t", sim_t, "vertex counts")->required();
  sim_cmd->add_option("--l", sim_l, "L growth: zero, loglog, sqrtlog, log")->capture_default_str();
  sim_cmd->add_option("--reps", sim_reps, "replications per scenario")->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, "master seed (env BETAGRAPH_SEED, default 7)");
  sim_cmd->add_option("--pairs", sim_pairs, "contrast pairs 'i,j;i,j' (default (1,t);(t/2,t/2+1);(t-1,t))");
  sim_cmd->add_option("--alpha", sim_alpha, "1 - confidence level")->capture_default_str();
  sim_cmd->add_option("--threads", sim_threads, "worker threads (does not change results)");
  sim_cmd->add_option("-o,--output", sim_out, "table CSV path (default stdout)");
  sim_cmd->add_option("--trace", sim_trace, "per-replication log CSV");
  sim_cmd->add_option("--qq", sim_qq, "Q-Q data CSV");
  sim_cmd->add_option("--counts", sim_counts, "raw counts and z summaries CSV");
  add_solver_flags(*sim_cmd, sim_cfg);

  std::size_t sample_t = 0;
  std::optional<std::string> sample_l;
  std::optional<double> sample_const;
  std::string sample_beta_file;
  std::optional<std::uint64_t> sample_seed;
  std::string sample_out;
  auto* sample_cmd = app.add_subcommand("sample", "sample a graph as an edge list");
  sample_cmd->add_option("--t", sample_t, "vertex count");
  sample_cmd->add_option("--l", sample_l, "beta_i = i L_t / t with this L growth");
  sample_cmd->add_option("--beta-const", sample_const, "constant beta for every vertex");
  sample_cmd->add_option("--beta-file", sample_beta_file, "one beta per line");
  sample_cmd->add_option("--seed", sample_seed, "seed (env BETAGRAPH_SEED, default 7)");
  sample_cmd->add_option("-o,--output", sample_out, "output path (default stdout)");

  std::string fw_data;
  double fw_alpha = 0.05;
  std::string fw_out;
  auto* fw_cmd = app.add_subcommand("analyze-foodweb", "fit the bundled Chesapeake Bay food web");
  fw_cmd->add_option("--data", fw_data, "edge-list path (default: bundled file)");
  fw_cmd->add_option("--alpha", fw_alpha, "1 - confidence level")->capture_default_str();
  fw_cmd->add_option("-o,--output", fw_out, "output CSV path (default stdout)");

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*fit_cmd) return fit_and_report(fit_opts, out, err);

    if (*sim_cmd) {
      const double level = level_from_alpha(sim_alpha);
      const std::uint64_t seed = resolve_seed(sim_seed);
      if (sim_reps < 1) throw UsageError("--reps must be at least 1");
      std::vector<LGrowth> growths;
      for (const auto& name : sim_l) {
        try {
          growths.push_back(parse_growth(name));
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
      std::vector<CoverageReport> reports;
      const bool keep = !sim_trace.empty() || !sim_qq.empty();
      for (std::size_t t : sim_t) {
        if (t < 3) throw UsageError("--t must be at least 3");
        const auto pairs = parse_pairs(sim_pairs, t);
        for (LGrowth g : growths) {
          Scenario s;
          s.t = t;
          s.growth = g;
          s.n_reps = sim_reps;
          s.level = level;
          s.master_seed = seed;
          s.contrast_pairs = pairs;
          s.fit = sim_cfg;
          s.threads = sim_threads;
          s.keep_samples = keep;
          try {
            s.validate();
          } catch (const std::domain_error& e) {
            throw UsageError(e.what());
          }
          reports.push_back(run_scenario(s));
        }
      }
      const std::string table = export_table1(reports);
      with_output(sim_out, out, [&](std::ostream& os) { os << table; });
      if (!sim_counts.empty()) {
        with_output(sim_counts, out, [&](std::ostream& os) { write_counts_csv(os, reports); });
      }
      if (!sim_trace.empty()) {
        with_output(sim_trace, out, [&](std::ostream& os) { write_trace_csv(os, reports); });
      }
      if (!sim_qq.empty()) {
        with_output(sim_qq, out, [&](std::ostream& os) { write_qq_csv(os, reports); });
      }
      return kOk;
    }

    if (*sample_cmd) {
      const int sources = (sample_l ? 1 : 0) + (sample_const ? 1 : 0) + (sample_beta_file.empty() ? 0 : 1);
      if (sources != 1) throw UsageError("give exactly one of --l, --beta-const, --beta-file");
      BetaVector beta;
      if (!sample_beta_file.empty()) {
        auto in = open_input(sample_beta_file);
        beta = read_beta(in);
        if (sample_t != 0 && sample_t != beta.size()) throw UsageError("--t disagrees with --beta-file length");
      } else {
        if (sample_t < 2) throw UsageError("--t must be at least 2");
        if (sample_const) {
          try {
            beta = BetaVector::constant(sample_t, *sample_const);
          } catch (const std::domain_error& e) {
            throw UsageError(e.what());
          }
        } else {
          if (sample_t < 3) throw UsageError("--l needs --t of at least 3");
          try {
            beta = beta_grid(sample_t, parse_growth(*sample_l));
          } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
          }
        }
      }
      if (beta.size() < 2) throw UsageError("need at least 2 vertices");
      const Graph g = sample_graph(beta, resolve_seed(sample_seed));
      with_output(sample_out, out, [&](std::ostream& os) { write_edge_list(os, g); });
      return kOk;
    }

    if (*fw_cmd) {
      FitOptions o;
      o.input = fw_data.empty() ? default_data_dir() + "/" + kFoodwebFile : fw_data;
      o.alpha = fw_alpha;
      o.table2_compat = true;
      o.output = fw_out;
      std::ostringstream csv;
      std::optional<FitResult> fit;
      std::optional<DegreeSequence> d;
      const int rc = fit_and_report(o, csv, err, &fit, &d);
      if (rc != kOk) return rc;

      std::vector<Vertex> order(d->size());
      std::iota(order.begin(), order.end(), Vertex{1});
      std::stable_sort(order.begin(), order.end(),
                       [&](Vertex a, Vertex b) { return (*d)[a] > (*d)[b]; });
      order.resize(std::min<std::size_t>(4, order.size()));
      std::sort(order.begin(), order.end());
      out << "# largest four degrees:";
      for (Vertex v : order) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " vertex %zu (degree %d, beta_hat %.3f)", v, (*d)[v],
                      fit->beta_hat[v]);
        out << buf << (v == order.back() ? "" : ";");
      }
      out << '\n' << csv.str();
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace betagraph::cli
