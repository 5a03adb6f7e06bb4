#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "betagraph/montecarlo.hpp"
#include "betagraph/random.hpp"

using namespace betagraph;

namespace {

Scenario small_scenario(LGrowth g, std::size_t reps = 60) {
  Scenario s;
  s.t = 30;
  s.growth = g;
  s.n_reps = reps;
  s.master_seed = 11;
  s.contrast_pairs = default_contrast_pairs(s.t);
  return s;
}

bool same_report(const CoverageReport& a, const CoverageReport& b) {
  return a.n_existing == b.n_existing && a.n_nonexistent == b.n_nonexistent &&
         a.n_maxiter == b.n_maxiter && a.pair_covered == b.pair_covered &&
         a.coordinate_covered == b.coordinate_covered && a.max_abs_error == b.max_abs_error &&
         a.designated_z_values == b.designated_z_values && a.pooled_z_values == b.pooled_z_values &&
         a.designated_z.mean == b.designated_z.mean && a.pooled_z.sd == b.pooled_z.sd;
}

}  // namespace

TEST_CASE("beta_grid") {
  const auto b = beta_grid(4, LGrowth::Fixed, 2.0);
  CHECK(b == BetaVector({0.5, 1.0, 1.5, 2.0}));
  const auto zero = beta_grid(50, LGrowth::Zero);
  CHECK(zero.max_abs() == 0.0);
  const auto lg = beta_grid(50, LGrowth::Log);
  CHECK(lg[50] == doctest::Approx(3.912023).epsilon(1e-6));
  CHECK(lg.max_abs() == lg[50]);
  CHECK(beta_grid(100, LGrowth::LogLog)[100] == doctest::Approx(std::log(std::log(100.0))));
  CHECK(beta_grid(100, LGrowth::SqrtLog)[100] == doctest::Approx(std::sqrt(std::log(100.0))));
  CHECK_THROWS_AS(beta_grid(2, LGrowth::Zero), std::domain_error);
}

TEST_CASE("growth names") {
  for (LGrowth g : {LGrowth::Zero, LGrowth::LogLog, LGrowth::SqrtLog, LGrowth::Log}) {
    CHECK(parse_growth(to_string(g)) == g);
  }
  CHECK(parse_growth("sqrt") == LGrowth::SqrtLog);
  CHECK_THROWS_AS(parse_growth("cubic"), std::invalid_argument);
}

TEST_CASE("replication seeds do not collide") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t master : {0ull, 1ull, 7ull}) {
    for (std::size_t r = 0; r < 5000; ++r) seeds.insert(replication_seed(master, r));
  }
  CHECK(seeds.size() == 15000);
}

TEST_CASE("scenario validation") {
  auto s = small_scenario(LGrowth::Zero);
  s.contrast_pairs = {{3, 3}};
  CHECK_THROWS_AS(run_scenario(s), std::domain_error);
  s = small_scenario(LGrowth::Zero);
  s.n_reps = 0;
  CHECK_THROWS_AS(run_scenario(s), std::domain_error);
  s = small_scenario(LGrowth::Zero);
  s.level = 1.0;
  CHECK_THROWS_AS(run_scenario(s), std::domain_error);
}

TEST_CASE("run_scenario is deterministic across thread counts") {
  auto s = small_scenario(LGrowth::LogLog);
  s.keep_samples = true;
  s.threads = 1;
  const auto one = run_scenario(s);
  s.threads = 4;
  const auto four = run_scenario(s);
  CHECK(same_report(one, four));
  CHECK(same_report(one, run_scenario(s)));
  REQUIRE(one.traces.size() == s.n_reps);
  for (std::size_t r = 0; r < s.n_reps; ++r) CHECK(one.traces[r].seed == replication_seed(s.master_seed, r));
}

TEST_CASE("report bookkeeping") {
  const auto rep = run_scenario(small_scenario(LGrowth::Zero, 100));
  CHECK(rep.n_existing + rep.n_nonexistent + rep.n_maxiter == 100);
  CHECK(rep.nonexistence_rate + rep.maxiter_rate + static_cast<double>(rep.n_existing) / 100 ==
        doctest::Approx(1.0));
  for (double c : rep.pair_coverage) {
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
  }
  CHECK(rep.acp >= 0.8);
  CHECK(rep.acp <= 1.0);
  CHECK(rep.max_abs_error.size() == rep.n_existing);
  CHECK(rep.designated_z.n == rep.n_existing);
  CHECK(rep.pooled_z.n == rep.n_existing * 30);
  CHECK(rep.designated_z_values.empty());
}

TEST_CASE("L = log t never yields an MLE") {
  auto s = small_scenario(LGrowth::Log, 50);
  s.t = 50;
  s.contrast_pairs = default_contrast_pairs(50);
  const auto rep = run_scenario(s);
  CHECK(rep.nonexistence_rate == 1.0);
  CHECK(rep.n_existing == 0);
  CHECK(std::isnan(rep.acp));
  for (double c : rep.pair_coverage) CHECK(std::isnan(c));
}

TEST_CASE("z-values at t=50, L=0") {
  auto s = small_scenario(LGrowth::Zero, 1000);
  s.t = 50;
  s.contrast_pairs = default_contrast_pairs(50);
  s.keep_samples = true;
  s.threads = 2;
  const auto rep = run_scenario(s);
  CHECK(rep.nonexistence_rate == 0.0);
  CHECK(std::abs(rep.pooled_z.mean) <= 0.1);
  CHECK(rep.pooled_z.sd >= 0.93);
  CHECK(rep.pooled_z.sd <= 1.07);
  // Per-coordinate bands at N = 1000.
  for (std::size_t i = 0; i < s.t; ++i) {
    std::vector<double> zi;
    for (std::size_t r = 0; r < rep.n_existing; ++r) zi.push_back(rep.pooled_z_values[r * s.t + i]);
    const auto sum = summarize(zi);
    CHECK(std::abs(sum.mean) <= 0.12);
    CHECK(sum.sd >= 0.90);
    CHECK(sum.sd <= 1.10);
  }
  for (double c : rep.pair_coverage) {
    CHECK(c >= 0.926);
    CHECK(c <= 0.966);
  }
  CHECK(rep.acp >= 0.935);
  CHECK(rep.acp <= 0.965);
}

TEST_CASE("z1 coverage at t=100, L=0") {
  Scenario s;
  s.t = 100;
  s.growth = LGrowth::Zero;
  s.n_reps = 1000;
  s.master_seed = 3;
  s.threads = 2;
  const auto rep = run_scenario(s);
  CHECK(rep.designated_z_coverage >= 0.935);
  CHECK(rep.designated_z_coverage <= 0.965);
}

TEST_CASE("export_table1") {
  CHECK_THROWS_AS(export_table1({}), std::domain_error);

  auto s = small_scenario(LGrowth::Zero, 20);
  const auto zero = run_scenario(s);
  const std::string single = export_table1({zero});
  CHECK(single.rfind("t,target,zero_coverage,zero_nonexistent\n30,\"(1,30)\",", 0) == 0);
  CHECK(single.find("\n30,ACP,") != std::string::npos);

  std::vector<CoverageReport> grid;
  for (LGrowth g : {LGrowth::Log, LGrowth::Zero, LGrowth::SqrtLog, LGrowth::LogLog}) {
    grid.push_back(run_scenario(small_scenario(g, 10)));
  }
  const std::string table = export_table1(grid);
  CHECK(table.rfind("t,target,zero_coverage,zero_nonexistent,loglog_coverage,loglog_nonexistent,"
                    "sqrtlog_coverage,sqrtlog_nonexistent,log_coverage,log_nonexistent\n",
                    0) == 0);
  std::istringstream lines(table);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 1 + 4);
  CHECK(table.find(",NA,100.0\n") != std::string::npos);

  auto other_level = small_scenario(LGrowth::Log, 5);
  other_level.level = 0.9;
  CHECK_THROWS_AS(export_table1({zero, run_scenario(other_level)}), std::domain_error);
  CHECK_THROWS_AS(export_table1({zero, zero}), std::domain_error);
  auto other_t = small_scenario(LGrowth::Log, 5);
  other_t.t = 20;
  other_t.contrast_pairs = default_contrast_pairs(20);
  CHECK_THROWS_AS(export_table1({zero, run_scenario(other_t)}), std::domain_error);
}

TEST_CASE("auxiliary CSV writers") {
  auto s = small_scenario(LGrowth::Zero, 5);
  s.keep_samples = true;
  const auto rep = run_scenario(s);
  std::ostringstream counts, trace, qq;
  write_counts_csv(counts, {rep});
  write_trace_csv(trace, {rep});
  write_qq_csv(qq, {rep});
  CHECK(counts.str().rfind("t,growth,L,n_reps,n_existing,n_nonexistent,n_maxiter,", 0) == 0);
  CHECK(counts.str().find("\n30,zero,0,5,") != std::string::npos);
  CHECK(trace.str().find("\n30,zero,0," + std::to_string(replication_seed(11, 0)) + ",converged,") !=
        std::string::npos);
  std::size_t qq_lines = 0;
  for (char c : qq.str()) qq_lines += c == '\n';
  CHECK(qq_lines == 1 + rep.n_existing * 31);
}
