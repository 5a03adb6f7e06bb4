#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "betagraph/fisher.hpp"
#include "betagraph/solver.hpp"

namespace betagraph {

/// Standard normal quantile Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);

/// Two-sided critical value z_{1 - alpha/2} for a confidence level in (0, 1).
double critical_value(double level);

struct Coordinate {
  Vertex i;
  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

struct Contrast {
  Vertex i;
  Vertex j;
  friend bool operator==(const Contrast&, const Contrast&) = default;
};

using Target = std::variant<Coordinate, Contrast>;

struct IntervalEstimate {
  Target target;
  double point;
  double se;
  double level;
  double lo;
  double hi;

  bool covers(double truth) const noexcept { return lo <= truth && truth <= hi; }
  double width() const noexcept { return hi - lo; }
};

/// v_ii^{-1/2}
double se_beta(const FisherMatrix& v, Vertex i);
double se_beta(const FitResult& fit, const FisherMatrix& v, Vertex i);

IntervalEstimate ci_coordinate(const FitResult& fit, const FisherMatrix& v, Vertex i,
                               double level);

/// Variance s_ii + s_jj - 2 s_ij = 1/v_ii + 1/v_jj.
IntervalEstimate ci_contrast(const FitResult& fit, const FisherMatrix& v, Vertex i, Vertex j,
                             double level);

/// z_i = v_ii^{1/2} (beta_hat_i - beta_i), with v evaluated at the true beta.
std::vector<double> z_statistics(const FitResult& fit, const FisherMatrix& v_true,
                                 const BetaVector& beta_true);

/// Correlation between the sorted sample and normal quantiles at (k - 1/2)/n.
double qq_correlation(std::span<const double> sample);

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;
  double qq_correlation = 0.0;
  std::size_t n = 0;
};

SampleSummary summarize(std::span<const double> sample);

struct InferenceCsvOptions {
  double level = 0.95;
  bool table2_compat = false;
};

/// Writes "vertex,beta_hat,se,ci_lo,ci_hi[,table2_compat]" with 6 significant
/// digits. The compat column is v_ii^{1/2}.
void write_inference_csv(std::ostream& out, const FitResult& fit, const FisherMatrix& v,
                         const InferenceCsvOptions& opts);

}  // namespace betagraph
