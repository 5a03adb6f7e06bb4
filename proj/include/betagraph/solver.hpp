#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "betagraph/graph.hpp"

namespace betagraph {

struct FitConfig {
  double tol = 1e-8;        ///< sup-norm residual tolerance
  int max_iter = 5000;
  double blowup = 30.0;     ///< |beta_i| beyond this is treated as divergence

  void validate() const;
};

enum class FitStatus { Converged, NonExistent, MaxIterExceeded };

std::string_view to_string(FitStatus s) noexcept;

struct FitResult {
  BetaVector beta_hat;
  FitStatus status = FitStatus::MaxIterExceeded;
  int iterations = 0;
  double residual = 0.0;
  double log_likelihood = 0.0;

  bool converged() const noexcept { return status == FitStatus::Converged; }
};

/// max_i |d_i - sum_{j != i} p_ij(beta)|
double residual(const BetaVector& beta, const DegreeSequence& d);

/// sum_i beta_i d_i - sum_{i<j} log(1 + e^{beta_i + beta_j})
double log_likelihood(const BetaVector& beta, const DegreeSequence& d);

/// Solves the moment equations d_i = sum_{j != i} p_ij by the fixed-point
/// sweep
///
///   beta_i <- log d_i - log sum_{j != i} 1 / (e^{-beta_j} + e^{beta_i}).
///
/// Non-existence is declared when some d_i is 0 or t-1, when an iterate
/// exceeds cfg.blowup, or when the cap is reached while max|beta| is still
/// growing. A capped run with a stalled norm is MaxIterExceeded.
///
/// `start` overrides the default initialisation 0.5 * logit(d_i / (t-1)).
FitResult solve_mle(const DegreeSequence& d, const FitConfig& cfg = {},
                    const std::optional<BetaVector>& start = std::nullopt);

/// Closed-form MLE for a k-regular degree sequence on t vertices.
BetaVector regular_closed_form(std::size_t t, int k);

}  // namespace betagraph
